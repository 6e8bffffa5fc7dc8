#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "dwlab/csv.hpp"
#include "dwlab/experiment.hpp"

namespace fs = std::filesystem;
using namespace dwlab;

namespace {

int cli(const std::string& args) {
  const std::string cmd = std::string(DWLAB_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / ("dwlab_cli_test_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("command-line tool") {
  if (std::string(DWLAB_CLI).empty()) return;
  const fs::path dir = scratch();

  SUBCASE("profile") {
    const fs::path out = dir / "profile.csv";
    REQUIRE(cli("profile --rho-minus 1.2 --rho-plus 0.8 --L 8 --dy 0.02 --out " + out.string()) == 0);
    const CsvTable t = read_csv(out);
    const auto kv = comment_values(t);
    CHECK(parse_double(kv.at("theta")) == doctest::Approx(0.1123).epsilon(1e-3));
    CHECK(t.columns.front() == "y");
    CHECK(t.rows.size() == 801);
    CHECK(cli("profile --rho-minus -1 --rho-plus 0.8 --out " + out.string()) == 1);
  }

  SUBCASE("simulate, diagnose, report") {
    const fs::path cfg = dir / "small.cfg";
    write_file(cfg,
               "X = 20\nL_y = 4\ndx = 0.05\ndy = 0.05\ntau_end = 1\ntau_step = 0.1\n"
               "bump_amplitude = 0.2\n");
    const fs::path snaps = dir / "snaps";
    REQUIRE(cli("simulate --config " + cfg.string() + " --out-dir " + snaps.string()) == 0);
    CHECK(fs::exists(snaps / "run_meta.csv"));
    CHECK(fs::exists(snaps / "snapshot_0.000000.csv"));
    const CsvTable meta = read_csv(snaps / "run_meta.csv");
    CHECK(meta.columns.size() >= 6);

    const fs::path diag = dir / "diag";
    REQUIRE(cli("diagnose --config " + cfg.string() + " --snapshots-dir " + snaps.string() + " --out-dir " +
                diag.string() + " --reference constant") == 0);
    const EntropyReport rep = report_from_table(read_csv(diag / "timeseries.csv"));
    CHECK(rep.size() == 11);
    CHECK(rep.reference == "constant");
    CHECK(rep.E.back() < rep.E.front());
    CHECK(fs::exists(diag / "scaled_0.000000.csv"));

    // diagnosing stored snapshots reproduces the in-memory pipeline
    const fs::path direct = dir / "direct";
    REQUIRE(cli("run --config " + cfg.string() + " --out-dir " + direct.string()) == 0);
    const EntropyReport rep2 = report_from_table(read_csv(direct / "timeseries.csv"));
    REQUIRE(rep2.size() == rep.size());
    for (std::size_t i = 0; i < rep.size(); ++i) CHECK(rep2.E[i] == doctest::Approx(rep.E[i]).epsilon(1e-12));

    CHECK(cli("report --in " + (diag / "timeseries.csv").string() + " --strict") == 0);
  }

  SUBCASE("config errors exit with 1") {
    const fs::path cfg = dir / "bad.cfg";
    write_file(cfg, "dx = 0.05\nwarp_factor = 9\n");
    CHECK(cli("simulate --config " + cfg.string() + " --out-dir " + (dir / "x").string()) == 1);
    CHECK(cli("simulate --config " + (dir / "missing.cfg").string() + " --out-dir " + dir.string()) == 1);
    CHECK(cli("simulate --set X=5 --out-dir " + (dir / "y").string()) == 1);
    CHECK(cli("nonsense") == 1);
  }

  SUBCASE("verify") {
    CHECK(cli("verify --only 6 --samples 2000") == 0);
    CHECK(cli("verify --only 99") == 1);
  }

  fs::remove_all(dir);
}
