#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dwlab/config.hpp"
#include "dwlab/csv.hpp"
#include "dwlab/errors.hpp"
#include "dwlab/experiment.hpp"
#include "dwlab/profile.hpp"
#include "dwlab/scaling.hpp"
#include "dwlab/verify.hpp"

namespace fs = std::filesystem;
using namespace dwlab;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitAcceptance = 3;

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

// One "key=value" comment line per config entry, space separated.
std::string config_comment(const ExperimentConfig& cfg) {
  std::ostringstream os;
  write_config(os, cfg);
  std::string line, out = "config:";
  std::istringstream is(os.str());
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t") + 1);
      return s;
    };
    out += " " + trim(line.substr(0, eq)) + "=" + trim(line.substr(eq + 1));
  }
  return out;
}

ExperimentConfig load_with_overrides(const std::string& path, const std::vector<std::string>& sets) {
  ExperimentConfig cfg = path.empty() ? ExperimentConfig{} : load_config(path);
  for (const std::string& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
    set_config_value(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

void apply_reference(ExperimentConfig& cfg, const std::string& name) {
  if (!name.empty()) set_config_value(cfg, "reference", name);
  cfg.validate();
}

CsvTable snapshot_table(const PhysicalState& s, const ExperimentConfig& cfg) {
  CsvTable t;
  t.comments.push_back("t=" + format_double(s.t) + " tau=" + format_double(tau_of_time(s.t)) +
                       " dx=" + format_double(s.dx()) + " X=" + format_double(s.half_width()));
  t.comments.push_back(config_comment(cfg));
  t.columns = {"x", "rho", "m"};
  for (std::size_t i = 0; i < s.rho.size(); ++i) t.add_row({s.x.at(i), s.rho[i], s.m[i]});
  return t;
}

PhysicalState snapshot_from_table(const CsvTable& t) {
  const auto kv = comment_values(t);
  const auto it = kv.find("t");
  if (it == kv.end()) throw ConfigError("snapshot file lacks a t= header");
  PhysicalState s;
  s.t = parse_double(it->second);
  const std::vector<double> x = t.column("x");
  if (x.size() < 2) throw ConfigError("snapshot file has fewer than two cells");
  const auto dx = kv.find("dx");
  s.x.origin = x.front();
  s.x.spacing = dx != kv.end() ? parse_double(dx->second) : x[1] - x[0];
  s.x.size = x.size();
  s.rho = t.column("rho");
  s.m = t.column("m");
  return s;
}

CsvTable meta_table(const RunResult& r) {
  CsvTable t;
  t.comments.push_back("steps=" + std::to_string(r.steps) +
                       " max_boundary_deviation=" + format_double(r.max_boundary_deviation) +
                       " boundary_disturbed=" + (r.boundary_disturbed ? "1" : "0"));
  t.columns = {"t",         "dt", "mass", "momentum", "boundary_flux_mass", "boundary_flux_momentum",
               "damping_loss", "damping_estimate"};
  for (const RunMetaRow& m : r.meta)
    t.add_row({m.t, m.dt, m.mass, m.momentum, m.boundary_flux_mass, m.boundary_flux_momentum, m.damping_loss,
               m.damping_estimate});
  return t;
}

void write_simulation(const Simulation& sim, const ExperimentConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir);
  for (const PhysicalState& s : sim.snapshots)
    write_csv(dir / ("snapshot_" + fixed(s.t) + ".csv"), snapshot_table(s, cfg));
  write_csv(dir / "run_meta.csv", meta_table(sim.run));
}

Simulation read_simulation(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ConfigError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name.rfind("snapshot_", 0) == 0 && e.path().extension() == ".csv") files.push_back(e.path());
  }
  if (files.empty()) throw ConfigError("no snapshot_*.csv files in " + dir.string());

  Simulation sim;
  for (const fs::path& f : files) sim.snapshots.push_back(snapshot_from_table(read_csv(f)));
  std::sort(sim.snapshots.begin(), sim.snapshots.end(),
            [](const PhysicalState& a, const PhysicalState& b) { return a.t < b.t; });
  sim.min_density = std::numeric_limits<double>::infinity();
  for (const PhysicalState& s : sim.snapshots) {
    sim.tau.push_back(tau_of_time(s.t));
    for (double r : s.rho) sim.min_density = std::min(sim.min_density, r);
  }
  sim.run.snapshots = sim.snapshots;

  const fs::path meta = dir / "run_meta.csv";
  if (fs::exists(meta)) {
    const CsvTable t = read_csv(meta);
    const auto kv = comment_values(t);
    if (auto it = kv.find("steps"); it != kv.end()) sim.run.steps = std::stoul(it->second);
    if (auto it = kv.find("max_boundary_deviation"); it != kv.end())
      sim.run.max_boundary_deviation = parse_double(it->second);
    const auto mass = t.column("mass");
    const auto inflow = t.column("boundary_flux_mass");
    for (std::size_t i = 0; i < mass.size(); ++i)
      sim.mass_drift = std::max(sim.mass_drift, std::abs(mass[i] - mass[0] - inflow[i]) / std::abs(mass[0]));
  }
  return sim;
}

CsvTable scaled_table(const ScaledField& f) {
  CsvTable t;
  t.comments.push_back("tau=" + format_double(f.tau) + " dy=" + format_double(f.y.spacing));
  t.columns = {"y", "rho", "n"};
  for (std::size_t i = 0; i < f.rho.size(); ++i) t.add_row({f.y.at(i), f.rho[i], f.n[i]});
  return t;
}

void write_diagnostics(const EntropyReport& rep, const std::vector<ScaledField>& scaled, const fs::path& dir) {
  fs::create_directories(dir);
  for (const ScaledField& f : scaled) write_csv(dir / ("scaled_" + fixed(f.tau) + ".csv"), scaled_table(f));
  write_csv(dir / "timeseries.csv", report_table(rep));
}

int print_report(const EntropyReport& rep, double entropy_slack, double dissipation_slack, double fit_tau_min,
                 bool strict) {
  const EnvelopeCheck env = envelope_check(rep, entropy_slack);
  const DissipationCheck dis = dissipation_check(rep, rep.theta, rep.mu, rep.K, rep.E0, dissipation_slack);
  const InequalityAudit aud = inequality_audit(rep);

  std::cout << "reference " << rep.reference << "  rho_minus=" << rep.rho_minus << " rho_plus=" << rep.rho_plus
            << " alpha=" << rep.alpha << " gamma=" << rep.gamma << "\n";
  std::cout << "E0 " << sci(rep.E0) << "  samples " << rep.size() << "  tau_end "
            << fixed(rep.tau.empty() ? 0.0 : rep.tau.back(), 4) << "\n";
  if (!rep.same_limits)
    std::cout << "theta " << fixed(rep.theta, 8) << "  mu " << fixed(rep.mu, 8) << "  K " << fixed(rep.K, 8)
              << (rep.envelope_binding ? "" : "  (envelope not binding)") << "\n";
  std::cout << "envelope     " << (env.pass ? "pass" : "FAIL") << "  worst E/bound " << fixed(env.worst_ratio, 4)
            << " at tau " << fixed(env.worst_tau, 3) << "\n";
  std::cout << "dissipation  " << to_string(dis.status) << "  checked " << dis.checked << "  margin "
            << sci(dis.margin) << "  threshold tau " << fixed(dis.threshold_tau, 3) << "\n";
  std::cout << "inequality   " << (aud.pass ? "pass" : "FAIL") << "  max residual " << sci(aud.max_residual)
            << "  tolerance " << sci(aud.tolerance) << "\n";
  try {
    const DecayRate fit = fit_decay_rate(rep, fit_tau_min, rep.tau.back());
    std::cout << "decay rate   " << fixed(fit.rate, 4) << "  rms " << sci(fit.rms) << "  samples " << fit.samples
              << "\n";
  } catch (const DegenerateFit& e) {
    std::cout << "decay rate   unavailable: " << e.what() << "\n";
  }
  if (rep.edge_flag) std::cout << "warning: entropy density at the window edge " << sci(rep.max_edge_value) << "\n";
  if (rep.max_boundary_deviation > 1e-8)
    std::cout << "warning: boundary cells deviate from the far field by " << sci(rep.max_boundary_deviation)
              << "\n";

  const bool ok = env.pass && aud.pass && dis.status != CheckStatus::fail;
  return (strict && !ok) ? kExitAcceptance : 0;
}

std::vector<int> parse_ids(const std::string& list) {
  std::vector<int> ids;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      ids.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw ConfigError("bad criterion id '" + tok + "'");
    }
  }
  return ids;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Damped Euler relative-entropy laboratory"};
  app.require_subcommand(1);

  // profile
  auto* prof = app.add_subcommand("profile", "Solve the similarity profile");
  LimitSpec lim;
  double pgamma = 2.0, pk = 1.0, pL = 16.0, pdy = 0.01;
  std::string pout;
  bool ptail = false;
  prof->add_option("--rho-minus", lim.rho_minus, "left far-field density")->required();
  prof->add_option("--rho-plus", lim.rho_plus, "right far-field density")->required();
  prof->add_option("--alpha", lim.alpha, "friction coefficient")->capture_default_str();
  prof->add_option("--gamma", pgamma, "adiabatic exponent")->capture_default_str();
  prof->add_option("--k", pk, "pressure constant")->capture_default_str();
  prof->add_option("--L", pL, "half-width of the y-domain")->capture_default_str();
  prof->add_option("--dy", pdy, "grid spacing")->capture_default_str();
  prof->add_option("--out", pout, "output CSV");
  prof->add_flag("--check-tail", ptail, "fail when the fitted tail at +-L exceeds 1e-10");

  // simulate / diagnose / run
  std::string cfg_path, out_dir, in_dir, reference;
  std::vector<std::string> sets;
  auto* sim = app.add_subcommand("simulate", "Integrate the physical system and write snapshots");
  sim->add_option("--config", cfg_path, "experiment config file");
  sim->add_option("--set", sets, "override one config entry, key=value");
  sim->add_option("--out-dir", out_dir, "snapshot directory")->required();

  auto* dia = app.add_subcommand("diagnose", "Scaled fields and entropy series from snapshots");
  dia->add_option("--config", cfg_path, "experiment config file");
  dia->add_option("--set", sets, "override one config entry, key=value");
  dia->add_option("--snapshots-dir", in_dir, "directory written by simulate")->required();
  dia->add_option("--out-dir", out_dir, "output directory (defaults to the snapshot directory)");
  dia->add_option("--reference", reference, "constant | smoothed-step | profile")
      ->check(CLI::IsMember({"auto", "constant", "smoothed-step", "profile"}));

  auto* runc = app.add_subcommand("run", "simulate followed by diagnose");
  runc->add_option("--config", cfg_path, "experiment config file");
  runc->add_option("--set", sets, "override one config entry, key=value");
  runc->add_option("--out-dir", out_dir, "output directory")->required();
  runc->add_option("--reference", reference, "constant | smoothed-step | profile")
      ->check(CLI::IsMember({"auto", "constant", "smoothed-step", "profile"}));

  // report
  std::string series;
  double r_entropy_slack = 1.05, r_diss_slack = 1.1, r_fit_min = 0.5;
  bool strict = false;
  auto* rep = app.add_subcommand("report", "Envelope, dissipation and decay-rate summary");
  rep->add_option("--in", series, "timeseries.csv")->required()->check(CLI::ExistingFile);
  rep->add_option("--entropy-slack", r_entropy_slack)->capture_default_str();
  rep->add_option("--dissipation-slack", r_diss_slack)->capture_default_str();
  rep->add_option("--fit-tau-min", r_fit_min)->capture_default_str();
  rep->add_flag("--strict", strict, "exit 3 when a check fails");

  // verify
  std::string only;
  AcceptanceOptions aopt;
  auto* ver = app.add_subcommand("verify", "Run the acceptance criteria");
  ver->add_option("--only", only, "comma-separated criterion ids");
  ver->add_option("--samples", aopt.samples, "samples per randomized property")->capture_default_str();
  ver->add_option("--seed", aopt.seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*prof) {
      const PressureLaw law(pk, pgamma);
      const SimilarityProfile p = solve_profile(lim, law, pL, pdy);
      if (ptail) check_tail(p, lim);
      CsvTable t;
      t.comments.push_back("theta=" + format_double(p.theta) + " mu=" + format_double(p.mu) +
                           " K=" + format_double(p.K));
      t.comments.push_back("rho_minus=" + format_double(lim.rho_minus) + " rho_plus=" + format_double(lim.rho_plus) +
                           " alpha=" + format_double(lim.alpha) + " gamma=" + format_double(pgamma) +
                           " k=" + format_double(pk) + " L=" + format_double(pL) + " dy=" + format_double(pdy));
      t.columns = {"y", "rho_star", "n_star", "r_star", "ode_residual"};
      for (std::size_t i = 0; i < p.rho.size(); ++i)
        t.add_row({p.grid.at(i), p.rho[i], p.n[i], p.r_star[i], p.ode_residual[i]});
      if (pout.empty())
        write_csv(std::cout, t);
      else
        write_csv(fs::path(pout), t);
      std::cerr << "theta " << fixed(p.theta, 8) << "  mu " << fixed(p.mu, 8) << "  K " << fixed(p.K, 8)
                << "  newton " << p.newton_iterations << " it, residual " << sci(p.newton_residual) << "\n";
      return 0;
    }

    if (*sim) {
      const ExperimentConfig cfg = load_with_overrides(cfg_path, sets);
      const ReferenceSetup setup = prepare_reference(cfg);
      const Simulation s = simulate(cfg, setup);
      write_simulation(s, cfg, out_dir);
      std::cout << s.snapshots.size() << " snapshots, " << s.run.steps << " steps, mass drift "
                << sci(s.mass_drift) << ", min density " << fixed(s.min_density, 6) << "\n";
      return 0;
    }

    if (*dia || *runc) {
      ExperimentConfig cfg = load_with_overrides(cfg_path, sets);
      apply_reference(cfg, reference);
      const ReferenceSetup setup = prepare_reference(cfg);
      Simulation s;
      fs::path dir = out_dir;
      if (*runc) {
        s = simulate(cfg, setup);
        write_simulation(s, cfg, dir);
      } else {
        s = read_simulation(in_dir);
        if (dir.empty()) dir = in_dir;
      }
      std::vector<ScaledField> scaled;
      const EntropyReport r = diagnose(cfg, setup, s, &scaled);
      write_diagnostics(r, scaled, dir);
      return print_report(r, cfg.entropy_slack, cfg.dissipation_slack, cfg.fit_tau_min, false);
    }

    if (*rep) {
      const EntropyReport r = report_from_table(read_csv(fs::path(series)));
      return print_report(r, r_entropy_slack, r_diss_slack, r_fit_min, strict);
    }

    if (*ver) {
      AcceptanceSuite suite(aopt);
      std::vector<int> ids = only.empty() ? AcceptanceSuite::ids() : parse_ids(only);
      bool all = true;
      for (int id : ids) {
        const CriterionResult c = suite.run(id);
        std::cout << format_result(c) << std::endl;
        all = all && c.passed;
      }
      return all ? 0 : kExitAcceptance;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
