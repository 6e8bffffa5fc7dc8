#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "dwlab/grid.hpp"
#include "dwlab/profile.hpp"
#include "dwlab/thermo.hpp"

namespace dwlab {

struct Conserved {
  double rho = 0.0;
  double m = 0.0;
};

/// Cell averages of density and momentum on a uniform partition of [-X, X].
struct PhysicalState {
  UniformGrid x;  // cell centres
  std::vector<double> rho;
  std::vector<double> m;
  double t = 0.0;

  double dx() const noexcept { return x.spacing; }
  double half_width() const noexcept { return x.back() + 0.5 * x.spacing; }
  double mass() const;
  double momentum() const;
};

/// Extra forcing S(t, x) added to d/dt (rho, m); used for manufactured solutions.
using SourceFunction = std::function<Conserved(double t, double x)>;

struct SolverConfig {
  double cfl = 0.45;
  double rho_floor = 0.0;  // cells with rho <= rho_floor are treated as vacuum (m = 0)
  int order = 2;           // 1: first order + Godunov splitting; 2: MUSCL/SSP-RK2 + Strang
  std::vector<double> snapshot_times;
  SourceFunction source;

  void validate() const;
};

/// Exact flux (m, m^2/rho + p(rho)) with 0/0 := 0 at vacuum.
Conserved physical_flux(Conserved u, const PressureLaw& law);

/// Local Lax-Friedrichs (Rusanov) flux.
Conserved numerical_flux(Conserved left, Conserved right, const PressureLaw& law);

/// |m/rho| + sqrt(p'(rho)), zero at vacuum.
double wave_speed(Conserved u, const PressureLaw& law);

/// cfl * dx / s_max.
double stable_dt(double dx, double s_max, double cfl);

/// Max wave speed over the cells and the far-field ghost states.
double max_wave_speed(const PhysicalState& state, const LimitSpec& limits, const PressureLaw& law);

struct StepReport {
  double dt = 0.0;
  double boundary_mass = 0.0;      // dt-integrated net inflow of mass through both ends
  double boundary_momentum = 0.0;  // same for momentum flux
  double damping_loss = 0.0;       // momentum removed by friction, integrated over the domain
  double damping_estimate = 0.0;   // alpha * sum(m dx) * dt with m before the step
};

struct StepResult {
  PhysicalState state;
  StepReport report;
};

/// Advances in place by min(stable dt, dt_max). Ghost cells hold the far-field
/// states (rho_minus, 0) and (rho_plus, 0); friction m' = -alpha m is integrated
/// exactly.
StepReport advance(PhysicalState& state, const SolverConfig& cfg, const PressureLaw& law, const LimitSpec& limits,
                   double dt_max = std::numeric_limits<double>::infinity());

StepResult step(const PhysicalState& state, const SolverConfig& cfg, const PressureLaw& law,
                const LimitSpec& limits, double dt_max = std::numeric_limits<double>::infinity());

struct RunMetaRow {
  double t;
  double dt;
  double mass;
  double momentum;
  double boundary_flux_mass;      // cumulative
  double boundary_flux_momentum;  // cumulative
  double damping_loss;            // cumulative
  double damping_estimate;        // cumulative
};

struct RunOptions {
  /// Scaled half-window L_y that will be sampled from the snapshots; the
  /// domain must satisfy X >= L_y sqrt(1 + t_end). Zero disables the check.
  double scaled_window = 0.0;
  /// Deviation from the far field in the boundary cells that marks the run
  /// as disturbed.
  double boundary_tolerance = 1e-8;
};

struct RunResult {
  std::vector<PhysicalState> snapshots;
  std::vector<RunMetaRow> meta;
  bool boundary_disturbed = false;
  double max_boundary_deviation = 0.0;
  std::size_t steps = 0;
};

RunResult run(const PhysicalState& initial, const SolverConfig& cfg, const PressureLaw& law,
              const LimitSpec& limits, double t_end, const RunOptions& options = {});

}  // namespace dwlab
