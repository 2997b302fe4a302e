#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "metashock/flux.hpp"
#include "metashock/grid.hpp"
#include "metashock/steady.hpp"

namespace metashock {

// Discrete solution snapshot on the full node set (walls included), so
// u.size() == v.size() == grid.n + 2. u at the walls is pinned to u+-;
// v at the walls follows the relaxation balance f(u+-).
struct GridState {
  double time = 0.0;
  Grid1D grid{1.0, 1};
  std::vector<double> u, v;
};

GridState initial_state(const Params& p, const FluxSpec& flux,
                        const std::function<double(double)>& u0, const Grid1D& grid);

GridState state_from_family(const MatchedFamily& fam, const Grid1D& grid);

// One step: explicit characteristic-upwinded transport, exact pointwise
// implicit solve of the stiff source (linear in v). Requires dt <= 0.45 h/a
// (StepRejectedError otherwise); a non-finite state raises BlowUpError
// stamped with the post-step time.
GridState imex_advance(const GridState& state, double dt, const Params& p,
                       const FluxSpec& flux);

struct ShockTrace {
  std::vector<double> t;
  std::vector<double> xi;
  std::string estimator;  // zero-crossing | v-argmin | reduced-ode | asymptotic-ode
  double eps = 0.0, a = 0.0, dt = 0.0;
  int n = 0;
};

struct EvolveOptions {
  double cfl = 0.45;
  bool track_ynorm = false;             // L2 distance to the family at the tracked xi
  std::vector<double> snapshot_times;   // sample times whose full states are kept
  // Streaming hook fired at every sample (xi_vmin / ynorm are NaN when
  // unavailable), so callers can persist rows before the run finishes.
  std::function<void(const GridState&, double xi_zero, double xi_vmin, double ynorm)>
      on_sample;
};

struct EvolveResult {
  std::vector<GridState> snapshots;
  ShockTrace zero_trace;
  ShockTrace vmin_trace;  // may have fewer samples (skips before the dip forms)
  std::vector<double> ynorm_t, ynorm;
};

// March to T with dt = cfl*h/a, subdividing each sample interval so every
// sample time is hit exactly; records both shock estimators at the samples.
EvolveResult evolve(const Params& p, const FluxSpec& flux,
                    const std::function<double(double)>& u0, double T,
                    const Grid1D& grid, std::vector<double> sample_times,
                    const EvolveOptions& opt = {});

// Position of the unique sign change of u, linearly interpolated.
double track_shock_zero(const std::vector<double>& u, const Grid1D& grid);

// Interior argmin of v refined by a 3-point parabola. The minimum exists
// because upwinding leaves an O(h) viscous dip in v at the layer.
double track_shock_vmin(const std::vector<double>& v, const Grid1D& grid);

enum class ThetaMode { Asymptotic, Projection };

struct ThetaModel {
  ThetaMode mode = ThetaMode::Asymptotic;
  int quad_n = 4001;  // total quadrature nodes for projection mode
  double last_alpha0 = std::numeric_limits<double>::quiet_NaN();
};

// Layer drift functional. Asymptotic mode is the two-exponential boundary
// interaction; projection mode pairs the family residuals against the
// hyperbolic-limit adjoint eigenfunction and normalizes by
// alpha0 = <psi, d_xi W> (TransversalityError when |alpha0| < 0.1).
double theta_eval(ThetaModel& model, double xi, const Params& p, const FluxSpec& flux,
                  const MatchedFamily* family = nullptr);

// dxi/dt = theta(xi) from xi0, sampled at sample_times (accepted steps when
// the list is empty).
ShockTrace reduced_ode_solve(double xi0, double T, ThetaModel& model, const Params& p,
                             const FluxSpec& flux,
                             const std::vector<double>& sample_times = {});

// Trapezoid L2 norm of (u - U(.;xi), v - V(.;xi)) over the full node set.
double perturbation_norm(const GridState& state, const MatchedFamily& fam);

// Least-squares slope of log|xi| against t on [t_lo, t_hi]. Needs >= 3
// samples of one strict sign (FitError otherwise).
double decay_rate_fit(const ShockTrace& trace, double t_lo, double t_hi);

// Reference experiment: quadratic initial datum and its parameter set.
double reference_u0(double x);
Params reference_params(double eps);

}  // namespace metashock
