#pragma once

#include <vector>

#include "metashock/flux.hpp"
#include "metashock/grid.hpp"
#include "metashock/odeint.hpp"

namespace metashock {

enum class Side { Left, Right };

// Plateau matching constant for the piecewise quadratic-flux profile:
// k solves k*tanh(k*Delta/(2*eps*a^2)) = u_star with Delta the distance from
// xi to the wall on the given side. Computed in the shifted variable
// h = k/u_star - 1 so that plateau offsets of order exp(-Delta/eps) survive
// in relative precision. Throws BracketError if the bracket cannot be
// established (not expected for admissible parameters).
double solve_h(const Params& p, double xi, Side side);
double solve_k(const Params& p, double xi, Side side);

// Two exact side steady states glued at xi, where the profile crosses zero.
// U is continuous with a kink at xi; V is piecewise constant at the side
// plateau flux with a jump at xi.
struct MatchedFamily {
  Params params;
  FluxSpec flux;
  double xi = 0.0;
  bool closed_form = true;  // quadratic flux tanh profile vs shooting solution

  double k_minus = 0.0, k_plus = 0.0;  // plateau magnitudes, >= u_star
  double h_minus = 0.0, h_plus = 0.0;  // k/u_star - 1, kept unsummed
  double c_minus = 0.0, c_plus = 0.0;  // side fluxes f(+-k), the V plateaus
  double u_mid = 0.0;                  // matching value at xi, zero by construction

  // shooting mode: side profiles in the distance-from-xi coordinate s >= 0
  OdeSolution left_profile, right_profile;

  double eval_U(double x) const;
  double eval_V(double x) const;
  double eval_dxU(double x) const;
};

// Closed-form construction (quadratic flux only; fails ValidationError otherwise).
MatchedFamily matched_family(const Params& p, double xi);

// Shooting construction for any validated convex flux. Each side integrates
// the first-integral ODE eps*a^2*U' = f(U) - C outward from xi and bisects on
// log(C - f(u_star)) until the wall value lands on the boundary state.
// Throws ConstructionError naming the side on bracket failure.
MatchedFamily general_flux_family(double xi, const Params& p, const FluxSpec& flux);

struct ResidualFields {
  std::vector<double> x;          // sample locations (interior grid nodes)
  std::vector<double> p1_smooth;  // -dx V away from xi (zero for this family)
  std::vector<double> p2;         // -a^2 dx U + (f(U) - V)/eps
  double jump_dxu = 0.0;          // [dx U] at xi = (k-^2 - k+^2)/(2 eps a^2)
  double p1_mass = 0.0;           // point mass of -dx V at xi = eps a^2 * jump_dxu
  bool under_resolved = false;    // fewer than 8 nodes per eps/u_star
};

ResidualFields residuals(const MatchedFamily& fam, const Grid1D& grid);

// Two-exponential boundary-interaction estimate for the drift functional
// bound, (u*^2/eps) * (e^{-u*(l+xi)/eps} - e^{-u*(l-xi)/eps}).
double omega1_asymptotic(double xi, const Params& p);

}  // namespace metashock
