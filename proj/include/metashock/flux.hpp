#pragma once

#include <functional>
#include <string>

namespace metashock {

// Scalar flux with its first two derivatives supplied analytically.
struct FluxSpec {
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::function<double(double)> d2f;
  std::string name;
};

// Built-in fluxes: "burgers" (u^2/2) and "quartic" (u^4/4).
FluxSpec make_flux(const std::string& name);

struct Params {
  double eps = 0.1;
  double a = 1.0;
  double ell = 1.0;
  double u_minus = 1.0;   // value held at x = -ell
  double u_plus = -1.0;   // value held at x = +ell

  double u_star() const { return u_minus; }
};

// Throws ValidationError naming the offending field.
void validate_params(const Params& p);

struct ValidationReport {
  bool convexity_ok = false;
  bool sign_ok = false;
  bool equal_flux_ok = false;
  bool derivatives_ok = false;
  bool finite_ok = false;
  double c0 = 0.0;  // min sampled second derivative
  bool pass = false;
  std::string detail;
};

// Samples the flux on [u_plus - 0.5, u_minus + 0.5] (1000 points) and checks
// convexity, the entropy sign condition df(u_plus) < 0 < df(u_minus),
// f(u_minus) == f(u_plus) to 1e-12, and the supplied derivatives against
// centered differences (1e-6 relative). Non-finite values throw
// InvalidFluxError; everything else lands in the report.
ValidationReport validate_flux(const FluxSpec& flux, const Params& p);

// (f(u_r) - f(u_l)) / (u_r - u_l); throws DegenerateJumpError when the
// denominator is below 1e-12.
double rankine_hugoniot_speed(const FluxSpec& flux, double u_l, double u_r);

// eps -> 0 limit of the standing-shock steady state: u jumps from u_minus to
// u_plus across xi, v is flat at the common boundary flux.
struct HyperbolicSteady {
  Params params;
  double xi = 0.0;
  double v_value = 0.0;
  double u(double x) const;  // throws OutOfDomainError for |x| > ell
  double v(double x) const;
};

// Throws OutOfDomainError unless xi lies strictly inside (-ell, ell).
HyperbolicSteady hyperbolic_steady(double xi, const Params& p, const FluxSpec& flux);

}  // namespace metashock
