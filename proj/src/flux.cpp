#include "metashock/flux.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "metashock/errors.hpp"

namespace metashock {

FluxSpec make_flux(const std::string& name) {
  if (name == "burgers") {
    return {[](double u) { return 0.5 * u * u; },
            [](double u) { return u; },
            [](double) { return 1.0; },
            "burgers"};
  }
  if (name == "quartic") {
    return {[](double u) { return 0.25 * u * u * u * u; },
            [](double u) { return u * u * u; },
            [](double u) { return 3.0 * u * u; },
            "quartic"};
  }
  throw InvalidFluxError("unknown flux '" + name + "'");
}

void validate_params(const Params& p) {
  if (!(p.eps > 0.0) || !std::isfinite(p.eps))
    throw ValidationError("eps must be positive");
  if (!(p.a > 0.0) || !std::isfinite(p.a))
    throw ValidationError("a must be positive");
  if (!(p.ell > 0.0) || !std::isfinite(p.ell))
    throw ValidationError("ell must be positive");
  if (!std::isfinite(p.u_minus) || !std::isfinite(p.u_plus))
    throw ValidationError("u_minus/u_plus must be finite");
  if (!(p.u_minus > p.u_plus))
    throw ValidationError("u_minus must exceed u_plus");
}

ValidationReport validate_flux(const FluxSpec& flux, const Params& p) {
  validate_params(p);
  ValidationReport rep;
  const int m = 1000;
  const double lo = p.u_plus - 0.5, hi = p.u_minus + 0.5;
  const double step = (hi - lo) / (m - 1);

  rep.finite_ok = true;
  rep.convexity_ok = true;
  rep.derivatives_ok = true;
  rep.c0 = std::numeric_limits<double>::infinity();
  std::ostringstream detail;

  for (int i = 0; i < m; ++i) {
    const double u = lo + i * step;
    const double fv = flux.f(u), d1 = flux.df(u), d2 = flux.d2f(u);
    if (!std::isfinite(fv) || !std::isfinite(d1) || !std::isfinite(d2))
      throw InvalidFluxError("flux returned non-finite value at u=" + std::to_string(u));
    rep.c0 = std::min(rep.c0, d2);
    if (!(d2 > 0.0)) rep.convexity_ok = false;

    // analytic derivatives against centered differences
    const double h1 = 1e-5 * std::max(1.0, std::abs(u));
    const double fd1 = (flux.f(u + h1) - flux.f(u - h1)) / (2 * h1);
    const double h2 = 1e-4 * std::max(1.0, std::abs(u));
    const double fd2 = (flux.df(u + h2) - flux.df(u - h2)) / (2 * h2);
    // floor of 1 keeps the truncation error of the stencils (~h^2) below tolerance
    const double sc1 = std::max({1.0, std::abs(d1), std::abs(fd1)});
    const double sc2 = std::max({1.0, std::abs(d2), std::abs(fd2)});
    if (std::abs(d1 - fd1) > 1e-6 * sc1 || std::abs(d2 - fd2) > 1e-6 * sc2) {
      if (rep.derivatives_ok) detail << "derivative mismatch near u=" << u << "; ";
      rep.derivatives_ok = false;
    }
  }
  if (!rep.convexity_ok) detail << "second derivative not positive on sample range; ";

  rep.sign_ok = flux.df(p.u_plus) < 0.0 && flux.df(p.u_minus) > 0.0;
  if (!rep.sign_ok) detail << "need df(u_plus) < 0 < df(u_minus); ";
  rep.equal_flux_ok = std::abs(flux.f(p.u_minus) - flux.f(p.u_plus)) <= 1e-12;
  if (!rep.equal_flux_ok) detail << "boundary fluxes differ; ";

  rep.pass = rep.convexity_ok && rep.sign_ok && rep.equal_flux_ok &&
             rep.derivatives_ok && rep.finite_ok;
  rep.detail = detail.str();
  return rep;
}

double rankine_hugoniot_speed(const FluxSpec& flux, double u_l, double u_r) {
  const double du = u_r - u_l;
  if (std::abs(du) < 1e-12)
    throw DegenerateJumpError("rankine_hugoniot_speed: |u_r - u_l| < 1e-12");
  return (flux.f(u_r) - flux.f(u_l)) / du;
}

double HyperbolicSteady::u(double x) const {
  if (std::abs(x) > params.ell)
    throw OutOfDomainError("hyperbolic steady evaluated at |x| > ell");
  return x < xi ? params.u_minus : params.u_plus;
}

double HyperbolicSteady::v(double x) const {
  if (std::abs(x) > params.ell)
    throw OutOfDomainError("hyperbolic steady evaluated at |x| > ell");
  return v_value;
}

HyperbolicSteady hyperbolic_steady(double xi, const Params& p, const FluxSpec& flux) {
  validate_params(p);
  if (std::abs(xi) >= p.ell)
    throw OutOfDomainError("hyperbolic steady needs xi strictly inside (-ell, ell)");
  return {p, xi, flux.f(p.u_minus)};
}

}  // namespace metashock
