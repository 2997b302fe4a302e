#include "metashock/steady.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "metashock/errors.hpp"
#include "metashock/roots.hpp"

namespace metashock {

namespace {

// sech^2 without overflow: write in terms of t = exp(-|z|) <= 1.
double sech2(double z) {
  const double t = std::exp(-std::abs(z));
  const double s = 2.0 * t / (1.0 + t * t);
  return s * s;
}

double wall_distance(const Params& p, double xi, Side side) {
  return side == Side::Left ? (p.ell + xi) : (p.ell - xi);
}

}  // namespace

double solve_h(const Params& p, double xi, Side side) {
  validate_params(p);
  if (std::abs(xi) >= p.ell) throw OutOfDomainError("xi must lie strictly inside (-ell, ell)");
  const double us = p.u_star();
  const double delta = wall_distance(p, xi, side);
  const double big_t = us * delta / (2.0 * p.eps * p.a * p.a);
  // Residual of k*tanh(k*Delta/(2 eps a^2)) = u_star in h = k/u_star - 1:
  //   r(h) = h - 2(1+h) E / (1+E),  E = exp(-2 T (1+h)).
  // r(0) = -2E/(1+E) <= 0 and r(h) -> h - small for large h, so a root with
  // h >= 0 always exists; for T >= log(3)/2 it lies in [0,1].
  auto resid = [big_t](double h) {
    const double e = std::exp(-2.0 * big_t * (1.0 + h));
    return h - 2.0 * (1.0 + h) * e / (1.0 + e);
  };
  auto dresid = [big_t](double h) {
    const double e = std::exp(-2.0 * big_t * (1.0 + h));
    const double w = e / (1.0 + e);
    return 1.0 - 2.0 * w + 4.0 * big_t * (1.0 + h) * w / (1.0 + e);
  };
  double hi = 1.0;
  int guard = 0;
  while (resid(hi) < 0.0) {
    hi *= 2.0;
    if (++guard > 200) throw BracketError("plateau residual has no sign change in h");
  }
  return newton_safeguarded(resid, dresid, 0.0, hi, 1e-15, 1e-15).root;
}

double solve_k(const Params& p, double xi, Side side) {
  return p.u_star() * (1.0 + solve_h(p, xi, side));
}

double MatchedFamily::eval_U(double x) const {
  if (std::abs(x) > params.ell * (1.0 + 1e-12)) throw OutOfDomainError("x outside [-ell, ell]");
  if (closed_form) {
    const double denom = 2.0 * params.eps * params.a * params.a;
    if (x < xi) {
      return k_minus * std::tanh(k_minus * (xi - x) / denom);
    }
    return k_plus * std::tanh(k_plus * (xi - x) / denom);
  }
  const double s = std::abs(x - xi);
  const OdeSolution& prof = (x < xi) ? left_profile : right_profile;
  const double smax = prof.ts.back();
  return prof.eval1(std::min(s, smax), 0);
}

double MatchedFamily::eval_V(double x) const {
  if (std::abs(x) > params.ell * (1.0 + 1e-12)) throw OutOfDomainError("x outside [-ell, ell]");
  return x < xi ? c_minus : c_plus;
}

double MatchedFamily::eval_dxU(double x) const {
  if (closed_form) {
    const double denom = 2.0 * params.eps * params.a * params.a;
    const double k = (x < xi) ? k_minus : k_plus;
    return -k * k / denom * sech2(k * (xi - x) / denom);
  }
  // first integral: eps a^2 U' = f(U) - C on each side (signed in x)
  const double c = (x < xi) ? c_minus : c_plus;
  return (flux.f(eval_U(x)) - c) / (params.eps * params.a * params.a);
}

MatchedFamily matched_family(const Params& p, double xi) {
  validate_params(p);
  if (std::abs(xi) >= p.ell) throw OutOfDomainError("xi must lie strictly inside (-ell, ell)");
  if (std::abs(p.u_minus + p.u_plus) > 1e-12 * std::abs(p.u_minus))
    throw ValidationError("closed-form family needs u_plus = -u_minus");
  MatchedFamily fam;
  fam.params = p;
  fam.flux = make_flux("burgers");
  fam.xi = xi;
  fam.closed_form = true;
  fam.h_minus = solve_h(p, xi, Side::Left);
  fam.h_plus = solve_h(p, xi, Side::Right);
  const double us = p.u_star();
  fam.k_minus = us * (1.0 + fam.h_minus);
  fam.k_plus = us * (1.0 + fam.h_plus);
  fam.c_minus = fam.flux.f(fam.k_minus);
  fam.c_plus = fam.flux.f(fam.k_plus);
  fam.u_mid = 0.0;
  return fam;
}

namespace {

// One side of the shooting construction. Integrates the profile outward from
// xi in the stretched coordinate s = distance from xi, so errors contract
// toward the plateau instead of amplifying across it.
struct SideShot {
  double k = 0.0;       // plateau magnitude (root of f(k) = C on the right branch)
  double c = 0.0;       // first-integral constant
  OdeSolution profile;  // U(s), s in [0, Delta]
};

SideShot shoot_side(const Params& p, const FluxSpec& flux, double xi, Side side,
                    double u_mid) {
  const double us = p.u_star();
  const double delta = wall_distance(p, xi, side);
  const double epsa2 = p.eps * p.a * p.a;
  const double f_star = flux.f(us);
  // Boundary value the profile must hit at the wall, and the sign of U'
  // in the outward direction: the left side rises from u_mid to u_minus,
  // the right side falls from u_mid to u_plus.
  const double u_wall = (side == Side::Left) ? p.u_minus : p.u_plus;
  const double outward_sign = (side == Side::Left) ? 1.0 : -1.0;

  // delta_c = C - f(u_star) > 0 controls how far the plateau overshoots the
  // boundary state; shrinking delta_c moves U(Delta) toward u_star from the
  // overshoot side. Bisection on log(delta_c): g is monotone there.
  auto wall_value = [&](double log_dc) {
    const double c = f_star + std::exp(log_dc);
    OdeRhs rhs = [&](double /*s*/, const Vec& y, Vec& dy) {
      dy[0] = outward_sign * (c - flux.f(y[0])) / epsa2;
    };
    Vec y0(1);
    y0[0] = u_mid;
    OdeSolution sol = integrate_ode(rhs, y0, 0.0, delta, 1e-12, delta / 8.0);
    return sol.ys.back()[0];
  };
  auto g = [&](double log_dc) { return outward_sign * (wall_value(log_dc) - u_wall); };

  // Two-exponential guess for the plateau offset, then a generous bracket.
  const double t_exp = us * delta / (2.0 * epsa2);
  const double dc_guess = std::max(2.0 * us * us * std::exp(-2.0 * t_exp), 1e-290);
  double lo = std::log(dc_guess) - 25.0;
  double hi = std::log(std::max(4.0 * std::abs(f_star) + 1.0, dc_guess * std::exp(25.0)));
  // g(lo) < 0 (plateau undershoots the wall state), g(hi) > 0 (overshoots).
  int guard = 0;
  while (g(lo) > 0.0) {
    lo -= 25.0;
    if (++guard > 40)
      throw ConstructionError(std::string("profile shooting bracket failed on the ") +
                              (side == Side::Left ? "left" : "right") + " side (low end)");
  }
  guard = 0;
  while (g(hi) < 0.0) {
    hi += 10.0;
    if (++guard > 40)
      throw ConstructionError(std::string("profile shooting bracket failed on the ") +
                              (side == Side::Left ? "left" : "right") + " side (high end)");
  }
  for (int it = 0; it < 140 && hi - lo > 1e-14 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  const double log_dc = 0.5 * (lo + hi);

  SideShot shot;
  shot.c = f_star + std::exp(log_dc);
  {
    OdeRhs rhs = [&](double /*s*/, const Vec& y, Vec& dy) {
      dy[0] = outward_sign * (shot.c - flux.f(y[0])) / epsa2;
    };
    Vec y0(1);
    y0[0] = u_mid;
    shot.profile = integrate_ode(rhs, y0, 0.0, delta, 1e-12, delta / 8.0);
  }
  // Plateau magnitude: the root of f(k) = C just outside the boundary state.
  {
    const double k_sign = (side == Side::Left) ? 1.0 : -1.0;
    auto fr = [&](double k) { return flux.f(k_sign * k) - shot.c; };
    auto dfr = [&](double k) { return k_sign * flux.df(k_sign * k); };
    shot.k = newton_safeguarded(fr, dfr, us, 4.0 * us + 4.0, 1e-15, 1e-15).root;
  }
  return shot;
}

}  // namespace

MatchedFamily general_flux_family(double xi, const Params& p, const FluxSpec& flux) {
  validate_params(p);
  if (std::abs(xi) >= p.ell) throw OutOfDomainError("xi must lie strictly inside (-ell, ell)");
  ValidationReport rep = validate_flux(flux, p);
  if (!rep.pass) throw ValidationError("flux failed validation: " + rep.detail);

  MatchedFamily fam;
  fam.params = p;
  fam.flux = flux;
  fam.xi = xi;
  fam.closed_form = false;
  // Internal matching value at xi. Strict convexity with equal boundary
  // fluxes puts f(0) below the plateau flux, so both outward integrations
  // start on the monotone branch.
  fam.u_mid = 0.0;

  SideShot left = shoot_side(p, flux, xi, Side::Left, fam.u_mid);
  SideShot right = shoot_side(p, flux, xi, Side::Right, fam.u_mid);
  fam.left_profile = std::move(left.profile);
  fam.right_profile = std::move(right.profile);
  fam.c_minus = left.c;
  fam.c_plus = right.c;
  fam.k_minus = left.k;
  fam.k_plus = right.k;
  const double us = p.u_star();
  fam.h_minus = fam.k_minus / us - 1.0;
  fam.h_plus = fam.k_plus / us - 1.0;
  return fam;
}

ResidualFields residuals(const MatchedFamily& fam, const Grid1D& grid) {
  const Params& p = fam.params;
  ResidualFields out;
  out.x.resize(grid.n);
  out.p1_smooth.assign(grid.n, 0.0);
  out.p2.resize(grid.n);
  const double epsa2_inv = 1.0 / (p.eps * p.a * p.a);
  for (int j = 0; j < grid.n; ++j) {
    const double x = grid.x(j);
    out.x[j] = x;
    const double u = fam.eval_U(x);
    const double v = fam.eval_V(x);
    // -dx V vanishes on each side (V piecewise constant): p1_smooth stays 0.
    out.p2[j] = -p.a * p.a * fam.eval_dxU(x) + (fam.flux.f(u) - v) / p.eps;
  }
  // [dx U] at xi, written so the k-^2 - k+^2 cancellation happens in the
  // h-offsets rather than between O(1) doubles.
  const double us = p.u_star();
  if (fam.closed_form) {
    out.jump_dxu = us * (fam.h_minus - fam.h_plus) * us * (2.0 + fam.h_minus + fam.h_plus) *
                   0.5 * epsa2_inv;
  } else {
    // dxU(xi+-) = (f(u_mid) - C_+-)/(eps a^2), so the jump is (C_- - C_+)/(eps a^2).
    out.jump_dxu = (fam.c_minus - fam.c_plus) * epsa2_inv;
  }
  out.p1_mass = p.eps * p.a * p.a * out.jump_dxu;
  out.under_resolved = (p.eps * p.a * p.a / us) / grid.h < 8.0;
  return out;
}

double omega1_asymptotic(double xi, const Params& p) {
  validate_params(p);
  const double us = p.u_star();
  const double em = std::exp(-us * (p.ell + xi) / p.eps);
  const double ep = std::exp(-us * (p.ell - xi) / p.eps);
  return us * us / p.eps * (em - ep);
}

}  // namespace metashock
