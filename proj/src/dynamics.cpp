#include "metashock/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "metashock/errors.hpp"
#include "metashock/odeint.hpp"
#include "metashock/spectral.hpp"

namespace metashock {

GridState initial_state(const Params& p, const FluxSpec& flux,
                        const std::function<double(double)>& u0, const Grid1D& grid) {
  validate_params(p);
  if (std::abs(u0(-grid.ell) - p.u_minus) > 1e-8)
    throw ValidationError("u0(-ell) must equal u_minus within 1e-8");
  if (std::abs(u0(grid.ell) - p.u_plus) > 1e-8)
    throw ValidationError("u0(+ell) must equal u_plus within 1e-8");
  GridState s;
  s.time = 0.0;
  s.grid = grid;
  s.u.resize(grid.n + 2);
  s.v.resize(grid.n + 2);
  for (int j = 0; j <= grid.n + 1; ++j) {
    s.u[j] = u0(grid.x_full(j));
    s.v[j] = flux.f(s.u[j]);
  }
  s.u[0] = p.u_minus;
  s.u[grid.n + 1] = p.u_plus;
  return s;
}

GridState state_from_family(const MatchedFamily& fam, const Grid1D& grid) {
  GridState s;
  s.time = 0.0;
  s.grid = grid;
  s.u.resize(grid.n + 2);
  s.v.resize(grid.n + 2);
  for (int j = 0; j <= grid.n + 1; ++j) {
    const double x = grid.x_full(j);
    s.u[j] = fam.eval_U(x);
    s.v[j] = fam.eval_V(x);
  }
  return s;
}

namespace {

// Explicit transport in characteristic upwind form (central difference plus
// (a h / 2) numerical diffusion on both components), then the exact pointwise
// implicit relaxation update. Writes the new state into u, v.
void step_once(std::vector<double>& u, std::vector<double>& v, std::vector<double>& us,
               std::vector<double>& vs, const Params& p, const FluxSpec& flux,
               bool burgers, double dt, double h, double t_next) {
  const std::size_t m = u.size();
  const double c1 = dt / (2.0 * h);
  const double cd = p.a * dt / (2.0 * h);
  const double c2 = p.a * p.a * dt / (2.0 * h);
  for (std::size_t j = 1; j + 1 < m; ++j) {
    us[j] = u[j] - c1 * (v[j + 1] - v[j - 1]) + cd * (u[j + 1] - 2.0 * u[j] + u[j - 1]);
    vs[j] = v[j] - c2 * (u[j + 1] - u[j - 1]) + cd * (v[j + 1] - 2.0 * v[j] + v[j - 1]);
  }
  const double r = dt / p.eps;
  const double inv = 1.0 / (1.0 + r);
  double acc = 0.0;
  if (burgers) {
    for (std::size_t j = 1; j + 1 < m; ++j) {
      const double un = us[j];
      const double vn = (vs[j] + r * (0.5 * un * un)) * inv;
      u[j] = un;
      v[j] = vn;
      acc += std::abs(un) + std::abs(vn);
    }
  } else {
    for (std::size_t j = 1; j + 1 < m; ++j) {
      const double un = us[j];
      const double vn = (vs[j] + r * flux.f(un)) * inv;
      u[j] = un;
      v[j] = vn;
      acc += std::abs(un) + std::abs(vn);
    }
  }
  u[0] = p.u_minus;
  v[0] = flux.f(p.u_minus);
  u[m - 1] = p.u_plus;
  v[m - 1] = flux.f(p.u_plus);
  if (!std::isfinite(acc)) throw BlowUpError("non-finite state after step", t_next);
}

void check_cfl(double dt, double h, double a) {
  if (!(dt > 0.0)) throw ValidationError("dt must be positive");
  if (dt > 0.45 * h / a * (1.0 + 1e-9))
    throw StepRejectedError("dt exceeds the transport limit 0.45 h/a");
}

}  // namespace

GridState imex_advance(const GridState& state, double dt, const Params& p,
                       const FluxSpec& flux) {
  check_cfl(dt, state.grid.h, p.a);
  if (state.u.size() != static_cast<std::size_t>(state.grid.n + 2) ||
      state.v.size() != state.u.size())
    throw ValidationError("state arrays must cover the full node set");
  GridState next = state;
  std::vector<double> us(state.u.size()), vs(state.v.size());
  const bool burgers = flux.name == "burgers";
  step_once(next.u, next.v, us, vs, p, flux, burgers, dt, state.grid.h, state.time + dt);
  next.time = state.time + dt;
  return next;
}

double track_shock_zero(const std::vector<double>& u, const Grid1D& grid) {
  if (u.size() != static_cast<std::size_t>(grid.n + 2))
    throw ValidationError("sample size must match the full node set");
  int zero_node = -1, crossing = -1;
  int n_zero = 0, n_cross = 0;
  for (int j = 0; j <= grid.n + 1; ++j) {
    if (u[j] == 0.0) {
      ++n_zero;
      zero_node = j;
    } else if (j <= grid.n && u[j + 1] != 0.0 && std::signbit(u[j]) != std::signbit(u[j + 1])) {
      ++n_cross;
      crossing = j;
    }
  }
  if (n_zero + n_cross != 1)
    throw TrackingError("need exactly one sign change, found " +
                        std::to_string(n_zero + n_cross));
  if (n_zero == 1) return grid.x_full(zero_node);
  const int j = crossing;
  return grid.x_full(j) + grid.h * u[j] / (u[j] - u[j + 1]);
}

double track_shock_vmin(const std::vector<double>& v, const Grid1D& grid) {
  if (v.size() != static_cast<std::size_t>(grid.n + 2))
    throw ValidationError("sample size must match the full node set");
  int jmin = 0;
  for (int j = 1; j <= grid.n + 1; ++j)
    if (v[j] < v[jmin]) jmin = j;
  if (jmin == 0 || jmin == grid.n + 1)
    throw TrackingError("v attains its minimum at the boundary");
  const double denom = v[jmin - 1] - 2.0 * v[jmin] + v[jmin + 1];
  if (denom <= 0.0) return grid.x_full(jmin);
  return grid.x_full(jmin) + 0.5 * grid.h * (v[jmin - 1] - v[jmin + 1]) / denom;
}

EvolveResult evolve(const Params& p, const FluxSpec& flux,
                    const std::function<double(double)>& u0, double T,
                    const Grid1D& grid, std::vector<double> sample_times,
                    const EvolveOptions& opt) {
  if (!(T >= 0.0)) throw ValidationError("T must be nonnegative");
  GridState state = initial_state(p, flux, u0, grid);

  sample_times.push_back(T);
  std::sort(sample_times.begin(), sample_times.end());
  sample_times.erase(std::unique(sample_times.begin(), sample_times.end()),
                     sample_times.end());

  EvolveResult out;
  const double dt0 = opt.cfl * grid.h / p.a;
  for (auto* tr : {&out.zero_trace, &out.vmin_trace}) {
    tr->eps = p.eps;
    tr->a = p.a;
    tr->dt = dt0;
    tr->n = grid.n;
  }
  out.zero_trace.estimator = "zero-crossing";
  out.vmin_trace.estimator = "v-argmin";

  const bool burgers = flux.name == "burgers";
  std::vector<double> us(state.u.size()), vs(state.v.size());

  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto record = [&](const GridState& s) {
    out.zero_trace.t.push_back(s.time);
    out.zero_trace.xi.push_back(track_shock_zero(s.u, grid));
    double xv = nan;
    try {
      xv = track_shock_vmin(s.v, grid);
      out.vmin_trace.t.push_back(s.time);
      out.vmin_trace.xi.push_back(xv);
    } catch (const TrackingError&) {
      // no interior dip yet; the v-argmin trace simply skips this sample
    }
    double yn = nan;
    if (opt.track_ynorm) {
      const double xz = out.zero_trace.xi.back();
      MatchedFamily fam = burgers ? matched_family(p, xz) : general_flux_family(xz, p, flux);
      yn = perturbation_norm(s, fam);
      out.ynorm_t.push_back(s.time);
      out.ynorm.push_back(yn);
    }
    for (double ts : opt.snapshot_times) {
      if (std::abs(ts - s.time) <= 1e-9 * std::max(1.0, std::abs(ts))) {
        out.snapshots.push_back(s);
        break;
      }
    }
    if (opt.on_sample) opt.on_sample(s, out.zero_trace.xi.back(), xv, yn);
  };

  double t_cur = 0.0;
  for (double target : sample_times) {
    if (target < 0.0 || target > T * (1.0 + 1e-12))
      throw ValidationError("sample times must lie in [0, T]");
    if (target <= t_cur) {
      if (target == 0.0) record(state);
      continue;
    }
    const double span = target - t_cur;
    const long steps = std::max(1L, static_cast<long>(std::ceil(span / dt0 - 1e-9)));
    const double dt = span / static_cast<double>(steps);
    check_cfl(dt, grid.h, p.a);
    for (long i = 0; i < steps; ++i) {
      const double t_next = (i + 1 == steps) ? target : t_cur + dt * static_cast<double>(i + 1);
      step_once(state.u, state.v, us, vs, p, flux, burgers, dt, grid.h, t_next);
    }
    t_cur = target;
    state.time = target;
    record(state);
  }
  return out;
}

double theta_eval(ThetaModel& model, double xi, const Params& p, const FluxSpec& flux,
                  const MatchedFamily* family) {
  validate_params(p);
  if (std::abs(xi) >= p.ell) throw OutOfDomainError("xi must lie strictly inside (-ell, ell)");
  if (model.mode == ThetaMode::Asymptotic) {
    const double us = p.u_star();
    return us * (std::exp(-us * (p.ell + xi) / p.eps) - std::exp(-us * (p.ell - xi) / p.eps));
  }

  if (family == nullptr)
    throw ValidationError("projection mode needs the matched family at xi");
  const MatchedFamily& fam = *family;
  AdjointEigenfunction psi = adjoint_first_eigenfunction(xi, p);
  const double epsa2 = p.eps * p.a * p.a;
  const double off = 1e-12;  // side-limit nudge at the xi endpoint

  // Families at xi +- delta give d_xi of the profile and the side fluxes.
  const double delta = 1e-5;
  auto rebuild = [&](double z) {
    return fam.closed_form ? matched_family(p, z) : general_flux_family(z, p, flux);
  };
  MatchedFamily fam_p = rebuild(xi + delta);
  MatchedFamily fam_m = rebuild(xi - delta);

  const int n_side = std::max(100, model.quad_n / 2);
  double num = 0.0, alpha0 = 0.0;
  for (int side = 0; side < 2; ++side) {
    const double lo = side == 0 ? -p.ell : xi;
    const double hi = side == 0 ? xi : p.ell;
    const double dx = (hi - lo) / n_side;
    double ip2 = 0.0, ipdxi = 0.0, ipsiv = 0.0;
    for (int i = 0; i <= n_side; ++i) {
      double x = lo + dx * i;
      if (i == n_side && side == 0) x = xi - off;
      if (i == 0 && side == 1) x = xi + off;
      const double w = (i == 0 || i == n_side) ? 0.5 : 1.0;
      const double uu = fam.eval_U(x);
      const double p2 = -p.a * p.a * fam.eval_dxU(x) + (flux.f(uu) - fam.eval_V(x)) / p.eps;
      const double dxiu = (fam_p.eval_U(x) - fam_m.eval_U(x)) / (2.0 * delta);
      ip2 += w * psi.psi_v(x) * p2;
      ipdxi += w * psi.psi_u(x) * dxiu;
      ipsiv += w * psi.psi_v(x);
    }
    // the per-side smooth part of P1 = -dx V is identically zero (V is
    // piecewise constant), so only psi_v * P2 contributes under the integral
    num += dx * ip2;
    alpha0 += dx * ipdxi;
    const double dc = side == 0 ? (fam_p.c_minus - fam_m.c_minus) / (2.0 * delta)
                                : (fam_p.c_plus - fam_m.c_plus) / (2.0 * delta);
    alpha0 += dc * dx * ipsiv;
  }
  // point terms at xi: P1 and d_xi V both carry mass (c_- - c_+) there
  const double p1_mass = fam.c_minus - fam.c_plus;
  num += p1_mass * psi.psi_u(xi);
  alpha0 += p1_mass * 0.5 * (psi.psi_v(xi - off) + psi.psi_v(xi + off));

  model.last_alpha0 = alpha0;
  if (std::abs(alpha0) < 0.1)
    throw TransversalityError("|alpha0| = " + std::to_string(std::abs(alpha0)) +
                              " below the transversality floor 0.1");
  return num / alpha0;
}

ShockTrace reduced_ode_solve(double xi0, double T, ThetaModel& model, const Params& p,
                             const FluxSpec& flux, const std::vector<double>& sample_times) {
  validate_params(p);
  if (std::abs(xi0) >= p.ell) throw OutOfDomainError("xi0 must lie strictly inside (-ell, ell)");
  OdeRhs rhs = [&](double, const Vec& y, Vec& dy) {
    if (model.mode == ThetaMode::Projection) {
      MatchedFamily fam = flux.name == "burgers" ? matched_family(p, y[0])
                                                 : general_flux_family(y[0], p, flux);
      dy[0] = theta_eval(model, y[0], p, flux, &fam);
    } else {
      dy[0] = theta_eval(model, y[0], p, flux);
    }
  };
  Vec y0{xi0};
  OdeSolution sol = integrate_ode(rhs, y0, 0.0, T, 1e-10, T / 8.0);

  ShockTrace tr;
  tr.estimator = model.mode == ThetaMode::Projection ? "reduced-ode" : "asymptotic-ode";
  tr.eps = p.eps;
  tr.a = p.a;
  tr.n = 0;
  tr.dt = 0.0;
  if (sample_times.empty()) {
    tr.t = sol.ts;
    for (const auto& y : sol.ys) tr.xi.push_back(y[0]);
  } else {
    for (double t : sample_times) {
      tr.t.push_back(t);
      tr.xi.push_back(sol.eval1(t, 0));
    }
  }
  return tr;
}

double perturbation_norm(const GridState& state, const MatchedFamily& fam) {
  const Grid1D& grid = state.grid;
  double acc = 0.0, prev = 0.0;
  for (int j = 0; j <= grid.n + 1; ++j) {
    const double x = grid.x_full(j);
    const double du = state.u[j] - fam.eval_U(x);
    const double dv = state.v[j] - fam.eval_V(x);
    const double g = du * du + dv * dv;
    if (j > 0) acc += 0.5 * grid.h * (prev + g);
    prev = g;
  }
  return std::sqrt(acc);
}

double decay_rate_fit(const ShockTrace& trace, double t_lo, double t_hi) {
  std::vector<double> ts, ls;
  bool neg = false, pos = false;
  for (std::size_t i = 0; i < trace.t.size(); ++i) {
    if (trace.t[i] < t_lo || trace.t[i] > t_hi) continue;
    const double x = trace.xi[i];
    if (x == 0.0) throw FitError("xi vanishes inside the fit window");
    (x < 0.0 ? neg : pos) = true;
    ts.push_back(trace.t[i]);
    ls.push_back(std::log(std::abs(x)));
  }
  if (neg && pos) throw FitError("xi changes sign inside the fit window");
  if (ts.size() < 3) throw FitError("need at least 3 samples in the fit window");
  double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
  const double m = static_cast<double>(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    st += ts[i];
    sl += ls[i];
    stt += ts[i] * ts[i];
    stl += ts[i] * ls[i];
  }
  const double det = m * stt - st * st;
  if (det == 0.0) throw FitError("degenerate time samples");
  return (m * stl - st * sl) / det;
}

double reference_u0(double x) { return 0.5 * x * x - x - 0.5; }

Params reference_params(double eps) {
  Params p;
  p.eps = eps;
  p.a = 1.0;
  p.ell = 1.0;
  p.u_minus = 1.0;
  p.u_plus = -1.0;
  return p;
}

}  // namespace metashock
