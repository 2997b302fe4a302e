// Acceptance gate: runs the nine release criteria end to end and prints one
// PASS/FAIL line per clause with the measured values. Exits with the number
// of failed clauses.
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "metashock/dynamics.hpp"
#include "metashock/eig.hpp"
#include "metashock/errors.hpp"
#include "metashock/flux.hpp"
#include "metashock/grid.hpp"
#include "metashock/harness.hpp"
#include "metashock/spectral.hpp"
#include "metashock/steady.hpp"

using namespace metashock;

namespace {

struct Gate {
  int passed = 0;
  int failed = 0;
  void clause(int crit, const std::string& label, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s  (%s)\n", ok ? "PASS" : "FAIL", crit, label.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (ok)
      ++passed;
    else
      ++failed;
  }
};

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Params params_with_eps(double eps) {
  Params p;
  p.eps = eps;
  return p;
}

double table_xi(double t, double eps) {
  const ReferenceTable& tbl = reference_table();
  for (std::size_t i = 0; i < tbl.t_values.size(); ++i)
    for (std::size_t j = 0; j < tbl.eps_values.size(); ++j)
      if (tbl.t_values[i] == t && tbl.eps_values[j] == eps) return tbl.xi[i][j];
  throw ValidationError("no such reference cell");
}

// Plain bisection on the plateau condition k*tanh(k*delta/(2 eps a^2)) = u*,
// independent of the production solver.
double bisect_k(const Params& p, double delta) {
  const double s = delta / (2.0 * p.eps * p.a * p.a);
  const double us = p.u_star();
  auto g = [&](double k) { return k * std::tanh(k * s) - us; };
  double lo = us, hi = 2.0 * us;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) <= 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double lstsq_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double m = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

// One shared fine run at eps = 0.07 feeding criteria 8 and 9: shock trace to
// t = 1e4 with the perturbation norm recorded at every sample.
const EvolveResult& reference_run() {
  static const EvolveResult er = [] {
    const Params p = params_with_eps(0.07);
    const FluxSpec fx = make_flux("burgers");
    const Grid1D grid(1.0, 800);
    EvolveOptions opt;
    opt.track_ynorm = true;
    return evolve(p, fx, reference_u0, 1e4, grid,
                  {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0, 100.0, 300.0, 1000.0, 3000.0}, opt);
  }();
  return er;
}

void criterion1(Gate& gate) {
  const FluxSpec fx = make_flux("burgers");
  const Grid1D grid(1.0, 1600);
  for (double eps : {0.1, 0.07, 0.055, 0.04}) {
    const Params p = params_with_eps(eps);
    const EvolveResult r = evolve(p, fx, reference_u0, 10.0, grid, {0.2, 1.0});
    for (std::size_t i = 0; i < r.zero_trace.t.size(); ++i) {
      const double t = r.zero_trace.t[i];
      const double ours = r.zero_trace.xi[i];
      const double ref = table_xi(t, eps);
      const double diff = std::abs(ours - ref);
      gate.clause(1, fmt("xi(t=%g, eps=%g)", t, eps), diff <= 0.01,
                  fmt("ours %.6f vs %.6f, |diff| %.2e <= 1e-2", ours, ref, diff));
    }
  }
}

void criterion2(Gate& gate) {
  const FluxSpec fx = make_flux("burgers");
  const Grid1D grid(1.0, 1600);
  {
    const Params p = params_with_eps(0.1);
    const EvolveResult r = evolve(p, fx, reference_u0, 1e4, grid, {1e3});
    const double xi3 = r.zero_trace.xi.front();
    const double xi4 = r.zero_trace.xi.back();
    gate.clause(2, "xi(t=1e3, eps=0.1)", std::abs(xi3 - (-0.0103)) <= 0.01,
                fmt("ours %.6f vs -0.0103, |diff| %.2e <= 1e-2", xi3, std::abs(xi3 + 0.0103)));
    gate.clause(2, "xi(t=1e4, eps=0.1) pinned at center", std::abs(xi4) <= 1e-4,
                fmt("|xi| = %.2e <= 1e-4", std::abs(xi4)));
  }
  {
    const Params p = params_with_eps(0.02);
    const EvolveResult r = evolve(p, fx, reference_u0, 1e3, grid, {});
    const double xi3 = r.zero_trace.xi.back();
    gate.clause(2, "xi(t=1e3, eps=0.02)", std::abs(xi3 - (-0.3325)) <= 0.01,
                fmt("ours %.6f vs -0.3325, |diff| %.2e <= 1e-2", xi3, std::abs(xi3 + 0.3325)));
  }
  // final-row check by the reduced model only: nonpositive location, with
  // |xi| growing as eps shrinks, as in the last reference-table row
  const ReferenceTable& tbl = reference_table();
  std::vector<double> xs;
  ThetaModel asym;
  const double xi0 = 1.0 - std::sqrt(2.0);
  for (double eps : tbl.eps_values) {
    const ShockTrace tr =
        reduced_ode_solve(xi0, 0.5e6, asym, params_with_eps(eps), fx, {0.5e6});
    xs.push_back(tr.xi.front());
  }
  bool signs = true, ordered = true;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    // an |xi| below the integrator's absolute tolerance counts as zero
    if (xs[i] > 1e-9) signs = false;
    if (i > 0 && std::abs(xs[i - 1]) > std::abs(xs[i]) + 1e-9) ordered = false;
  }
  gate.clause(2, "xi(t=5e5) nonpositive for every eps (reduced model)", signs,
              fmt("values %.2e, %.2e, %.2e, %.2e, %.2e", xs[0], xs[1], xs[2], xs[3], xs[4]));
  gate.clause(2, "|xi(t=5e5)| ordered by eps (reduced model)", ordered,
              "|xi| nondecreasing as eps drops, matching the reference row");
}

void criterion3(Gate& gate) {
  const Params p = params_with_eps(0.05);
  const FluxSpec fx = make_flux("burgers");
  const MatchedFamily fam = matched_family(p, 0.0);
  const OperatorAssembly op = assemble(fam, Grid1D(1.0, 400));
  const Spectrum sp = eig_general(op.l_jx);

  int in_gate = 0;
  double real_other_max = -1e30, worst_complex = 0.0;
  for (const auto& lam : sp.values) {
    const bool is_real = std::abs(lam.imag()) <= 1e-6 * std::max(1.0, std::abs(lam.real()));
    if (is_real) {
      if (lam.real() > -1e-3 && lam.real() < 0.0)
        ++in_gate;
      else
        real_other_max = std::max(real_other_max, lam.real());
    } else {
      worst_complex = std::max(worst_complex, std::abs(lam.real() + 1.0 / (2.0 * p.eps)));
    }
  }
  gate.clause(3, "exactly one eigenvalue in (-1e-3, 0)", in_gate == 1,
              fmt("count = %d", in_gate));
  gate.clause(3, "remaining real eigenvalues below -1/(4 eps)",
              real_other_max <= -1.0 / (4.0 * p.eps) + 1e-9,
              fmt("max other real %.6f <= %.1f", real_other_max, -1.0 / (4.0 * p.eps)));
  gate.clause(3, "complex band centered on -1/(2 eps)",
              worst_complex <= 1e-6 / (2.0 * p.eps),
              fmt("worst |Re + 10| = %.2e <= 1e-5", worst_complex));
}

void criterion4(Gate& gate) {
  struct Case {
    int n;
    double eps, xi;
  };
  for (const Case& c : {Case{100, 0.1, -0.2}, Case{400, 0.05, 0.0}}) {
    const Params p = params_with_eps(c.eps);
    const MatchedFamily fam = matched_family(p, c.xi);
    const OperatorAssembly op = assemble(fam, Grid1D(1.0, c.n));

    std::vector<std::complex<double>> mapped;
    for (const auto& mu : eig_general(op.l_vsc).values) {
      const auto pair = map_vsc_to_jx(mu, c.eps);
      mapped.push_back(pair.first);
      mapped.push_back(pair.second);
    }
    std::vector<std::complex<double>> direct = eig_general(op.l_jx).values;
    // greedy nearest pairing with removal; lexicographic pairing is unstable
    // inside the complex band where every member shares one real part
    double worst = 0.0;
    for (const auto& z : mapped) {
      std::size_t best = 0;
      double bd = 1e300;
      for (std::size_t k = 0; k < direct.size(); ++k) {
        const double d = std::abs(z - direct[k]);
        if (d < bd) {
          bd = d;
          best = k;
        }
      }
      worst = std::max(worst, bd);
      direct.erase(direct.begin() + best);
    }
    gate.clause(4, fmt("quadratic-map multiset identity, n=%d", c.n), worst <= 1e-8,
                fmt("max pairing distance %.2e <= 1e-8", worst));
  }
}

void criterion5(Gate& gate) {
  const FluxSpec fx = make_flux("burgers");
  std::vector<double> inv_eps, log_lam;
  for (double eps : {0.06, 0.08, 0.1}) {
    const Params p = params_with_eps(eps);
    const MatchedFamily fam = matched_family(p, 0.0);
    const OperatorAssembly op = assemble(fam, Grid1D(1.0, 800));
    const SpectralStructure st = classify(eig_general(op.l_jx), eps);
    const double asy = lambda1_asymptotic_burgers(0.0, p);
    const double ratio = st.lambda1 / asy;
    gate.clause(5, fmt("slow-eigenvalue ratio, eps=%g", eps), ratio >= 0.5 && ratio <= 2.0,
                fmt("numeric %.3e / model %.3e = %.3f in [0.5, 2]", st.lambda1, asy, ratio));
    inv_eps.push_back(1.0 / eps);
    log_lam.push_back(std::log(std::abs(st.lambda1)));
  }
  const double slope = lstsq_slope(inv_eps, log_lam);
  gate.clause(5, "log|lambda1| vs 1/eps slope", std::abs(slope - (-1.0)) <= 0.15,
              fmt("slope %.4f within 15%% of -1", slope));
}

void criterion6(Gate& gate) {
  const FluxSpec fx = make_flux("burgers");

  struct KCase {
    double eps, xi;
    Side side;
  };
  double worst_k = 0.0;
  for (const KCase& c : {KCase{0.1, -0.4, Side::Left}, KCase{0.1, -0.4, Side::Right},
                         KCase{0.05, 0.2, Side::Left}, KCase{0.04, 0.0, Side::Right},
                         KCase{0.07, 0.5, Side::Left}}) {
    const Params p = params_with_eps(c.eps);
    const double delta = c.side == Side::Left ? p.ell + c.xi : p.ell - c.xi;
    worst_k = std::max(worst_k, std::abs(solve_k(p, c.xi, c.side) - bisect_k(p, delta)));
  }
  gate.clause(6, "plateau solver vs direct bisection", worst_k <= 1e-12,
              fmt("max |diff| %.2e <= 1e-12", worst_k));

  double worst_u = 0.0;
  const Grid1D grid(1.0, 240);
  for (double xi : {-0.3, 0.0}) {
    const Params p = params_with_eps(0.07);
    const MatchedFamily closed = matched_family(p, xi);
    const MatchedFamily shot = general_flux_family(xi, p, fx);
    for (int j = 0; j <= grid.n + 1; ++j) {
      const double x = grid.x_full(j);
      worst_u = std::max(worst_u, std::abs(shot.eval_U(x) - closed.eval_U(x)));
    }
  }
  gate.clause(6, "shooting construction vs closed form", worst_u <= 1e-8,
              fmt("sup |diff| %.2e <= 1e-8", worst_u));

  const ShockProfile prof = shock_profile(fx, 1.0, 40.0);
  double worst_p = 0.0;
  for (double z = -10.0; z <= 10.0; z += 0.5)
    worst_p = std::max(worst_p, std::abs(prof.eval(z) + std::tanh(0.5 * z)));
  gate.clause(6, "traveling-layer profile vs hyperbolic tangent", worst_p <= 1e-8,
              fmt("sup |diff| %.2e <= 1e-8", worst_p));
}

void criterion7(Gate& gate) {
  const Params p = params_with_eps(0.1);
  const FluxSpec fx = make_flux("burgers");
  const MatchedFamily fam = matched_family(p, -0.4);
  const ResidualFields res = residuals(fam, Grid1D(1.0, 400));

  double worst_p2 = 0.0;
  for (double v : res.p2) worst_p2 = std::max(worst_p2, std::abs(v));
  gate.clause(7, "interior equilibrium residual", worst_p2 <= 1e-10,
              fmt("max |P2| %.2e <= 1e-10", worst_p2));

  const double us = p.u_star();
  const double km = us * (1.0 + fam.h_minus), kp = us * (1.0 + fam.h_plus);
  const double closed = (km - kp) * (km + kp) / (2.0 * p.eps * p.a * p.a);
  const double diff = std::abs(res.jump_dxu - closed);
  gate.clause(7, "slope jump equals the plateau identity", diff <= 1e-12 * std::abs(closed),
              fmt("jump %.12e vs %.12e, rel diff %.2e", res.jump_dxu, closed,
                  diff / std::abs(closed)));

  ThetaModel asym;
  const double th0 = theta_eval(asym, 0.0, p, fx);
  gate.clause(7, "drift vanishes identically at the center", th0 == 0.0,
              fmt("theta(0) = %.1e", th0));
}

void criterion8(Gate& gate) {
  const FluxSpec fx = make_flux("burgers");
  ThetaModel asym;

  struct Window {
    double eps, t_lo, t_hi;
  };
  std::vector<double> inv_eps, log_beta;
  for (const Window& w : {Window{0.07, 1.0e5, 2.0e5}, Window{0.085, 2.0e4, 4.0e4},
                          Window{0.1, 4.0e3, 8.0e3}}) {
    const Params p = params_with_eps(w.eps);
    std::vector<double> samples;
    for (int i = 0; i <= 8; ++i) samples.push_back(w.t_lo + (w.t_hi - w.t_lo) * i / 8.0);
    const ShockTrace tr = reduced_ode_solve(-0.3, w.t_hi, asym, p, fx, samples);
    const double beta = decay_rate_fit(tr, w.t_lo, w.t_hi);
    const double d = 1e-5;
    const double dtheta =
        (theta_eval(asym, d, p, fx) - theta_eval(asym, -d, p, fx)) / (2.0 * d);
    const double ratio = beta / dtheta;
    gate.clause(8, fmt("fitted decay rate vs drift slope, eps=%g", w.eps),
                ratio >= 1.0 / 1.5 && ratio <= 1.5,
                fmt("beta %.4e vs theta'(0) %.4e, ratio %.3f in [0.67, 1.5]", beta, dtheta, ratio));
    inv_eps.push_back(1.0 / w.eps);
    log_beta.push_back(std::log(-beta));
  }
  const double slope = lstsq_slope(inv_eps, log_beta);
  gate.clause(8, "log|beta| vs 1/eps slope", std::abs(slope - (-1.0)) <= 0.2,
              fmt("slope %.4f within 20%% of -1", slope));

  // grid run against the reduced model, matched at t = 10
  const EvolveResult& er = reference_run();
  const Params p = params_with_eps(0.07);
  std::vector<double> late_t, late_xi;
  for (std::size_t i = 0; i < er.zero_trace.t.size(); ++i) {
    if (er.zero_trace.t[i] >= 10.0) {
      late_t.push_back(er.zero_trace.t[i]);
      late_xi.push_back(er.zero_trace.xi[i]);
    }
  }
  std::vector<double> offsets;
  for (double t : late_t) offsets.push_back(t - late_t.front());
  const ShockTrace red = reduced_ode_solve(late_xi.front(), offsets.back(), asym, p, fx, offsets);
  double worst = 0.0;
  for (std::size_t i = 0; i < late_t.size(); ++i)
    worst = std::max(worst, std::abs(late_xi[i] - red.xi[i]));
  gate.clause(8, "grid trace vs reduced trace on [10, 1e4]", worst <= 0.05,
              fmt("max |diff| %.4f <= 0.05", worst));
}

void criterion9(Gate& gate) {
  const EvolveResult& er = reference_run();
  const Params p = params_with_eps(0.07);

  auto y_at = [&](double t) -> double {
    for (std::size_t i = 0; i < er.ynorm_t.size(); ++i)
      if (er.ynorm_t[i] == t) return er.ynorm[i];
    throw ValidationError("missing norm sample");
  };
  const double y0 = y_at(0.0);
  const double mu = std::log(y_at(0.5) / y_at(2.0)) / 1.5;
  gate.clause(9, "initial transient decays", mu > 0.0, fmt("fitted mu %.4f > 0", mu));

  double c1 = 0.0;
  for (std::size_t i = 0; i < er.ynorm_t.size(); ++i) {
    const double t = er.ynorm_t[i];
    if (t < 10.0) continue;
    c1 = std::max(c1, (er.ynorm[i] - y0 * std::exp(-mu * t)) / t);
  }
  const double cap = 10.0 * omega1_asymptotic(er.zero_trace.xi.front(), p);
  gate.clause(9, "linear-growth constant below the drift-bound scale", c1 <= cap,
              fmt("fitted c1 %.4e <= 10*Omega1 = %.4e", c1, cap));
}

}  // namespace

int main() {
  Gate gate;
  using Criterion = void (*)(Gate&);
  const std::vector<std::pair<int, Criterion>> criteria = {
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
      {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}};
  for (const auto& [num, fn] : criteria) {
    try {
      fn(gate);
    } catch (const std::exception& e) {
      gate.clause(num, "execution", false, e.what());
    }
  }
  std::printf("acceptance: %d clause(s) passed, %d failed\n", gate.passed, gate.failed);
  return gate.failed;
}
