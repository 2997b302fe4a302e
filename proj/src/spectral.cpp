#include "metashock/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "metashock/errors.hpp"
#include "metashock/roots.hpp"

namespace metashock {

OperatorAssembly assemble(const MatchedFamily& fam, const Grid1D& grid) {
  const Params& p = fam.params;
  const int n = grid.n;
  DiffOps ops = make_diffops(grid);

  OperatorAssembly out{grid};
  out.eps = p.eps;
  out.a = p.a;
  out.xi = fam.xi;
  out.b.resize(n);
  for (int j = 0; j < n; ++j) out.b[j] = fam.flux.df(fam.eval_U(grid.x(j)));
  out.under_resolved = (p.eps * p.a * p.a / p.u_star()) / grid.h < 8.0;

  Eigen::VectorXd bv = Eigen::Map<const Eigen::VectorXd>(out.b.data(), n);
  const double epsa2 = p.eps * p.a * p.a;
  out.l_vsc = epsa2 * ops.d2 - ops.da * bv.asDiagonal();

  out.l_jx = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  out.l_jx.topRightCorner(n, n) = -ops.da;
  Eigen::MatrixXd lower = -p.a * p.a * ops.db;
  lower.diagonal() += bv / p.eps;
  out.l_jx.bottomLeftCorner(n, n) = lower;
  out.l_jx.bottomRightCorner(n, n).diagonal().setConstant(-1.0 / p.eps);
  return out;
}

std::pair<std::complex<double>, std::complex<double>> map_vsc_to_jx(
    std::complex<double> mu, double eps) {
  const std::complex<double> w = std::sqrt(std::complex<double>(1.0, 0.0) + 4.0 * eps * mu);
  return {(w - 1.0) / (2.0 * eps), (-w - 1.0) / (2.0 * eps)};
}

SpectralStructure classify(const Spectrum& spec, double eps) {
  SpectralStructure out;
  std::vector<double> reals;
  for (const auto& lam : spec.values) {
    if (std::abs(lam.imag()) <= 1e-6 * std::max(1.0, std::abs(lam.real()))) {
      reals.push_back(lam.real());
    } else {
      out.complex_band.push_back(lam);
    }
  }
  const double gate = -1.0 / (4.0 * eps);
  std::vector<double> principal;
  for (double r : reals) {
    if (r > gate && r < 0.0) principal.push_back(r);
  }
  if (principal.empty())
    throw StructureViolationError("no real eigenvalue in (-1/(4 eps), 0)");
  if (principal.size() > 1)
    throw StructureViolationError("multiple real eigenvalues in (-1/(4 eps), 0): " +
                                  std::to_string(principal.size()));
  out.lambda1 = principal.front();
  for (double r : reals) {
    if (r != out.lambda1) out.real_band.push_back(r);
  }
  std::sort(out.real_band.begin(), out.real_band.end(), std::greater<double>());
  out.k_count = static_cast<int>(reals.size()) / 2 - 1;
  out.real_band_max = out.real_band.empty() ? std::numeric_limits<double>::quiet_NaN()
                                            : out.real_band.front();
  if (!out.complex_band.empty()) {
    double s = 0.0;
    for (const auto& lam : out.complex_band) s += lam.real();
    out.complex_band_re = s / static_cast<double>(out.complex_band.size());
  } else {
    out.complex_band_re = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

namespace {

// lambda_vsc -> principal relaxation eigenvalue, cancellation-free for small x:
// (-1 + sqrt(1+4 eps m)) / (2 eps) = 2m / (1 + sqrt(1+4 eps m)).
double map_principal_real(double mu, double eps) {
  return 2.0 * mu / (1.0 + std::sqrt(1.0 + 4.0 * eps * mu));
}

void require_unit_a(const Params& p, const char* who) {
  if (std::abs(p.a - 1.0) > 1e-14)
    throw UnsupportedParameterError(std::string(who) + " is calibrated for a = 1 only");
}

}  // namespace

double lambda1_asymptotic_burgers(double xi, const Params& p) {
  validate_params(p);
  require_unit_a(p, "lambda1_asymptotic_burgers");
  if (std::abs(p.u_minus + p.u_plus) > 1e-12 * std::abs(p.u_minus))
    throw UnsupportedParameterError("asymptotic eigenvalue formula needs u_plus = -u_minus");
  const double us = p.u_star();
  const double em = std::exp(-us * (p.ell - xi) / p.eps);
  const double ep = std::exp(-us * (p.ell + xi) / p.eps);
  const double lam_vsc = -us * us / (2.0 * p.eps) * (em + ep);
  return map_principal_real(lam_vsc, p.eps);
}

double ShockProfile::eval(double z) const {
  const OdeSolution& half = z >= 0.0 ? forward : backward;
  const double zmax = half.ts.back();
  if ((z >= 0.0 && z > zmax) || (z < 0.0 && z < zmax)) return half.ys.back()[0];
  return half.eval1(z, 0);
}

double ShockProfile::eval_du(double z) const {
  return flux.f(eval(z)) - flux.f(u_star);
}

ShockProfile shock_profile(const FluxSpec& flux, double u_star, double z_range) {
  if (!(u_star > 0.0) || !(z_range > 0.0))
    throw ValidationError("shock_profile needs u_star > 0 and z_range > 0");
  ShockProfile prof;
  prof.flux = flux;
  prof.u_star = u_star;
  const double f_star = flux.f(u_star);
  OdeRhs rhs = [&flux, f_star](double, const Vec& y, Vec& dy) {
    dy[0] = flux.f(y[0]) - f_star;
  };
  Vec y0(1);
  y0[0] = 0.0;
  // tight tolerance keeps the Hermite interpolant between accepted steps below 1e-9
  prof.forward = integrate_ode(rhs, y0, 0.0, z_range, 1e-12, z_range / 8.0);
  prof.backward = integrate_ode(rhs, y0, 0.0, -z_range, 1e-12, z_range / 8.0);
  for (const OdeSolution* sol : {&prof.backward, &prof.forward}) {
    for (const auto& y : sol->ys) {
      if (std::abs(y[0]) >= u_star)
        throw InstabilityError("profile left (-u*, u*)");
    }
  }
  for (auto it = prof.backward.ts.rbegin(); it != prof.backward.ts.rend(); ++it) {
    prof.z.push_back(*it);
  }
  // drop the duplicated z = 0 sample from the forward half
  for (std::size_t i = 1; i < prof.forward.ts.size(); ++i) prof.z.push_back(prof.forward.ts[i]);
  prof.u.reserve(prof.z.size());
  prof.dudz.reserve(prof.z.size());
  for (double z : prof.z) {
    const double u = prof.eval(z);
    prof.u.push_back(u);
    prof.dudz.push_back(flux.f(u) - f_star);
  }
  return prof;
}

namespace {

const double kGauss10Nodes[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                                 0.8650633666889845, 0.9739065285171717};
const double kGauss10Weights[5] = {0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
                                   0.1494513491505806, 0.0666713443086881};
const double kGauss20Nodes[10] = {0.0765265211334973, 0.2277858511416451, 0.3737060887154195,
                                  0.5108670019508271, 0.6360536807265150, 0.7463319064601508,
                                  0.8391169718222188, 0.9122344282513259, 0.9639719272779138,
                                  0.9931285991850949};
const double kGauss20Weights[10] = {0.1527533871307258, 0.1491729864726037, 0.1420961093183820,
                                    0.1316886384491766, 0.1181945319615184, 0.1019301198172404,
                                    0.0832767415767048, 0.0626720483341091, 0.0406014298003869,
                                    0.0176140071391521};

template <typename F>
double gauss10(const F& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
  double s = 0.0;
  for (int i = 0; i < 5; ++i)
    s += kGauss10Weights[i] * (f(c + r * kGauss10Nodes[i]) + f(c - r * kGauss10Nodes[i]));
  return s * r;
}

template <typename F>
double gauss20(const F& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
  double s = 0.0;
  for (int i = 0; i < 10; ++i)
    s += kGauss20Weights[i] * (f(c + r * kGauss20Nodes[i]) + f(c - r * kGauss20Nodes[i]));
  return s * r;
}

template <typename F>
double adaptive_quad(const F& f, double lo, double hi, double tol, int depth) {
  const double coarse = gauss10(f, lo, hi);
  const double fine = gauss20(f, lo, hi);
  if (std::abs(fine - coarse) <= tol) return fine;
  if (depth >= 30) throw TailConstantError("tail integral failed to converge");
  const double mid = 0.5 * (lo + hi);
  return adaptive_quad(f, lo, mid, 0.5 * tol, depth + 1) +
         adaptive_quad(f, mid, hi, 0.5 * tol, depth + 1);
}

}  // namespace

TailConstants tail_constants(const FluxSpec& flux, double u_star) {
  if (!(u_star > 0.0)) throw ValidationError("tail_constants needs u_star > 0");
  TailConstants tc;
  tc.nu_plus = -flux.df(-u_star);
  tc.nu_minus = flux.df(u_star);
  if (!(tc.nu_plus > 0.0) || !(tc.nu_minus > 0.0))
    throw TailConstantError("decay rates must be positive");
  const double f_star = flux.f(u_star);

  // Both integrands have removable singularities at the plateau ends; the
  // analytic limit takes over inside a 1e-8 u* collar where the subtraction
  // of the two poles loses half the mantissa.
  const double collar = 1e-8 * u_star;
  auto integrand_plus = [&](double eta) {
    if (std::abs(eta + u_star) < collar)
      return -flux.d2f(-u_star) / (2.0 * tc.nu_plus * tc.nu_plus);
    return 1.0 / (flux.f(eta) - f_star) + 1.0 / (tc.nu_plus * (eta + u_star));
  };
  auto integrand_minus = [&](double eta) {
    if (std::abs(eta - u_star) < collar)
      return -flux.d2f(u_star) / (2.0 * tc.nu_minus * tc.nu_minus);
    return 1.0 / (flux.f(eta) - f_star) - 1.0 / (tc.nu_minus * (eta - u_star));
  };
  // integral from 0 to -u*, written over the increasing interval
  const double ip = -adaptive_quad(integrand_plus, -u_star, 0.0, 1e-10, 0);
  const double im = adaptive_quad(integrand_minus, 0.0, u_star, 1e-10, 0);
  tc.z_plus = u_star * std::exp(tc.nu_plus * ip);
  tc.z_minus = u_star * std::exp(-tc.nu_minus * im);
  tc.a_plus = tc.z_plus;
  tc.a_minus = tc.z_minus;
  return tc;
}

double lambda1_asymptotic_general(double xi, const Params& p, const FluxSpec& flux) {
  validate_params(p);
  require_unit_a(p, "lambda1_asymptotic_general");
  const double us = p.u_star();
  TailConstants tc = tail_constants(flux, us);
  const double g = tc.a_plus * tc.nu_plus * tc.nu_plus *
                       std::exp(-tc.nu_plus * (p.ell - xi) / p.eps) +
                   tc.a_minus * tc.nu_minus * tc.nu_minus *
                       std::exp(-tc.nu_minus * (p.ell + xi) / p.eps);
  const double lam_vsc = -g / (4.0 * p.eps * us);
  return map_principal_real(lam_vsc, p.eps);
}

double schrodinger_potential_value(const FluxSpec& flux, double u_star, double u_value) {
  const double d = flux.df(u_value);
  return 0.25 * d * d + 0.5 * flux.d2f(u_value) * (flux.f(u_value) - flux.f(u_star));
}

std::vector<double> schrodinger_potential(const FluxSpec& flux, const ShockProfile& prof) {
  std::vector<double> v;
  v.reserve(prof.u.size());
  for (double u : prof.u) v.push_back(schrodinger_potential_value(flux, prof.u_star, u));
  return v;
}

double AdjointEigenfunction::psi_u(double x) const {
  const Params& p = params;
  if (std::abs(x) > p.ell * (1.0 + 1e-12)) throw OutOfDomainError("x outside [-ell, ell]");
  const double ea2 = p.a * p.a * p.eps;
  if (x < xi) {
    const double a_plus = 1.0 - std::exp(p.u_plus * (p.ell - xi) / ea2);
    return a_plus * (1.0 - std::exp(-p.u_minus * (p.ell + x) / ea2));
  }
  const double a_minus = 1.0 - std::exp(-p.u_minus * (p.ell + xi) / ea2);
  return a_minus * (1.0 - std::exp(p.u_plus * (p.ell - x) / ea2));
}

double AdjointEigenfunction::psi_v(double x) const {
  const Params& p = params;
  if (std::abs(x) > p.ell * (1.0 + 1e-12)) throw OutOfDomainError("x outside [-ell, ell]");
  const double ea2 = p.a * p.a * p.eps;
  if (x < xi) {
    const double a_plus = 1.0 - std::exp(p.u_plus * (p.ell - xi) / ea2);
    return p.u_minus / (p.a * p.a) * a_plus * std::exp(-p.u_minus * (p.ell + x) / ea2);
  }
  const double a_minus = 1.0 - std::exp(-p.u_minus * (p.ell + xi) / ea2);
  return p.u_plus / (p.a * p.a) * a_minus * std::exp(p.u_plus * (p.ell - x) / ea2);
}

AdjointEigenfunction adjoint_first_eigenfunction(double xi, const Params& p) {
  validate_params(p);
  if (std::abs(xi) >= p.ell) throw OutOfDomainError("xi must lie strictly inside (-ell, ell)");
  AdjointEigenfunction psi;
  psi.params = p;
  psi.xi = xi;
  return psi;
}

}  // namespace metashock
