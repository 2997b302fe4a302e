#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "metashock/diffops.hpp"
#include "metashock/eig.hpp"
#include "metashock/flux.hpp"
#include "metashock/grid.hpp"
#include "metashock/odeint.hpp"
#include "metashock/steady.hpp"

namespace metashock {

// Discrete linearization around a matched steady state. l_vsc is the scalar
// diffusion-transport reduction eps*a^2*D2 - D*diag(b); l_jx the 2n x 2n
// relaxation block operator. The transport rows use the adjoint-pair split
// (forward difference in the u row, backward in the v row) so eliminating the
// v block reproduces lambda*(1 + eps*lambda) in spec(l_vsc) exactly at the
// matrix level, not just to O(h^2).
struct OperatorAssembly {
  Grid1D grid;
  Eigen::MatrixXd l_vsc;  // n x n
  Eigen::MatrixXd l_jx;   // 2n x 2n
  std::vector<double> b;  // f'(U) at interior nodes
  double eps = 0.0, a = 0.0, xi = 0.0;
  bool under_resolved = false;
};

OperatorAssembly assemble(const MatchedFamily& fam, const Grid1D& grid);

// Roots of eps*lambda^2 + lambda = mu on the principal branch.
std::pair<std::complex<double>, std::complex<double>> map_vsc_to_jx(
    std::complex<double> mu, double eps);

struct SpectralStructure {
  double lambda1 = 0.0;                           // real eigenvalue nearest 0 from below
  std::vector<double> real_band;                  // remaining real eigenvalues
  std::vector<std::complex<double>> complex_band;  // conjugate pairs
  int k_count = 0;              // real pairs beyond the principal one
  double real_band_max = 0.0;   // least negative real-band member
  double complex_band_re = 0.0;  // mean real part of the complex band
};

// Partition a block-operator spectrum into principal eigenvalue, real band
// and complex band. Throws StructureViolationError when no real eigenvalue
// (or more than one) lies in (-1/(4 eps), 0).
SpectralStructure classify(const Spectrum& spec, double eps);

// Two-exponential principal-eigenvalue estimates; exposed for a = 1 only.
double lambda1_asymptotic_burgers(double xi, const Params& p);

struct ShockProfile {
  FluxSpec flux;
  double u_star = 1.0;
  std::vector<double> z, u, dudz;   // samples, z increasing
  OdeSolution forward, backward;    // halves glued at z = 0
  double eval(double z) const;
  double eval_du(double z) const;
};

// Standing viscous profile in the stretched layer variable: u' = f(u) - f(u*),
// u(0) = 0, integrated both ways over [-z_range, z_range].
ShockProfile shock_profile(const FluxSpec& flux, double u_star, double z_range);

struct TailConstants {
  double nu_minus = 0.0, nu_plus = 0.0;  // exponential decay rates at z = -+inf
  double z_minus = 0.0, z_plus = 0.0;    // tail prefactors from the profile integrals
  double a_minus = 0.0, a_plus = 0.0;    // prefactors entering the eigenvalue formula
};

TailConstants tail_constants(const FluxSpec& flux, double u_star);

double lambda1_asymptotic_general(double xi, const Params& p, const FluxSpec& flux);

// Potential of the equivalent self-adjoint form of the linearized diffusion
// operator, sampled along a profile: (1/4) f'(u)^2 + (1/2) f''(u) (f(u)-f(u*)).
std::vector<double> schrodinger_potential(const FluxSpec& flux, const ShockProfile& prof);
double schrodinger_potential_value(const FluxSpec& flux, double u_star, double u_value);

// Hyperbolic-limit adjoint eigenfunction for the quadratic flux: closed-form
// piecewise exponentials, continuous in the first component across xi.
struct AdjointEigenfunction {
  Params params;
  double xi = 0.0;
  double psi_u(double x) const;
  double psi_v(double x) const;
};

AdjointEigenfunction adjoint_first_eigenfunction(double xi, const Params& p);

}  // namespace metashock
