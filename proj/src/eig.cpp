#include "metashock/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "metashock/errors.hpp"

namespace metashock {

Spectrum eig_general(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw ValidationError("eig_general: matrix not square");
  if (a.rows() > 4000) throw ValidationError("eig_general: dimension exceeds dense cap 4000");
  if (!a.allFinite()) throw ValidationError("eig_general: non-finite entries");

  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success)
    throw PartialSpectrumError("eig_general: QR iteration did not converge");

  const int n = static_cast<int>(a.rows());
  const Eigen::MatrixXcd ac = a.cast<std::complex<double>>();
  const auto& vals = solver.eigenvalues();
  const auto& vecs = solver.eigenvectors();

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    if (vals[i].real() != vals[j].real()) return vals[i].real() > vals[j].real();
    if (std::abs(vals[i].imag()) != std::abs(vals[j].imag()))
      return std::abs(vals[i].imag()) < std::abs(vals[j].imag());
    return vals[i].imag() > vals[j].imag();
  });

  Spectrum s;
  s.matrix_norm = a.norm();
  s.values.reserve(n);
  s.residuals.reserve(n);
  for (int idx : order) {
    const Eigen::VectorXcd phi = vecs.col(idx);
    s.values.push_back(vals[idx]);
    s.residuals.push_back((ac * phi - vals[idx] * phi).norm() / phi.norm());
  }
  return s;
}

}  // namespace metashock
