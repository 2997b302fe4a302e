#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace metashock {

struct Spectrum {
  // Sorted by descending real part; conjugate pairs adjacent, +Im first.
  std::vector<std::complex<double>> values;
  // ||A phi - lambda phi||_2 for the computed unit eigenvector of each value.
  std::vector<double> residuals;
  double matrix_norm = 0.0;  // Frobenius
};

// Dense general real eigensolve. Preconditions: finite entries, dimension
// at most 4000. Throws PartialSpectrumError if the QR iteration fails to
// converge, ValidationError on precondition violations.
Spectrum eig_general(const Eigen::MatrixXd& a);

}  // namespace metashock
