#pragma once

#include <Eigen/Dense>

#include "metashock/grid.hpp"

namespace metashock {

// First/second difference operators on the interior nodes of a Grid1D with
// homogeneous Dirichlet closures.
//
// The second difference is built as a product of two adjoint one-sided
// factors, d2 = da*db with db = -da^T exactly. Consequences used elsewhere:
//   - d1 := (da+db)/2 is entrywise the standard centered matrix and is
//     exactly skew-symmetric;
//   - the quadratic eigenvalue relation between the scalar operator
//     eps*a^2*d2 - da*B and its 2x2 block companion holds at matrix level,
//     so the two spectra map onto each other to solver precision at any n.
// All matrices are banded by construction; stored dense for the dense
// eigensolver they feed.
struct DiffOps {
  int n = 0;
  double h = 0.0;
  Eigen::MatrixXd da;  // forward difference, (u_{j+1}-u_j)/h, Dirichlet at the right row
  Eigen::MatrixXd db;  // backward difference, equals -da^T
  Eigen::MatrixXd d1;  // (da+db)/2, centered with Dirichlet rows
  Eigen::MatrixXd d2;  // da*db

  // Second difference as the literal composition of the two factors; the
  // factored composition is the defining action (bit-identical to itself by
  // construction, and equal to d2*u up to matmul rounding).
  Eigen::VectorXd apply_second(const Eigen::VectorXd& u) const { return da * (db * u); }
};

DiffOps make_diffops(const Grid1D& grid);

}  // namespace metashock
