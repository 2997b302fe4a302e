#include "metashock/diffops.hpp"

namespace metashock {

DiffOps make_diffops(const Grid1D& grid) {
  const int n = grid.n;
  const double h = grid.h;
  DiffOps ops;
  ops.n = n;
  ops.h = h;
  ops.da = Eigen::MatrixXd::Zero(n, n);
  ops.db = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    ops.da(i, i) = -1.0 / h;
    if (i + 1 < n) ops.da(i, i + 1) = 1.0 / h;
    ops.db(i, i) = 1.0 / h;
    if (i - 1 >= 0) ops.db(i, i - 1) = -1.0 / h;
  }
  ops.d1 = 0.5 * (ops.da + ops.db);
  ops.d2 = ops.da * ops.db;
  return ops;
}

}  // namespace metashock
