#pragma once

#include <vector>

#include "metashock/errors.hpp"

namespace metashock {

// Uniform grid on [-ell, ell] with n interior nodes, h = 2*ell/(n+1).
// Interior node j (0-based) sits at -ell + (j+1)*h; the walls are the
// two extra "full" nodes 0 and n+1.
struct Grid1D {
  double ell;
  int n;
  double h;

  Grid1D(double ell_, int n_) : ell(ell_), n(n_), h(2.0 * ell_ / (n_ + 1)) {
    if (ell_ <= 0.0) throw ValidationError("Grid1D: ell must be positive");
    if (n_ < 1) throw ValidationError("Grid1D: need at least one interior node");
  }

  double x(int j) const { return -ell + (j + 1) * h; }        // interior, j in [0, n)
  double x_full(int j) const { return -ell + j * h; }         // walls included, j in [0, n+1]

  std::vector<double> interior_nodes() const {
    std::vector<double> xs(n);
    for (int j = 0; j < n; ++j) xs[j] = x(j);
    return xs;
  }

  std::vector<double> full_nodes() const {
    std::vector<double> xs(n + 2);
    for (int j = 0; j <= n + 1; ++j) xs[j] = x_full(j);
    return xs;
  }
};

}  // namespace metashock
