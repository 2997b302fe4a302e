#pragma once

#include <functional>

namespace metashock {

struct RootResult {
  double root = 0.0;
  double fval = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Newton iteration confined to a sign-change bracket; any step that would
// leave the current bracket (or fails to shrink it) falls back to bisection.
// Requires f(lo)*f(hi) <= 0, else throws BracketError. `df` may be empty, in
// which case a secant slope is used for the Newton step.
RootResult newton_safeguarded(const std::function<double(double)>& f,
                              const std::function<double(double)>& df,
                              double lo, double hi,
                              double ftol = 1e-14, double xtol = 1e-15,
                              int maxit = 200);

}  // namespace metashock
