#pragma once

#include <functional>

namespace sparsecp {

struct RootOptions {
  double x_tol = 1e-15;        // absolute bracket width at which bisection stops
  double residual_tol = 1e-10; // |f(root)| required on exit
  int max_iter = 400;
};

/// Root of a continuous function on [lo, hi] where f(lo) and f(hi) have
/// opposite signs (or one of them is zero). Bisection narrows the bracket,
/// then Newton steps (with finite-difference slopes when no derivative is
/// given) polish inside it. Throws NumericalError when the bracket has no
/// sign change or the residual tolerance cannot be met.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 const RootOptions& opts = {});

double find_root(const std::function<double(double)>& f,
                 const std::function<double(double)>& df, double lo, double hi,
                 const RootOptions& opts = {});

}  // namespace sparsecp
