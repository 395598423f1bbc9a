#include "sparsecp/roots.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sparsecp/errors.hpp"

namespace sparsecp {

namespace {

double polish(const std::function<double(double)>& f,
              const std::function<double(double)>* df, double root, double lo,
              double hi) {
  double fx = f(root);
  for (int i = 0; i < 8 && fx != 0.0; ++i) {
    double slope;
    if (df != nullptr) {
      slope = (*df)(root);
    } else {
      const double h = 1e-7 * std::max(1.0, std::abs(root));
      const double right = std::min(hi, root + h);
      const double left = std::max(lo, root - h);
      if (!(right > left)) break;
      slope = (f(right) - f(left)) / (right - left);
    }
    if (slope == 0.0 || !std::isfinite(slope)) break;
    const double next = root - fx / slope;
    if (!(next >= lo && next <= hi)) break;
    const double fn = f(next);
    if (!(std::abs(fn) < std::abs(fx))) break;
    root = next;
    fx = fn;
  }
  return root;
}

double solve(const std::function<double(double)>& f,
             const std::function<double(double)>* df, double lo, double hi,
             const RootOptions& opts) {
  if (lo > hi) std::swap(lo, hi);
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (!std::isfinite(flo) || !std::isfinite(fhi) || (flo > 0) == (fhi > 0)) {
    std::ostringstream msg;
    msg << "no sign change in bracket [" << lo << ", " << hi << "]: f(lo)=" << flo
        << ", f(hi)=" << fhi;
    throw NumericalError(msg.str());
  }
  const double a0 = lo;
  const double b0 = hi;
  for (int i = 0; i < opts.max_iter && hi - lo > opts.x_tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double root = 0.5 * (lo + hi);
  root = polish(f, df, root, a0, b0);
  const double res = std::abs(f(root));
  if (!(res <= opts.residual_tol)) {
    std::ostringstream msg;
    msg << "root residual " << res << " exceeds tolerance " << opts.residual_tol
        << " at x=" << root;
    throw NumericalError(msg.str());
  }
  return root;
}

}  // namespace

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 const RootOptions& opts) {
  return solve(f, nullptr, lo, hi, opts);
}

double find_root(const std::function<double(double)>& f,
                 const std::function<double(double)>& df, double lo, double hi,
                 const RootOptions& opts) {
  return solve(f, &df, lo, hi, opts);
}

}  // namespace sparsecp
