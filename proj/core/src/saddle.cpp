#include "sparsecp/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sparsecp/errors.hpp"
#include "sparsecp/roots.hpp"

namespace sparsecp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double h0(double t1, double t2, double x, double y, double b, double z) {
  return (z + t1 * t1) * (z + t2 * t2) + 2 * b * t1 * t2 * x + b * b * (x * x + y * y);
}

// f0 without the domain check; -inf where h0 <= 0.
double f0_or_neg_inf(double t1, double t2, double x, double y, double b, double z) {
  const double h = h0(t1, t2, x, y, b, z);
  if (!(h > 0)) return -kInf;
  return -t1 * t1 - t2 * t2 - x * x - y * y + std::log(h);
}

double cubic_scale(double alpha, double b, double z) {
  return 2 * b * b * std::abs(alpha) * (1 - alpha) * (1 - alpha) + std::abs(1 - alpha) + z;
}

}  // namespace

PhasePoint::PhasePoint(double b, double z0sq) : b_(b), z0sq_(z0sq) {
  if (!(b >= 0) || !(z0sq >= 0) || !std::isfinite(b) || !std::isfinite(z0sq)) {
    std::ostringstream msg;
    msg << "phase point requires finite b >= 0 and |z0|^2 >= 0, got b=" << b
        << ", z0sq=" << z0sq;
    throw DomainError(msg.str());
  }
}

PhasePoint PhasePoint::from_np(double n, double p, double z0sq) {
  if (!(p > 0) || !(p <= n)) throw DomainError("from_np requires 0 < p <= n");
  return PhasePoint(std::sqrt(2 * (n - p) / (n * p)), z0sq);
}

PhasePoint PhasePoint::from_p(double p, double z0sq) {
  if (!(p > 0)) throw DomainError("from_p requires p > 0");
  return PhasePoint(std::sqrt(2 / p), z0sq);
}

double PhasePoint::p() const { return b_ == 0 ? kInf : 2 / (b_ * b_); }

double f0(double t1, double t2, double x, double y, const PhasePoint& pt) {
  const double h = h0(t1, t2, x, y, pt.b(), pt.z0sq());
  if (!(h > 0)) {
    std::ostringstream msg;
    msg << "f0: h0 = " << h << " is not positive at (t1=" << t1 << ", t2=" << t2
        << ", x=" << x << ", y=" << y << ")";
    throw DomainError(msg.str());
  }
  return -t1 * t1 - t2 * t2 - x * x - y * y + std::log(h);
}

double alpha_cubic(double alpha, const PhasePoint& pt) {
  const double b = pt.b();
  return 2 * alpha * (1 - alpha) * (1 - alpha) * b * b + 1 - alpha - pt.z0sq();
}

double alpha_cubic_derivative(double alpha, double b) {
  return (6 * alpha * alpha - 8 * alpha + 2) * b * b - 1;
}

std::vector<double> solve_alpha_roots(const PhasePoint& pt) {
  const double b = pt.b();
  const double z = pt.z0sq();
  if (!(b > 0) || !(z > 0)) throw DomainError("solve_alpha_roots requires b > 0 and z0sq > 0");

  // p has a local max at alpha_- and a local min at alpha_+ (leading
  // coefficient 2b^2 > 0), which brackets every real root.
  const double disc = std::sqrt(1 + 3 / (2 * b * b));
  const double a_minus = (2 - disc) / 3;
  const double a_plus = (2 + disc) / 3;
  const double p_minus = alpha_cubic(a_minus, pt);
  const double p_plus = alpha_cubic(a_plus, pt);

  // Cauchy bound on the roots of the monic cubic.
  const double c1 = 1 - 1 / (2 * b * b);
  const double c0 = (1 - z) / (2 * b * b);
  const double bound = 1 + std::max({2.0, std::abs(c1), std::abs(c0)});

  auto f = [&](double a) { return alpha_cubic(a, pt); };
  auto df = [&](double a) { return alpha_cubic_derivative(a, b); };
  auto root_in = [&](double lo, double hi) {
    RootOptions opts;
    opts.residual_tol =
        tolerance::kCubicResidual * std::max({1.0, cubic_scale(lo, b, z), cubic_scale(hi, b, z)});
    return find_root(f, df, lo, hi, opts);
  };
  auto tangent = [&](double a, double value) {
    return std::abs(value) <= 1e-14 * std::max(1.0, cubic_scale(a, b, z));
  };

  std::vector<double> roots;
  if (tangent(a_minus, p_minus)) {
    roots = {a_minus, a_minus, root_in(a_plus, bound)};
  } else if (tangent(a_plus, p_plus)) {
    roots = {root_in(-bound, a_minus), a_plus, a_plus};
  } else if (p_minus > 0 && p_plus < 0) {
    roots = {root_in(-bound, a_minus), root_in(a_minus, a_plus), root_in(a_plus, bound)};
  } else if (p_minus < 0) {
    roots = {root_in(a_plus, bound)};
  } else {
    roots = {root_in(-bound, a_minus)};
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

double value_star(double alpha, double b, double z0sq) {
  if (alpha >= 1) {
    // z0sq = 0 limit: h* = t*^2 + b x* = 1.
    return -alpha * alpha * b * b - 2 * alpha + 2 * alpha * b * b;
  }
  const double h = z0sq / (1 - alpha);
  return -alpha * alpha * b * b - 2 * alpha * h + 2 * alpha * b * b + std::log(h);
}

double value_v(double b, double z0sq) {
  return -(1 - z0sq * z0sq / (b * b)) + std::log(b * b);
}

double value_zero(double z0sq) {
  if (z0sq == 0) return -kInf;
  return 2 * std::log(z0sq);
}

std::optional<StarSaddle> star_saddle(const PhasePoint& pt) {
  const double b = pt.b();
  const double z = pt.z0sq();

  if (b == 0) {
    if (z > 1) return std::nullopt;
    StarSaddle s;
    s.alpha = 1 - z;
    s.t_star_sq = 1 - z;
    s.x_star = 0;
    s.h_star = 1;
    s.value = -2 * s.t_star_sq;
    return s;
  }
  if (z == 0) {
    if (b > 1) return std::nullopt;
    StarSaddle s;
    s.alpha = 1;
    s.t_star_sq = 1 - b * b;
    s.x_star = b;
    s.h_star = 1;
    s.value = value_star(1, b, 0);
    return s;
  }

  auto roots = solve_alpha_roots(pt);
  for (auto it = roots.rbegin(); it != roots.rend(); ++it) {
    double alpha = *it;
    if (alpha > 1 || alpha < -tolerance::kClamp) continue;
    alpha = std::max(alpha, 0.0);
    if (alpha_cubic_derivative(alpha, b) > tolerance::kTangency) continue;
    const double h = z / (1 - alpha);
    double t_sq = alpha * (h - b * b);
    if (t_sq < -tolerance::kClamp) continue;
    t_sq = std::max(t_sq, 0.0);
    StarSaddle s;
    s.alpha = alpha;
    s.t_star_sq = t_sq;
    s.x_star = alpha * b;
    s.h_star = h;
    s.value = value_star(alpha, b, z);
    return s;
  }
  return std::nullopt;
}

SaddleSet saddle_values(const PhasePoint& pt) {
  SaddleSet set;
  set.star = star_saddle(pt);
  const double b = pt.b();
  const double z = pt.z0sq();
  if (b > 0 && z <= b) {
    VSaddle v;
    v.r0_sq = 1 - z * z / (b * b);
    v.value = value_v(b, z);
    set.vsaddle = v;
  }
  set.zero.value = value_zero(z);
  return set;
}

GridMaximum brute_force_max_f0(const PhasePoint& pt, const GridSpec& grid) {
  const double b = pt.b();
  const double z = pt.z0sq();
  const int m = std::max(2, grid.points);
  const double step = grid.radius / (m - 1);

  GridMaximum out;
  out.grid_step = step;
  double best = -kInf;
  std::array<double, 3> arg{0, 0, 0};  // (t, x, y) with t1 = t2 = t
  for (int i = 0; i < m; ++i) {
    const double t = i * step;
    for (int j = 0; j < m; ++j) {
      const double x = j * step;
      for (int k = 0; k < m; ++k) {
        const double y = k * step;
        const double v = f0_or_neg_inf(t, t, x, y, b, z);
        if (v > best) {
          best = v;
          arg = {t, x, y};
        }
      }
    }
  }

  // Compass search from the grid argmax, keeping t >= 0.
  auto eval = [&](const std::array<double, 3>& a) {
    return f0_or_neg_inf(a[0], a[0], a[1], a[2], b, z);
  };
  double h = step;
  while (h > grid.refine_tol * 0.1) {
    bool improved = false;
    for (int c = 0; c < 3; ++c) {
      for (double dir : {1.0, -1.0}) {
        auto cand = arg;
        cand[c] += dir * h;
        if (c == 0 && cand[0] < 0) cand[0] = 0;
        const double v = eval(cand);
        if (v > best) {
          best = v;
          arg = cand;
          improved = true;
        }
      }
    }
    if (!improved) h *= 0.5;
  }
  out.argmax = {arg[0], arg[0], arg[1], arg[2]};
  out.value = best;

  // Coarse confirmation over the full (t1, t2, x, y) space; x may be negative.
  const int mc = std::max(2, grid.coarse_points);
  const double cs = grid.radius / (mc - 1);
  double coarse_best = -kInf;
  for (int i1 = 0; i1 < mc; ++i1) {
    for (int i2 = 0; i2 < mc; ++i2) {
      for (int j = -(mc - 1); j < mc; ++j) {
        for (int k = 0; k < mc; ++k) {
          const double v = f0_or_neg_inf(i1 * cs, i2 * cs, j * cs, k * cs, b, z);
          if (v > coarse_best) {
            coarse_best = v;
            out.coarse_argmax = {i1 * cs, i2 * cs, j * cs, k * cs};
          }
        }
      }
    }
  }
  out.coarse_value = coarse_best;
  return out;
}

}  // namespace sparsecp
