#pragma once

#include <array>
#include <optional>
#include <vector>

namespace sparsecp {

/// A point (b, |z0|^2) of the phase plane.
///
/// b is the sparsity scale sqrt(2(n-p)/(np)); for fixed p and n -> infinity
/// it tends to sqrt(2/p).
class PhasePoint {
 public:
  /// Throws DomainError unless b >= 0 and z0sq >= 0.
  PhasePoint(double b, double z0sq);

  /// b^2 = 2(n-p)/(np); requires 0 < p <= n.
  static PhasePoint from_np(double n, double p, double z0sq);
  /// The n -> infinity value b^2 = 2/p; requires p > 0.
  static PhasePoint from_p(double p, double z0sq);

  double b() const { return b_; }
  double z0sq() const { return z0sq_; }
  /// Inverse of from_p: 2/b^2 (infinity at b = 0).
  double p() const;

 private:
  double b_;
  double z0sq_;
};

/// The *-saddle t1 = t2 = t*, x = x* = alpha*b, y = 0.
struct StarSaddle {
  double alpha = 0.0;
  double t_star_sq = 0.0;
  double x_star = 0.0;
  double h_star = 0.0;
  double value = 0.0;  // F_I
};

/// The circle of v-saddles t = 0, x^2 + y^2 = r0^2.
struct VSaddle {
  double r0_sq = 0.0;
  double value = 0.0;  // F_II
};

struct ZeroSaddle {
  double value = 0.0;  // F_III, -inf when z0sq = 0
};

struct SaddleSet {
  std::optional<StarSaddle> star;
  std::optional<VSaddle> vsaddle;
  ZeroSaddle zero;
};

namespace tolerance {
// Slack on (6a^2 - 8a + 2)b^2 - 1 <= 0 so that the double root at tangency
// (where the expression vanishes) is accepted.
inline constexpr double kTangency = 1e-9;
// t*^2 in [-kClamp, 0) is treated as 0.
inline constexpr double kClamp = 1e-12;
// Required |p(alpha)| for roots of the alpha cubic (relative to term scale).
inline constexpr double kCubicResidual = 1e-12;
}  // namespace tolerance

/// f0(t1, t2, x + iy) = -t1^2 - t2^2 - x^2 - y^2 + log h0 with
/// h0 = (z0sq + t1^2)(z0sq + t2^2) + 2 b t1 t2 x + b^2 (x^2 + y^2).
/// Throws DomainError when h0 <= 0.
double f0(double t1, double t2, double x, double y, const PhasePoint& pt);

/// p(alpha) = 2 alpha (1 - alpha)^2 b^2 + 1 - alpha - z0sq.
double alpha_cubic(double alpha, const PhasePoint& pt);
/// p'(alpha) = (6 alpha^2 - 8 alpha + 2) b^2 - 1.
double alpha_cubic_derivative(double alpha, double b);

/// All real roots of p(alpha) = 0, ascending; a double root appears twice.
/// Requires b > 0 and z0sq > 0 (the b = 0 case is linear and handled by
/// star_saddle directly).
std::vector<double> solve_alpha_roots(const PhasePoint& pt);

/// Closed-form saddle values.
double value_star(double alpha, double b, double z0sq);
double value_v(double b, double z0sq);
double value_zero(double z0sq);

std::optional<StarSaddle> star_saddle(const PhasePoint& pt);
SaddleSet saddle_values(const PhasePoint& pt);

struct GridSpec {
  double radius = 3.0;      // each coordinate is searched in [0, radius]
  int points = 121;         // per axis, reduced (t, x, y) grid
  int coarse_points = 21;   // per axis, full (t1, t2, x, y) confirmation grid
  double refine_tol = 1e-8; // final step of the coordinate search
};

struct GridMaximum {
  std::array<double, 4> argmax{};  // (t1, t2, x, y)
  double value = 0.0;
  // Best value seen by the coarse 4-d pass; never exceeds `value` by more
  // than the coarse grid's discretisation error when t1 = t2 holds at the max.
  std::array<double, 4> coarse_argmax{};
  double coarse_value = 0.0;
  double grid_step = 0.0;
};

/// Global maximum of f0 by exhaustive grid search on the t1 = t2 slice,
/// refined by compass search, plus a coarse pass over all four coordinates.
GridMaximum brute_force_max_f0(const PhasePoint& pt, const GridSpec& grid = {});

}  // namespace sparsecp
