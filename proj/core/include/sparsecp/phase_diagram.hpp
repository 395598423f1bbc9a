#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sparsecp/saddle.hpp"

namespace sparsecp {

/// Which saddle dominates f0. The integer values are the CSV encoding.
enum class Region { Boundary = 0, Omega1 = 1, Omega2 = 2, Omega3 = 3 };

std::string_view to_string(Region r);

// ---------------------------------------------------------------------------
// Closed forms from the star-saddle existence analysis.

/// |z0|^2 at which the alpha cubic is tangent to zero at its local maximum
/// alpha_-(b); the star saddle exists up to this level for b in (1/sqrt2, 1].
double z_minus(double b);

struct AlphaPair {
  double minus;
  double plus;
};
/// Critical points (2 -+ sqrt(1 + 3/(2b^2)))/3 of the alpha cubic.
AlphaPair alpha_pm(double b);

struct BPair {
  double minus;
  double plus;
};
/// Roots in b of 2 alpha (1 - alpha)^2 b^2 + 1 - alpha = b, i.e. the b-range
/// (minus, plus) in which the v-saddle exists for a given star alpha.
BPair b_pm(double alpha);

/// F_I - F_II written in s = 1/b^2 after eliminating |z0|^2 with the alpha
/// cubic. Vanishes together with its s-derivative at s = 1 - 2 alpha (1 - alpha).
double star_v_gap(double s, double alpha);
/// Quadratic whose sign is the sign of d(star_v_gap)/ds for s > 1 - 2a(1-a).
double star_v_gap_factor(double s, double alpha);

/// (3 - sqrt5)/4: below it star_v_gap decreases immediately past its double zero.
double star_v_alpha_floor();

/// The zero of star_v_gap(., alpha) beyond 1 - 2 alpha (1 - alpha), for alpha
/// in [(3 - sqrt5)/4, 1).
double star_v_crossover_s(double alpha);
/// 1 / b_pm(alpha).minus^2: the s at which the v-saddle appears (|z0|^2 = b).
double v_existence_s(double alpha);

/// alpha at which star_v_crossover_s meets v_existence_s (about 0.22).
double crossover_alpha();
/// 1 / sqrt(star_v_crossover_s(crossover_alpha())) (about 1.11): up to this
/// b the star/v dominance boundary is the line |z0|^2 = b.
double star_v_plateau_end_b();
/// b with z_minus(b) = b (about 1.128).
double tangency_crossing_b();
/// b with curve_gamma3(b) = b (about 1.11).
double star_zero_crossing_b();

/// F_I - F_III as a function of the star alpha and b.
double star_zero_gap(double alpha, double b);

// ---------------------------------------------------------------------------
// Phase boundaries.

/// Lower edge of star existence for b in [1, sqrt2]: (b^2 - b sqrt(2 - b^2))/2.
double curve_gamma1(double b);

/// Star/v dominance level z1(b) for b in [1, sqrt2]: star dominates for
/// gamma1(b) <= |z0|^2 <= z1(b). Equals b up to star_v_plateau_end_b().
double curve_gamma2(double b);

/// Star/zero dominance level z2(b) for b in [1/sqrt2, sqrt2]: star dominates
/// the zero saddle for |z0|^2 <= z2(b).
double curve_gamma3(double b);

/// Star alpha on curve_gamma2 / curve_gamma3 (the two distinct "alpha_1").
double alpha1_gamma2(double b);
double alpha1_gamma3(double b);

// ---------------------------------------------------------------------------
// Classification.

inline constexpr double kDefaultBoundaryTol = 1e-9;

/// Region of the largest available saddle value; Boundary when the two
/// largest differ by less than tol.
Region classify_by_argmax(const PhasePoint& pt, double tol = kDefaultBoundaryTol);

/// Region from the curves gamma1, gamma2, gamma3 and the lines |z0|^2 = 1,
/// |z0|^2 = b only.
Region classify_by_curves(const PhasePoint& pt);

// ---------------------------------------------------------------------------
// Tables and CSV export.

enum class CurveId { gamma1, gamma2, gamma3, z_minus };
std::string_view to_string(CurveId id);

struct CurveSample {
  double b;
  double z0sq;
  double residual;
};

struct CurveTable {
  CurveId curve_id;
  std::vector<CurveSample> samples;
  double tolerance;
};

/// `count` samples of a curve over its natural b-range, each with the
/// residual of the curve's defining equation.
CurveTable sample_curve(CurveId id, int count);
/// Residual of the defining equation of `id` at (b, z0sq), recomputed from
/// scratch (used to re-verify tables read back from disk).
double curve_residual(CurveId id, double b, double z0sq);

struct GridRange {
  double min;
  double max;
  int count;
  double at(int i) const;
};

void write_region_grid(std::ostream& out, const GridRange& b_range, const GridRange& z_range,
                       unsigned workers = 1);
void write_curves(std::ostream& out, const std::vector<CurveTable>& curves);
std::vector<CurveTable> read_curves(std::istream& in);

struct ExportResult {
  std::filesystem::path grid_csv;
  std::filesystem::path curves_csv;
  std::size_t grid_rows = 0;
  std::vector<CurveTable> curves;
};

/// Writes regions.csv and curves.csv into out_dir (created if needed).
ExportResult export_grid(const GridRange& b_range, const GridRange& z_range,
                         const std::filesystem::path& out_dir, int curve_samples = 200,
                         unsigned workers = 1);

}  // namespace sparsecp
