#include "sparsecp/phase_diagram.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "sparsecp/errors.hpp"
#include "sparsecp/parallel.hpp"
#include "sparsecp/roots.hpp"

namespace sparsecp {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
const double kInvSqrt2 = 1 / std::numbers::sqrt2;

double upper_split_b() { return std::sqrt((5 + std::sqrt(5.0)) / 5); }

double cubic_level(double alpha, double b) {
  return 2 * alpha * (1 - alpha) * (1 - alpha) * b * b + 1 - alpha;
}

void require_positive_b(double b, const char* what) {
  if (!(b > 0)) {
    std::ostringstream msg;
    msg << what << " requires b > 0, got " << b;
    throw DomainError(msg.str());
  }
}

void require_range(double b, double lo, double hi, const char* what) {
  // Endpoints are often produced by sqrt and may miss by an ulp.
  const double slack = 1e-12;
  if (!(b >= lo - slack && b <= hi + slack)) {
    std::ostringstream msg;
    msg << what << " is defined for b in [" << lo << ", " << hi << "], got " << b;
    throw DomainError(msg.str());
  }
}

// Inverse of an increasing function on [lo, hi].
double invert_increasing(const std::function<double(double)>& fn, double target, double lo,
                         double hi, double residual_tol) {
  RootOptions opts;
  opts.residual_tol = residual_tol;
  return find_root([&](double a) { return fn(a) - target; }, lo, hi, opts);
}

}  // namespace

std::string_view to_string(Region r) {
  switch (r) {
    case Region::Omega1: return "Omega1";
    case Region::Omega2: return "Omega2";
    case Region::Omega3: return "Omega3";
    case Region::Boundary: return "Boundary";
  }
  return "?";
}

std::string_view to_string(CurveId id) {
  switch (id) {
    case CurveId::gamma1: return "gamma1";
    case CurveId::gamma2: return "gamma2";
    case CurveId::gamma3: return "gamma3";
    case CurveId::z_minus: return "z_minus";
  }
  return "?";
}

double z_minus(double b) {
  require_positive_b(b, "z_minus");
  const double b2 = b * b;
  return (4 * b2 + 9) / 27 + (4 * b2 + 6) / 27 * std::sqrt(1 + 3 / (2 * b2));
}

AlphaPair alpha_pm(double b) {
  require_positive_b(b, "alpha_pm");
  const double d = std::sqrt(1 + 3 / (2 * b * b));
  return {(2 - d) / 3, (2 + d) / 3};
}

BPair b_pm(double alpha) {
  if (!(alpha > 0 && alpha < 1)) {
    std::ostringstream msg;
    msg << "b_pm requires alpha in (0, 1), got " << alpha;
    throw DomainError(msg.str());
  }
  const double eps = 8 * alpha * std::pow(1 - alpha, 3);
  const double disc = 1 - eps;
  if (disc < 0) throw DomainError("b_pm: negative discriminant 1 - 8a(1-a)^3");
  const double root = std::sqrt(disc);
  // (1 - sqrt(1 - eps)) / (4a(1-a)^2) rewritten without cancellation.
  const double minus = 2 * (1 - alpha) / (1 + root);
  const double plus = (1 + root) / (4 * alpha * (1 - alpha) * (1 - alpha));
  return {minus, plus};
}

double star_v_gap(double s, double alpha) {
  const double m = 2 * alpha * (1 - alpha);
  if (!(s > 0) || !(m + s > 0)) {
    std::ostringstream msg;
    msg << "star_v_gap: log argument non-positive at s=" << s << ", alpha=" << alpha;
    throw DomainError(msg.str());
  }
  const double a = alpha;
  const double om = 1 - a;
  const double c1 = 2 * a - 5 * a * a + 4 * a * a * a - 4 * a * a * std::pow(om, 4);
  const double c0 = 1 - 2 * a - 4 * a * om * om * om;
  return c1 / s - om * om * s + c0 + std::log(m + s);
}

double star_v_gap_factor(double s, double alpha) {
  if (!(s > 0) || !(2 * alpha * (1 - alpha) + s > 0)) {
    throw DomainError("star_v_gap_factor: requires s > 0 and 2a(1-a) + s > 0");
  }
  const double a = alpha;
  const double om = 1 - a;
  return -om * om * s * s + (2 * a - a * a) * s + 4 * a * a * std::pow(om, 4) +
         2 * a * a * a * om;
}

double star_v_alpha_floor() { return (3 - std::sqrt(5.0)) / 4; }

double star_v_crossover_s(double alpha) {
  const double floor = star_v_alpha_floor();
  if (!(alpha >= floor - 1e-15 && alpha < 1)) {
    std::ostringstream msg;
    msg << "star_v_crossover_s requires alpha in [(3-sqrt5)/4, 1), got " << alpha;
    throw DomainError(msg.str());
  }
  const double s_low = 1 - 2 * alpha * (1 - alpha);
  if (alpha <= floor) return s_low;

  // star_v_gap rises from its double zero at s_low up to the larger zero of
  // the factor quadratic, then decreases to -inf.
  const double om2 = (1 - alpha) * (1 - alpha);
  const double lin = 2 * alpha - alpha * alpha;
  const double c0 = 4 * alpha * alpha * om2 * om2 + 2 * alpha * alpha * alpha * (1 - alpha);
  const double s_peak = (lin + std::sqrt(lin * lin + 4 * om2 * c0)) / (2 * om2);
  const double lo = std::max(s_low, s_peak);
  auto gap = [alpha](double s) { return star_v_gap(s, alpha); };
  if (gap(lo) <= 0) return lo;
  double hi = 2 * lo + 1;
  for (int i = 0; gap(hi) >= 0; ++i) {
    if (i > 200) throw NumericalError("star_v_crossover_s: no sign change found");
    hi *= 2;
  }
  RootOptions opts;
  opts.residual_tol = 1e-10;
  return find_root(gap, lo, hi, opts);
}

double v_existence_s(double alpha) {
  const double bm = b_pm(alpha).minus;
  return 1 / (bm * bm);
}

double crossover_alpha() {
  static const double value = [] {
    RootOptions opts;
    opts.residual_tol = 1e-8;
    return find_root(
        [](double a) { return star_v_crossover_s(a) - v_existence_s(a); },
        star_v_alpha_floor(), 1 - kInvSqrt2, opts);
  }();
  return value;
}

double star_v_plateau_end_b() {
  static const double value = 1 / std::sqrt(star_v_crossover_s(crossover_alpha()));
  return value;
}

double tangency_crossing_b() {
  static const double value = [] {
    RootOptions opts;
    opts.residual_tol = 1e-12;
    return find_root([](double b) { return z_minus(b) - b; }, 1.0, 1.2, opts);
  }();
  return value;
}

double star_zero_crossing_b() {
  static const double value = [] {
    RootOptions opts;
    opts.residual_tol = 1e-10;
    return find_root([](double b) { return curve_gamma3(b) - b; }, 1.0, tangency_crossing_b(),
                     opts);
  }();
  return value;
}

double star_zero_gap(double alpha, double b) {
  if (!(alpha > -1e-15 && alpha < 1)) {
    std::ostringstream msg;
    msg << "star_zero_gap requires alpha in (0, 1), got " << alpha;
    throw DomainError(msg.str());
  }
  const double b2 = b * b;
  const double a = alpha;
  return b2 * (2 * a - 5 * a * a + 4 * a * a * a) - 2 * a - 2 * std::log1p(-a) -
         std::log1p(2 * a * (1 - a) * b2);
}

double curve_gamma1(double b) {
  require_range(b, 1.0, kSqrt2, "curve_gamma1");
  const double r = std::sqrt(std::max(0.0, 2 - b * b));
  return (b * b - b * r) / 2;
}

double alpha1_gamma2(double b) {
  require_range(b, 1.0, kSqrt2, "curve_gamma2");
  const double r = std::sqrt(std::max(0.0, 2 - b * b));
  if (b >= upper_split_b()) return (b - r) / (2 * b);

  const double s = 1 / (b * b);
  const double a0 = crossover_alpha();
  const double s_a0 = star_v_crossover_s(a0);
  if (s >= s_a0) {
    // v_existence_s is increasing on [alpha0, 1) and diverges at 1.
    double hi = a0;
    for (int k = 1; v_existence_s(hi) < s; ++k) {
      if (k > 60) throw NumericalError("alpha1_gamma2: cannot bracket v_existence_s");
      hi = 1 - (1 - a0) * std::pow(0.5, k);
    }
    if (hi == a0) return a0;
    return invert_increasing(v_existence_s, s, a0, hi, 1e-10);
  }
  const double floor = star_v_alpha_floor();
  if (s <= star_v_crossover_s(floor)) return floor;
  // The crossover zero is a near-triple root of star_v_gap close to the floor,
  // so star_v_crossover_s itself only carries about 1e-8 absolute accuracy there.
  return invert_increasing(star_v_crossover_s, s, floor, a0, 1e-7);
}

double curve_gamma2(double b) {
  const double r = std::sqrt(std::max(0.0, 2 - b * b));
  if (b >= upper_split_b() - 1e-15 && b <= kSqrt2 + 1e-12) return (b * b + b * r) / 2;
  return cubic_level(alpha1_gamma2(b), b);
}

double alpha1_gamma3(double b) {
  require_range(b, kInvSqrt2, kSqrt2, "curve_gamma3");
  if (b <= kInvSqrt2) return 0.0;
  const double lo = std::max(0.0, alpha_pm(b).minus);
  const double hi = std::max(lo, 1 - 1 / (b * kSqrt2));
  if (star_zero_gap(lo, b) >= 0) return lo;
  RootOptions opts;
  opts.residual_tol = 1e-12;
  return find_root([b](double a) { return star_zero_gap(a, b); }, lo, hi, opts);
}

double curve_gamma3(double b) { return cubic_level(alpha1_gamma3(b), b); }

Region classify_by_argmax(const PhasePoint& pt, double tol) {
  const SaddleSet set = saddle_values(pt);
  struct Candidate {
    Region region;
    double value;
  };
  std::vector<Candidate> c;
  if (set.star) c.push_back({Region::Omega1, set.star->value});
  if (set.vsaddle) c.push_back({Region::Omega2, set.vsaddle->value});
  c.push_back({Region::Omega3, set.zero.value});
  std::sort(c.begin(), c.end(), [](const Candidate& a, const Candidate& b) {
    return a.value > b.value;
  });
  if (c.size() > 1 && c[0].value - c[1].value < tol) return Region::Boundary;
  return c[0].region;
}

Region classify_by_curves(const PhasePoint& pt) {
  const double b = pt.b();
  const double z = pt.z0sq();
  if (b <= kInvSqrt2) return z <= 1 ? Region::Omega1 : Region::Omega3;
  if (b <= 1) {
    if (z <= 1) return Region::Omega1;
    return z <= curve_gamma3(b) ? Region::Omega1 : Region::Omega3;
  }
  if (b <= kSqrt2) {
    if (z < curve_gamma1(b)) return Region::Omega2;
    if (z <= b) return z <= curve_gamma2(b) ? Region::Omega1 : Region::Omega2;
    return z <= curve_gamma3(b) ? Region::Omega1 : Region::Omega3;
  }
  return z <= b ? Region::Omega2 : Region::Omega3;
}

// ---------------------------------------------------------------------------

double GridRange::at(int i) const {
  if (count <= 1) return min;
  if (i == count - 1) return max;
  return min + (max - min) * static_cast<double>(i) / (count - 1);
}

namespace {

GridRange curve_b_range(CurveId id, int count) {
  switch (id) {
    case CurveId::gamma1:
    case CurveId::gamma2: return {1.0, kSqrt2, count};
    case CurveId::gamma3: return {kInvSqrt2, star_zero_crossing_b(), count};
    case CurveId::z_minus: return {kInvSqrt2, kSqrt2, count};
  }
  return {0, 0, 0};
}

double curve_value(CurveId id, double b) {
  switch (id) {
    case CurveId::gamma1: return curve_gamma1(b);
    case CurveId::gamma2: return curve_gamma2(b);
    case CurveId::gamma3: return curve_gamma3(b);
    case CurveId::z_minus: return z_minus(b);
  }
  return 0;
}

}  // namespace

double curve_residual(CurveId id, double b, double z) {
  switch (id) {
    case CurveId::gamma1: {
      // Star saddle at the upper alpha edge has t*^2 = 0.
      const double r = std::sqrt(std::max(0.0, 2 - b * b));
      const double a = (b + r) / (2 * b);
      const double level = std::abs(cubic_level(a, b) - z);
      const double t_sq = a < 1 ? std::abs(a * z / (1 - a) - a * b * b) : 0.0;
      return std::max(level, t_sq);
    }
    case CurveId::gamma2: {
      const double a = alpha1_gamma2(b);
      double r = std::abs(cubic_level(a, b) - z);
      if (b < upper_split_b()) {
        const double s = 1 / (b * b);
        const double a0 = crossover_alpha();
        if (a < a0) {
          r = std::max(r, std::abs(star_v_gap(s, a)));
        } else {
          r = std::max(r, std::abs(b_pm(a).minus - b));
        }
      }
      return r;
    }
    case CurveId::gamma3: {
      const double a = alpha1_gamma3(b);
      double r = std::abs(cubic_level(a, b) - z);
      if (b > kInvSqrt2) {
        const double am = alpha_pm(b).minus;
        if (a > am) {
          r = std::max(r, std::abs(star_zero_gap(a, b)));
        } else {
          r = std::max(r, std::abs(alpha_cubic_derivative(a, b)));
        }
      }
      return r;
    }
    case CurveId::z_minus: {
      const double a = alpha_pm(b).minus;
      return std::abs(cubic_level(a, b) - z);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

CurveTable sample_curve(CurveId id, int count) {
  if (count < 2) throw DomainError("sample_curve requires at least 2 samples");
  CurveTable table{id, {}, 1e-8};
  const GridRange range = curve_b_range(id, count);
  table.samples.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double b = range.at(i);
    const double z = curve_value(id, b);
    table.samples.push_back({b, z, curve_residual(id, b, z)});
  }
  return table;
}

namespace {

void put(std::ostream& out, double v) { out << std::setprecision(17) << v; }

std::string grid_row(double b, double z) {
  std::ostringstream row;
  const PhasePoint pt(b, z);
  const SaddleSet set = saddle_values(pt);
  const Region region = classify_by_argmax(pt);
  put(row, b);
  row << ',';
  put(row, z);
  row << ',' << static_cast<int>(region) << ',';
  if (set.star) put(row, set.star->value);
  row << ',';
  if (set.vsaddle) put(row, set.vsaddle->value);
  row << ',';
  put(row, set.zero.value);
  row << '\n';
  return row.str();
}

}  // namespace

void write_region_grid(std::ostream& out, const GridRange& b_range, const GridRange& z_range,
                       unsigned workers) {
  if (b_range.count < 2 || z_range.count < 2) {
    throw DomainError("grid resolution must be at least 2 in each direction");
  }
  std::vector<std::string> rows(static_cast<std::size_t>(b_range.count));
  parallel_for_index(rows.size(), workers, [&](std::size_t i) {
    std::string text;
    const double b = b_range.at(static_cast<int>(i));
    for (int j = 0; j < z_range.count; ++j) text += grid_row(b, z_range.at(j));
    rows[i] = std::move(text);
  });
  out << "b,z0sq,region,F_I,F_II,F_III\n";
  for (const auto& r : rows) out << r;
}

void write_curves(std::ostream& out, const std::vector<CurveTable>& curves) {
  out << "curve,b,z0sq,residual\n";
  for (const auto& c : curves) {
    for (const auto& s : c.samples) {
      out << to_string(c.curve_id) << ',';
      put(out, s.b);
      out << ',';
      put(out, s.z0sq);
      out << ',';
      put(out, s.residual);
      out << '\n';
    }
  }
}

std::vector<CurveTable> read_curves(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "curve,b,z0sq,residual") {
    throw NumericalError("curve CSV: unexpected header '" + line + "'");
  }
  std::vector<CurveTable> tables;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string name, b, z, r;
    if (!std::getline(row, name, ',') || !std::getline(row, b, ',') ||
        !std::getline(row, z, ',') || !std::getline(row, r)) {
      throw NumericalError("curve CSV: malformed line " + std::to_string(line_no));
    }
    CurveId id;
    if (name == "gamma1") id = CurveId::gamma1;
    else if (name == "gamma2") id = CurveId::gamma2;
    else if (name == "gamma3") id = CurveId::gamma3;
    else if (name == "z_minus") id = CurveId::z_minus;
    else throw NumericalError("curve CSV: unknown curve '" + name + "'");
    if (tables.empty() || tables.back().curve_id != id) tables.push_back({id, {}, 1e-8});
    tables.back().samples.push_back({std::stod(b), std::stod(z), std::stod(r)});
  }
  return tables;
}

ExportResult export_grid(const GridRange& b_range, const GridRange& z_range,
                         const std::filesystem::path& out_dir, int curve_samples,
                         unsigned workers) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " +
                             ec.message());
  }
  ExportResult result;
  result.grid_csv = out_dir / "regions.csv";
  result.curves_csv = out_dir / "curves.csv";

  {
    std::ofstream out(result.grid_csv, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + result.grid_csv.string() + " for writing");
    write_region_grid(out, b_range, z_range, workers);
    if (!out) throw std::runtime_error("write failed: " + result.grid_csv.string());
  }
  result.grid_rows =
      static_cast<std::size_t>(b_range.count) * static_cast<std::size_t>(z_range.count);

  for (CurveId id : {CurveId::gamma1, CurveId::gamma2, CurveId::gamma3, CurveId::z_minus}) {
    result.curves.push_back(sample_curve(id, curve_samples));
  }
  {
    std::ofstream out(result.curves_csv, std::ios::binary);
    if (!out) {
      throw std::runtime_error("cannot open " + result.curves_csv.string() + " for writing");
    }
    write_curves(out, result.curves);
    if (!out) throw std::runtime_error("write failed: " + result.curves_csv.string());
  }
  return result;
}

}  // namespace sparsecp
