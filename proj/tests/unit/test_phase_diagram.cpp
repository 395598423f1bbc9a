#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "sparsecp/errors.hpp"
#include "sparsecp/phase_diagram.hpp"

using namespace sparsecp;

namespace {

const double kSqrt2 = std::numbers::sqrt2;
const double kInvSqrt2 = 1 / std::numbers::sqrt2;
const double kFloor = (3 - std::sqrt(5.0)) / 4;

double level(double a, double b) { return 2 * a * (1 - a) * (1 - a) * b * b + 1 - a; }

}  // namespace

TEST(ZMinus, Values) {
  EXPECT_NEAR(z_minus(kInvSqrt2), 1.0, 1e-15);
  const double big = 1e4;
  EXPECT_NEAR(z_minus(big) / (8 * big * big / 27), 1.0, 1e-3);
  EXPECT_THROW(z_minus(0.0), DomainError);
}

TEST(ZMinus, IsTangencyLevel) {
  for (double b : {0.75, 1.0, 1.2, 1.4}) {
    const double am = alpha_pm(b).minus;
    EXPECT_NEAR(level(am, b), z_minus(b), 1e-13);
    EXPECT_NEAR((6 * am * am - 8 * am + 2) * b * b - 1, 0.0, 1e-13);
  }
}

TEST(AlphaPm, Values) {
  const auto a = alpha_pm(kInvSqrt2);
  EXPECT_NEAR(a.minus, 0.0, 1e-15);
  EXPECT_NEAR(a.plus, 4.0 / 3, 1e-15);
  EXPECT_NEAR(alpha_pm(kSqrt2).minus, (2 - std::sqrt(7.0 / 4)) / 3, 1e-15);
  for (double b : {0.01, 0.5, 1.0, 10.0}) EXPECT_GT(alpha_pm(b).plus, 1.0);
  EXPECT_THROW(alpha_pm(-1.0), DomainError);
}

TEST(BPm, Values) {
  const auto h = b_pm(0.5);
  EXPECT_NEAR(h.minus, 2 - kSqrt2, 1e-15);
  EXPECT_THROW(b_pm(0.0), DomainError);
  EXPECT_THROW(b_pm(1.0), DomainError);
}

TEST(BPm, Properties) {
  for (int i = 1; i < 100; ++i) {
    const double a = i / 100.0;
    if (1 - 8 * a * std::pow(1 - a, 3) < 0) continue;
    const auto r = b_pm(a);
    EXPECT_GT(r.plus, kSqrt2);
    EXPECT_LE(r.minus * r.minus, 1 / (1 - 2 * a * (1 - a)) + 1e-12);
    EXPECT_NEAR(level(a, r.minus), r.minus, 1e-12);
    EXPECT_NEAR(level(a, r.plus), r.plus, 1e-10 * r.plus);
  }
}

TEST(StarVGap, DoubleZero) {
  const double a = 0.3;
  const double s = 1 - 2 * a * (1 - a);
  EXPECT_NEAR(star_v_gap(s, a), 0.0, 1e-14);
  EXPECT_NEAR(oracle::derivative([a](double x) { return star_v_gap(x, a); }, s, 1e-5), 0.0, 1e-9);
}

TEST(StarVGap, FactorSignFlip) {
  auto at = [](double a) { return star_v_gap_factor(1 - 2 * a * (1 - a), a); };
  EXPECT_LT(at(kFloor - 1e-3), 0.0);
  EXPECT_GT(at(kFloor + 1e-3), 0.0);
  EXPECT_NEAR(at(kFloor), 0.0, 1e-14);
}

TEST(StarVGap, FactorGivesDerivativeSign) {
  for (double a : {0.2, 0.3, 0.5}) {
    for (double s : {0.8, 1.2, 2.0, 5.0}) {
      if (s <= 1 - 2 * a * (1 - a)) continue;
      const double d = oracle::derivative([a](double x) { return star_v_gap(x, a); }, s);
      EXPECT_EQ(d > 0, star_v_gap_factor(s, a) > 0) << a << " " << s;
    }
  }
}

TEST(StarVGap, LogDomain) { EXPECT_THROW(star_v_gap(-1.0, 0.3), DomainError); }

TEST(StarVGap, MatchesSaddleValueDifference) {
  for (double a : {0.2, 0.3, 0.45}) {
    for (double b : {1.05, 1.2, 1.35}) {
      const double z = level(a, b);
      EXPECT_NEAR(star_v_gap(1 / (b * b), a), value_star(a, b, z) - value_v(b, z), 1e-12);
    }
  }
}

TEST(Crossover, FloorValue) {
  EXPECT_NEAR(star_v_crossover_s(kFloor), (5 - std::sqrt(5.0)) / 4, 1e-12);
}

TEST(Crossover, RootOfGap) {
  for (double a : {0.2, 0.25, 0.4, 0.7}) {
    const double s = star_v_crossover_s(a);
    EXPECT_GT(s, 1 - 2 * a * (1 - a));
    EXPECT_LE(std::abs(star_v_gap(s, a)), 1e-10);
  }
  EXPECT_THROW(star_v_crossover_s(0.1), DomainError);
}

TEST(Crossover, IncreasingUpToAlpha0) {
  const double a0 = crossover_alpha();
  double prev = star_v_crossover_s(kFloor);
  for (int i = 1; i <= 100; ++i) {
    const double a = kFloor + (a0 - kFloor) * i / 100.0;
    const double s = star_v_crossover_s(a);
    EXPECT_GT(s, prev);
    prev = s;
  }
  const double h = 1e-6;
  EXPECT_GT(star_v_crossover_s(kFloor + 2 * h) - star_v_crossover_s(kFloor + h), 0.0);
}

TEST(Crossover, Alpha0Definition) {
  const double a0 = crossover_alpha();
  EXPECT_GT(a0, kFloor);
  EXPECT_LT(a0, 1 - kInvSqrt2);
  EXPECT_NEAR(star_v_crossover_s(a0), v_existence_s(a0), 1e-8);
  EXPECT_LT(star_v_crossover_s(kFloor), v_existence_s(kFloor));
  EXPECT_GT(star_v_crossover_s(1 - kInvSqrt2), v_existence_s(1 - kInvSqrt2));
}

TEST(Crossover, ConstantsAgreeWithDirectEquations) {
  const double b0 = tangency_crossing_b();
  EXPECT_NEAR(z_minus(b0), b0, 1e-12);
  const double b1 = star_zero_crossing_b();
  EXPECT_NEAR(curve_gamma3(b1), b1, 1e-9);
  EXPECT_LT(b1, b0);
  EXPECT_NEAR(star_v_plateau_end_b(), 1 / std::sqrt(star_v_crossover_s(crossover_alpha())), 0);
}

TEST(Gamma1, Values) {
  EXPECT_NEAR(curve_gamma1(1.0), 0.0, 1e-15);
  EXPECT_NEAR(curve_gamma1(kSqrt2), 1.0, 1e-15);
  EXPECT_NEAR(curve_gamma1(1.2), (1.44 - 1.2 * std::sqrt(0.56)) / 2, 1e-15);
  EXPECT_THROW(curve_gamma1(0.9), DomainError);
  EXPECT_THROW(curve_gamma1(1.5), DomainError);
}

TEST(Gamma1, StarEdge) {
  // Just above gamma1 the star exists with small t*^2; just below it does not.
  for (double b : {1.1, 1.2, 1.3}) {
    const double z = curve_gamma1(b);
    const auto above = star_saddle(PhasePoint(b, z + 1e-6));
    ASSERT_TRUE(above);
    EXPECT_LT(above->t_star_sq, 1e-4);
    EXPECT_FALSE(star_saddle(PhasePoint(b, z - 1e-6)));
  }
}

TEST(Gamma2, PlateauEqualsB) {
  const double end = star_v_plateau_end_b();
  for (int i = 0; i <= 20; ++i) {
    const double b = 1 + (end - 1) * i / 20.0;
    EXPECT_NEAR(curve_gamma2(b), b, 1e-9) << b;
  }
}

TEST(Gamma2, UpperBranchContinuity) {
  const double split = std::sqrt((5 + std::sqrt(5.0)) / 5);
  const double upper = (split * split + split * std::sqrt(2 - split * split)) / 2;
  const double a = alpha1_gamma2(split - 1e-12);
  EXPECT_NEAR(level(a, split), upper, 1e-8);
  EXPECT_NEAR(curve_gamma2(split), upper, 1e-12);
  EXPECT_NEAR(curve_gamma2(kSqrt2), 1.0, 1e-12);
  for (double b : {1.25, 1.3, 1.4}) {
    EXPECT_NEAR(curve_gamma2(b), (b * b + b * std::sqrt(2 - b * b)) / 2, 1e-12);
  }
}

TEST(Gamma2, IsStarVCrossing) {
  for (double b : {1.13, 1.15, 1.18}) {
    const double z = curve_gamma2(b);
    const auto v = saddle_values(PhasePoint(b, z));
    ASSERT_TRUE(v.star && v.vsaddle);
    EXPECT_NEAR(v.star->value, v.vsaddle->value, 1e-9) << b;
  }
}

TEST(Gamma3, WNonNegativeAtUpperEnd) {
  for (double b : {0.8, 1.0, 1.1}) {
    EXPECT_GE(star_zero_gap(1 - 1 / (b * kSqrt2), b), 0.0);
  }
}

TEST(Gamma3, WIncreasing) {
  const double b = 1.0;
  const double lo = alpha_pm(b).minus, hi = 1 - 1 / (b * kSqrt2);
  for (int i = 0; i <= 50; ++i) {
    const double a = lo + (hi - lo) * i / 50.0;
    EXPECT_GE(oracle::derivative([b](double x) { return star_zero_gap(x, b); }, a), -1e-9);
  }
}

TEST(Gamma3, WIsStarZeroGap) {
  for (double a : {0.1, 0.2, 0.3}) {
    for (double b : {0.8, 1.0}) {
      const double z = level(a, b);
      EXPECT_NEAR(star_zero_gap(a, b), value_star(a, b, z) - value_zero(z), 1e-12);
    }
  }
}

TEST(Gamma3, CrossesBNear111) {
  const double b1 = star_zero_crossing_b();
  EXPECT_GT(curve_gamma3(b1 - 0.005), b1 - 0.005);
  EXPECT_LT(curve_gamma3(std::min(kSqrt2, b1 + 0.005)), b1 + 0.005);
  EXPECT_NEAR(curve_gamma3(kInvSqrt2), 1.0, 1e-12);
  EXPECT_THROW(curve_gamma3(0.5), DomainError);
}

TEST(ClassifyByArgmax, Examples) {
  EXPECT_EQ(classify_by_argmax(PhasePoint(0.3, 0.5)), Region::Omega1);
  EXPECT_EQ(classify_by_argmax(PhasePoint(0.3, 1.5)), Region::Omega3);
  EXPECT_EQ(classify_by_argmax(PhasePoint(1.4, 0.2)), Region::Omega2);
  EXPECT_EQ(classify_by_argmax(PhasePoint(0.81, 0.81)), Region::Omega1);
  EXPECT_EQ(classify_by_argmax(PhasePoint(0.9, curve_gamma3(0.9)), 1e-9), Region::Boundary);
}

TEST(ClassifyByCurves, Examples) {
  EXPECT_EQ(classify_by_curves(PhasePoint(0.5, 0.9)), Region::Omega1);
  EXPECT_EQ(classify_by_curves(PhasePoint(1.3, 0.3)), Region::Omega2);
  EXPECT_EQ(classify_by_curves(PhasePoint(0.8, 1.6)), Region::Omega3);
}

TEST(Classify, AgreementOnGrid) {
  const int n = 200;
  const double db = 1.45 / n, dz = 2.0 / n;
  int compared = 0, agree = 0, outside_tube = 0;
  for (int i = 1; i <= n; ++i) {
    for (int k = 1; k <= n; ++k) {
      const PhasePoint pt(i * db, k * dz);
      const Region a = classify_by_argmax(pt);
      const Region c = classify_by_curves(pt);
      if (a == Region::Boundary) continue;
      ++compared;
      if (a == c) {
        ++agree;
        continue;
      }
      // Disagreement must sit within two grid steps of a region change.
      bool near = false;
      for (int di = -2; di <= 2 && !near; ++di)
        for (int dk = -2; dk <= 2 && !near; ++dk) {
          const double b = (i + di) * db, z = (k + dk) * dz;
          if (b <= 0 || z <= 0) continue;
          near = classify_by_argmax(PhasePoint(b, z)) != a;
        }
      if (!near) ++outside_tube;
    }
  }
  EXPECT_GE(static_cast<double>(agree) / compared, 0.995);
  EXPECT_EQ(outside_tube, 0);
}

TEST(Classify, RegionsRespectExistence) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ub(0.01, 1.45), uz(0.01, 2.0);
  for (int i = 0; i < 5000; ++i) {
    const PhasePoint pt(ub(rng), uz(rng));
    for (Region r : {classify_by_argmax(pt), classify_by_curves(pt)}) {
      if (r == Region::Omega1) EXPECT_TRUE(star_saddle(pt)) << pt.b() << " " << pt.z0sq();
      if (r == Region::Omega2) EXPECT_LE(pt.z0sq(), pt.b());
    }
  }
}

TEST(Classify, VDominatesZeroBelowDiagonal) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> ub(0.05, 2.0), frac(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double b = ub(rng);
    const double z = std::max(1e-6, frac(rng) * b);
    const auto v = saddle_values(PhasePoint(b, z));
    ASSERT_TRUE(v.vsaddle);
    EXPECT_GE(v.vsaddle->value - v.zero.value, -1e-15);
  }
  const auto eq = saddle_values(PhasePoint(1.2, 1.2));
  EXPECT_NEAR(eq.vsaddle->value, eq.zero.value, 1e-15);
  const auto lt = saddle_values(PhasePoint(1.2, 1.1));
  EXPECT_GT(lt.vsaddle->value, lt.zero.value);
}

TEST(Curves, SamplesSatisfyDefinitions) {
  for (CurveId id : {CurveId::gamma1, CurveId::gamma2, CurveId::gamma3, CurveId::z_minus}) {
    const auto t = sample_curve(id, 100);
    ASSERT_EQ(t.samples.size(), 100u);
    for (std::size_t i = 0; i < t.samples.size(); ++i) {
      if (i) EXPECT_GT(t.samples[i].b, t.samples[i - 1].b);
      EXPECT_LE(t.samples[i].residual, t.tolerance) << to_string(id) << " " << t.samples[i].b;
    }
  }
  const auto g1 = sample_curve(CurveId::gamma1, 10);
  EXPECT_DOUBLE_EQ(g1.samples.front().b, 1.0);
  EXPECT_DOUBLE_EQ(g1.samples.back().b, kSqrt2);
}

TEST(Export, GridAndCurvesRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "sparsecp_export_test";
  std::filesystem::remove_all(dir);
  const auto res = export_grid({0.0, 1.5, 100}, {0.0, 2.0, 100}, dir, 50, 2);
  EXPECT_EQ(res.grid_rows, 10000u);

  std::ifstream grid(res.grid_csv);
  std::string line;
  std::getline(grid, line);
  EXPECT_EQ(line, "b,z0sq,region,F_I,F_II,F_III");
  std::size_t rows = 0;
  struct Probe {
    double b, z, dist = 1e9;
    std::string region;
  };
  Probe probes[3] = {{0.2, 0.5}, {1.4, 0.1}, {0.2, 1.5}};
  while (std::getline(grid, line)) {
    ++rows;
    EXPECT_EQ(line.find('\r'), std::string::npos);
    std::istringstream in(line);
    std::string f[6];
    for (int i = 0; i < 5; ++i) std::getline(in, f[i], ',');
    std::getline(in, f[5]);
    const double b = std::stod(f[0]), z = std::stod(f[1]);
    for (auto& p : probes) {
      const double d = std::hypot(b - p.b, z - p.z);
      if (d < p.dist) {
        p.dist = d;
        p.region = f[2];
      }
    }
    if (z == 0) EXPECT_EQ(f[5], "-inf");
  }
  EXPECT_EQ(rows, 10000u);
  EXPECT_EQ(probes[0].region, "1");
  EXPECT_EQ(probes[1].region, "2");
  EXPECT_EQ(probes[2].region, "3");

  std::ifstream curves(res.curves_csv);
  const auto tables = read_curves(curves);
  ASSERT_EQ(tables.size(), 4u);
  for (const auto& t : tables) {
    for (const auto& s : t.samples) {
      EXPECT_LE(curve_residual(t.curve_id, s.b, s.z0sq), 1e-8);
    }
  }

  // Byte-identical on re-run, independent of worker count.
  std::ifstream first(res.grid_csv);
  std::stringstream a;
  a << first.rdbuf();
  export_grid({0.0, 1.5, 100}, {0.0, 2.0, 100}, dir, 50, 1);
  std::ifstream second(res.grid_csv);
  std::stringstream b;
  b << second.rdbuf();
  EXPECT_EQ(a.str(), b.str());
  std::filesystem::remove_all(dir);
}

TEST(Export, RejectsCoarseResolution) {
  std::ostringstream out;
  EXPECT_THROW(write_region_grid(out, {0, 1, 1}, {0, 1, 10}), DomainError);
}
