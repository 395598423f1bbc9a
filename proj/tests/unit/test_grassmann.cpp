#include <gtest/gtest.h>

#include <bit>
#include <complex>
#include <random>

#include "oracles.hpp"
#include "sparsecp/errors.hpp"
#include "sparsecp/grassmann.hpp"
#include "sparsecp/susy_oracle.hpp"

using namespace sparsecp;
using G = GrassmannElement;
using cplx = std::complex<double>;

namespace {

G gen(int k, int i) { return G::generator(k, i); }

G random_element(std::mt19937_64& rng, int k, bool even_only) {
  std::normal_distribution<double> g(0, 1);
  G out(k);
  for (std::uint32_t m = 1; m < (1u << k); ++m) {
    if (even_only && (std::popcount(m) % 2)) continue;
    out.add_term(m, {g(rng), g(rng)});
  }
  return out;
}

void expect_equal(const G& a, const G& b, double tol = 1e-12) {
  G d = a - b;
  for (const auto& [m, c] : d.coeffs()) EXPECT_LT(std::abs(c), tol) << "monomial " << m;
}

}  // namespace

TEST(Grassmann, Anticommutation) {
  const int k = 4;
  expect_equal(gen(k, 0) * gen(k, 1), cplx(-1) * (gen(k, 1) * gen(k, 0)));
  EXPECT_TRUE((gen(k, 0) * gen(k, 0)).is_zero());
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      expect_equal(gen(k, i) * gen(k, j), cplx(-1) * (gen(k, j) * gen(k, i)));
    }
}

TEST(Grassmann, ProductExpansion) {
  const int k = 4;
  const G one = G::scalar(k, 1);
  const G a = one + gen(k, 0) * gen(k, 1);
  const G b = one + gen(k, 2) * gen(k, 3);
  const G expected = one + gen(k, 0) * gen(k, 1) + gen(k, 2) * gen(k, 3) +
                     gen(k, 0) * gen(k, 1) * gen(k, 2) * gen(k, 3);
  expect_equal(a * b, expected, 0);
}

TEST(Grassmann, Associativity) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 20; ++i) {
    const G a = random_element(rng, 6, false), b = random_element(rng, 6, false),
            c = random_element(rng, 6, false);
    expect_equal((a * b) * c, a * (b * c), 1e-10);
  }
}

TEST(Grassmann, MismatchedAlgebrasThrow) {
  EXPECT_THROW(multiply(G(3), G(4)), DomainError);
  EXPECT_THROW(G(17), DomainError);
}

TEST(Grassmann, PruneSmallCoefficients) {
  G a(2);
  a.add_term(1, 1e-16);
  EXPECT_TRUE(a.is_zero());
}

TEST(ExpSeries, Examples) {
  const int k = 4;
  expect_equal(exp_series(G(k)), G::scalar(k, 1), 0);
  const G a = cplx(2.5, -1) * (gen(k, 0) * gen(k, 1));
  expect_equal(exp_series(a), G::scalar(k, 1) + a, 0);
  EXPECT_THROW(exp_series(G::scalar(k, 1)), DomainError);
}

TEST(ExpSeries, InverseOfEvenElement) {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 20; ++i) {
    const G a = random_element(rng, 6, true);
    expect_equal(exp_series(a) * exp_series(cplx(-1) * a), G::scalar(6, 1), 1e-9);
  }
}

TEST(Berezin, Conventions) {
  EXPECT_EQ(berezin_integrate(gen(1, 0), {0}).scalar_part(), cplx(1));
  EXPECT_TRUE(berezin_integrate(G::scalar(1, 1), {0}).is_zero());
  EXPECT_THROW(berezin_integrate(gen(2, 0), {0, 0}), DomainError);
}

TEST(Berezin, TopCoefficient) {
  // int f dpsi_k ... dpsi_1 picks the coefficient of psi_1 psi_2 ... psi_k.
  std::mt19937_64 rng(43);
  for (int k = 1; k <= 6; ++k) {
    const G f = random_element(rng, k, false) + G::scalar(k, 3);
    std::vector<int> order;
    for (int i = k - 1; i >= 0; --i) order.push_back(i);
    const cplx top = f.coefficient((1u << k) - 1);
    EXPECT_EQ(berezin_integrate(f, order).scalar_part(), top);
  }
}

TEST(Berezin, Linearity) {
  std::mt19937_64 rng(44);
  const std::vector<int> order{3, 1, 0, 2};
  for (int i = 0; i < 20; ++i) {
    const G f = random_element(rng, 4, false), g = random_element(rng, 4, false);
    const cplx a(0.5, 2), b(-1, 0.25);
    const cplx lhs = berezin_integrate(a * f + b * g, order).scalar_part();
    const cplx rhs = a * berezin_integrate(f, order).scalar_part() +
                     b * berezin_integrate(g, order).scalar_part();
    EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-14);
  }
}

TEST(GaussianIntegral, Examples) {
  const auto id = verify_gaussian_grassmann(Eigen::MatrixXcd::Identity(2, 2));
  EXPECT_LE(id.residual, 1e-12);
  EXPECT_NEAR(std::abs(id.engine - cplx(1)), 0.0, 1e-15);
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
  d(0, 0) = 2;
  d(1, 1) = cplx(0, 3);
  EXPECT_NEAR(std::abs(verify_gaussian_grassmann(d).engine - cplx(0, 6)), 0.0, 1e-14);
}

TEST(GaussianIntegral, RandomMatricesAgainstCofactorDeterminant) {
  std::mt19937_64 rng(45);
  for (int d = 1; d <= 4; ++d) {
    for (int i = 0; i < 100; ++i) {
      const Eigen::MatrixXcd B = oracle::random_complex(rng, d, d);
      const auto r = verify_gaussian_grassmann(B);
      EXPECT_LE(std::abs(r.engine - oracle::cofactor_det(B)), 1e-10) << "d=" << d;
      EXPECT_LE(r.residual, 1e-10);
    }
  }
}

TEST(JkIdentity, Examples) {
  const cplx z1(0.3, -0.4), z2(1.1, 0.2);
  const auto zero = verify_jk(Eigen::Matrix2cd::Zero(), 0, z1, z2, 0.8);
  EXPECT_NEAR(std::abs(zero.engine - std::norm(z1 * z2)), 0.0, 1e-14);
  const auto ident = verify_jk(Eigen::Matrix2cd::Identity(), 0, 0, 0, 0.8);
  EXPECT_NEAR(std::abs(ident.engine - cplx(1)), 0.0, 1e-14);
}

TEST(JkIdentity, RandomDraws) {
  std::mt19937_64 rng(46);
  std::uniform_real_distribution<double> ub(0, 2);
  for (int i = 0; i < 300; ++i) {
    const Eigen::Matrix2cd Q = oracle::random_complex(rng, 2, 2);
    const cplx v = (i % 7 == 0) ? cplx{} : oracle::random_cplx(rng);
    const double b = (i % 5 == 0) ? 0.0 : ub(rng);
    const auto r = verify_jk(Q, v, oracle::random_cplx(rng), oracle::random_cplx(rng), b);
    EXPECT_LE(r.residual, 1e-10);
  }
}

TEST(JkIdentity, ClosedFormIsHFunction) {
  std::mt19937_64 rng(47);
  for (int i = 0; i < 20; ++i) {
    const Eigen::Matrix2cd Q = oracle::random_complex(rng, 2, 2);
    const cplx v = oracle::random_cplx(rng), z1 = oracle::random_cplx(rng),
               z2 = oracle::random_cplx(rng);
    EXPECT_EQ(verify_jk(Q, v, z1, z2, 0.7).expected, h_function(Q, v, z1, z2, 0.7));
  }
}
