#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>

namespace sparsecp {

/// Element of the Grassmann algebra on generators g_0 .. g_{k-1}, k <= 16.
/// A monomial is the bitmask of its generators, written in increasing index
/// order; coefficients with magnitude below 1e-15 are dropped.
class GrassmannElement {
 public:
  using Coeffs = std::map<std::uint32_t, std::complex<double>>;
  static constexpr int kMaxGenerators = 16;
  static constexpr double kPrune = 1e-15;

  explicit GrassmannElement(int num_generators);

  static GrassmannElement scalar(int num_generators, std::complex<double> c);
  static GrassmannElement generator(int num_generators, int index);

  int num_generators() const { return num_generators_; }
  const Coeffs& coeffs() const { return coeffs_; }
  std::complex<double> coefficient(std::uint32_t mask) const;
  std::complex<double> scalar_part() const { return coefficient(0); }
  bool is_zero() const { return coeffs_.empty(); }

  void add_term(std::uint32_t mask, std::complex<double> c);

  GrassmannElement& operator+=(const GrassmannElement& other);
  GrassmannElement& operator-=(const GrassmannElement& other);
  GrassmannElement& operator*=(std::complex<double> c);

 private:
  void require_compatible(const GrassmannElement& other) const;

  int num_generators_;
  Coeffs coeffs_;
};

GrassmannElement operator+(GrassmannElement a, const GrassmannElement& b);
GrassmannElement operator-(GrassmannElement a, const GrassmannElement& b);
GrassmannElement operator*(std::complex<double> c, GrassmannElement a);
GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b);

/// Sign of the product of monomials `a` then `b` (disjoint masks) once
/// reordered into increasing generator order.
int merge_sign(std::uint32_t a, std::uint32_t b);

GrassmannElement multiply(const GrassmannElement& a, const GrassmannElement& b);

/// sum_k a^k / k!; requires a zero scalar part.
GrassmannElement exp_series(const GrassmannElement& a);

/// Repeated Berezin integral of `a` against d g_{order[0]} d g_{order[1]} ...,
/// written in that order to the right of the integrand. The innermost
/// differential order[0] acts first, with int g dg = 1 and int dg = 0.
GrassmannElement berezin_integrate(const GrassmannElement& a, const std::vector<int>& order);

struct IdentityCheck {
  std::complex<double> engine;    // computed by Berezin integration
  std::complex<double> expected;  // closed form
  double residual = 0.0;
};

/// int exp(-psibar B psi) prod_j dpsibar_j dpsi_j against det B (d <= 8).
IdentityCheck verify_gaussian_grassmann(const Eigen::MatrixXcd& B);

/// The per-row fermionic integral with the quartic sparse-correction term,
/// against det A + b v det Q^* + b conj(v) det Q + b^2 |v|^2.
IdentityCheck verify_jk(const Eigen::Matrix2cd& Q, std::complex<double> v, std::complex<double> z1,
                        std::complex<double> z2, double b);

}  // namespace sparsecp
