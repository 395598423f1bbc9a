#include "sparsecp/grassmann.hpp"

#include <bit>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sparsecp/errors.hpp"
#include "sparsecp/susy_oracle.hpp"

namespace sparsecp {

using cplx = std::complex<double>;

GrassmannElement::GrassmannElement(int num_generators) : num_generators_(num_generators) {
  if (num_generators < 0 || num_generators > kMaxGenerators) {
    std::ostringstream msg;
    msg << "Grassmann algebra supports 0.." << kMaxGenerators << " generators, got "
        << num_generators;
    throw DomainError(msg.str());
  }
}

GrassmannElement GrassmannElement::scalar(int num_generators, cplx c) {
  GrassmannElement e(num_generators);
  e.add_term(0, c);
  return e;
}

GrassmannElement GrassmannElement::generator(int num_generators, int index) {
  GrassmannElement e(num_generators);
  if (index < 0 || index >= num_generators) throw DomainError("generator index out of range");
  e.add_term(1u << index, 1.0);
  return e;
}

cplx GrassmannElement::coefficient(std::uint32_t mask) const {
  auto it = coeffs_.find(mask);
  return it == coeffs_.end() ? cplx{} : it->second;
}

void GrassmannElement::add_term(std::uint32_t mask, cplx c) {
  if (mask >> num_generators_) throw DomainError("monomial uses generators outside the algebra");
  cplx& slot = coeffs_[mask];
  slot += c;
  if (std::abs(slot) < kPrune) coeffs_.erase(mask);
}

void GrassmannElement::require_compatible(const GrassmannElement& other) const {
  if (other.num_generators_ != num_generators_) {
    throw DomainError("Grassmann elements belong to algebras with different generator counts");
  }
}

GrassmannElement& GrassmannElement::operator+=(const GrassmannElement& other) {
  require_compatible(other);
  for (const auto& [m, c] : other.coeffs_) add_term(m, c);
  return *this;
}

GrassmannElement& GrassmannElement::operator-=(const GrassmannElement& other) {
  require_compatible(other);
  for (const auto& [m, c] : other.coeffs_) add_term(m, -c);
  return *this;
}

GrassmannElement& GrassmannElement::operator*=(cplx c) {
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    it->second *= c;
    if (std::abs(it->second) < kPrune) {
      it = coeffs_.erase(it);
    } else {
      ++it;
    }
  }
  return *this;
}

GrassmannElement operator+(GrassmannElement a, const GrassmannElement& b) { return a += b; }
GrassmannElement operator-(GrassmannElement a, const GrassmannElement& b) { return a -= b; }
GrassmannElement operator*(cplx c, GrassmannElement a) { return a *= c; }
GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b) {
  return multiply(a, b);
}

int merge_sign(std::uint32_t a, std::uint32_t b) {
  int swaps = 0;
  while (b) {
    const int j = std::countr_zero(b);
    b &= b - 1;
    swaps += std::popcount(j + 1 < 32 ? a >> (j + 1) : 0u);
  }
  return (swaps & 1) ? -1 : 1;
}

GrassmannElement multiply(const GrassmannElement& a, const GrassmannElement& b) {
  if (a.num_generators() != b.num_generators()) {
    throw DomainError("multiply: generator-count mismatch");
  }
  GrassmannElement out(a.num_generators());
  for (const auto& [ma, ca] : a.coeffs()) {
    for (const auto& [mb, cb] : b.coeffs()) {
      if (ma & mb) continue;
      out.add_term(ma | mb, static_cast<double>(merge_sign(ma, mb)) * ca * cb);
    }
  }
  return out;
}

GrassmannElement exp_series(const GrassmannElement& a) {
  if (a.scalar_part() != cplx{}) {
    throw DomainError("exp_series: split off the scalar part before exponentiating");
  }
  const int k = a.num_generators();
  GrassmannElement sum = GrassmannElement::scalar(k, 1.0);
  GrassmannElement term = sum;
  for (int j = 1; j <= k; ++j) {
    term = (1.0 / j) * multiply(term, a);
    if (term.is_zero()) break;
    sum += term;
  }
  return sum;
}

GrassmannElement berezin_integrate(const GrassmannElement& a, const std::vector<int>& order) {
  std::set<int> seen;
  for (int g : order) {
    if (g < 0 || g >= a.num_generators()) throw DomainError("berezin_integrate: bad generator");
    if (!seen.insert(g).second) {
      throw DomainError("berezin_integrate: generator " + std::to_string(g) + " listed twice");
    }
  }
  GrassmannElement current = a;
  for (int g : order) {
    const std::uint32_t bit = 1u << g;
    GrassmannElement next(a.num_generators());
    for (const auto& [m, c] : current.coeffs()) {
      if (!(m & bit)) continue;
      // Move g to the right end of the monomial, next to its differential.
      const int after = std::popcount(m >> (g + 1));
      next.add_term(m & ~bit, (after & 1) ? -c : c);
    }
    current = std::move(next);
  }
  return current;
}

namespace {

// -psibar M psi with psi_j = g_j and psibar_j = g_{d+j}.
GrassmannElement bilinear(const Eigen::MatrixXcd& M) {
  const int d = static_cast<int>(M.rows());
  GrassmannElement out(2 * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (M(i, j) == cplx{}) continue;
      const std::uint32_t bar = 1u << (d + i);
      const std::uint32_t plain = 1u << j;
      // psibar_i psi_j in increasing order is psi_j psibar_i with a swap.
      out.add_term(bar | plain, static_cast<double>(merge_sign(bar, plain)) * -M(i, j));
    }
  }
  return out;
}

std::vector<int> paired_measure(int d) {
  std::vector<int> order;
  for (int j = 0; j < d; ++j) {
    order.push_back(d + j);
    order.push_back(j);
  }
  return order;
}

// Monomial g_{i0} g_{i1} ... in the written order.
GrassmannElement word(int k, std::initializer_list<int> gens, cplx c) {
  GrassmannElement out = GrassmannElement::scalar(k, c);
  for (int g : gens) out = multiply(out, GrassmannElement::generator(k, g));
  return out;
}

}  // namespace

IdentityCheck verify_gaussian_grassmann(const Eigen::MatrixXcd& B) {
  const int d = static_cast<int>(B.rows());
  if (B.cols() != d || d < 1 || 2 * d > GrassmannElement::kMaxGenerators) {
    throw DomainError("verify_gaussian_grassmann needs a square matrix with 1 <= d <= 8");
  }
  const GrassmannElement integrand = exp_series(bilinear(B));
  IdentityCheck out;
  out.engine = berezin_integrate(integrand, paired_measure(d)).scalar_part();
  out.expected = B.determinant();
  out.residual = std::abs(out.engine - out.expected);
  return out;
}

IdentityCheck verify_jk(const Eigen::Matrix2cd& Q, cplx v, cplx z1, cplx z2, double b) {
  // Psi = (phi1, phi2, theta1, theta2) on g0..g3, conjugates on g4..g7.
  constexpr int d = 4;
  constexpr int k = 2 * d;
  constexpr int phi1 = 0, phi2 = 1, theta1 = 2, theta2 = 3;
  constexpr int phi1_bar = 4, phi2_bar = 5, theta1_bar = 6, theta2_bar = 7;

  const Eigen::Matrix4cd A = block_matrix_a(Q, z1, z2);
  const GrassmannElement a2 = bilinear(A);
  const GrassmannElement a4 =
      word(k, {theta2, theta1, phi2_bar, phi1_bar}, -b * v) +
      word(k, {phi1, phi2, theta1_bar, theta2_bar}, -b * std::conj(v));

  GrassmannElement series = GrassmannElement::scalar(k, 1.0) + a4 + 0.5 * multiply(a4, a4);
  const GrassmannElement integrand = multiply(series, exp_series(a2));

  IdentityCheck out;
  out.engine = berezin_integrate(integrand, paired_measure(d)).scalar_part();
  out.expected = h_function(Q, v, z1, z2, b);
  out.residual = std::abs(out.engine - out.expected);
  return out;
}

}  // namespace sparsecp
