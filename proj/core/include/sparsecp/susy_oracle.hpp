#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "sparsecp/mc_estimate.hpp"

namespace sparsecp {

/// Estimate of a complex mean with batch-means standard errors per component.
struct ComplexEstimate {
  std::complex<double> mean;
  double std_error_re = 0.0;
  double std_error_im = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

struct OracleConfig {
  int n = 1;
  double p = 1.0;
  std::complex<double> z1;
  std::complex<double> z2;
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
  std::size_t chunk_size = 8192;
  unsigned workers = 1;

  /// sqrt(2(n - p)/(np)).
  double b() const;
};

/// [[-Z, Q], [-Q^*, -Z^*]] with Z = diag(z1, z2).
Eigen::Matrix4cd block_matrix_a(const Eigen::Matrix2cd& Q, std::complex<double> z1,
                                std::complex<double> z2);

/// det A + b v det Q^* + b conj(v) det Q + b^2 |v|^2.
std::complex<double> h_function(const Eigen::Matrix2cd& Q, std::complex<double> v,
                                std::complex<double> z1, std::complex<double> z2, double b);

/// z^k by repeated squaring.
std::complex<double> int_power(std::complex<double> z, unsigned k);

/// f2(z1, z2) = E |det(X - z1)|^2 |det(X - z2)|^2 as E[h(Q, v)^n] over
/// independent centred complex Gaussian entries of Q and v with E|.|^2 = 1/n.
/// At least 30 batches; results do not depend on cfg.workers.
ComplexEstimate f2_oracle(const OracleConfig& cfg);

/// f2 at n = 1 in closed form: E|x - z1|^2 |x - z2|^2 for one sparse entry.
double f2_closed_form_n1(double p, std::complex<double> z1, std::complex<double> z2);

/// Haar-distributed unitary from the QR factorisation of a complex Gaussian
/// matrix, with the phases of R's diagonal moved into Q.
template <typename Rng>
Eigen::MatrixXcd haar_unitary(Rng& rng, int d) {
  Eigen::MatrixXcd g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = complex_gaussian(rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd& r = qr.matrixQR();
  for (int j = 0; j < d; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

struct HCIZCheck {
  MCEstimate lhs;  // Haar average of exp(t tr(A U^* B U))
  double rhs = 0.0;
};

/// det[exp(t a_j b_k)] / (t (a_2 - a_1)(b_2 - b_1)) for 2x2 diagonal A, B.
double hciz_formula(const std::array<double, 2>& a, const std::array<double, 2>& b, double t);

HCIZCheck hciz_check(const std::array<double, 2>& a, const std::array<double, 2>& b, double t,
                     std::size_t samples, std::uint64_t seed, unsigned workers = 1);

}  // namespace sparsecp
