#include "sparsecp/susy_oracle.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "sparsecp/errors.hpp"
#include "sparsecp/parallel.hpp"

namespace sparsecp {

using cplx = std::complex<double>;

namespace {

constexpr std::size_t kMinBatches = 32;

}  // namespace

double OracleConfig::b() const { return std::sqrt(2 * (n - p) / (n * p)); }

Eigen::Matrix4cd block_matrix_a(const Eigen::Matrix2cd& Q, cplx z1, cplx z2) {
  Eigen::Matrix4cd A = Eigen::Matrix4cd::Zero();
  A(0, 0) = -z1;
  A(1, 1) = -z2;
  A(2, 2) = -std::conj(z1);
  A(3, 3) = -std::conj(z2);
  A.block<2, 2>(0, 2) = Q;
  A.block<2, 2>(2, 0) = -Q.adjoint();
  return A;
}

cplx h_function(const Eigen::Matrix2cd& Q, cplx v, cplx z1, cplx z2, double b) {
  const cplx det_q = Q.determinant();
  return block_matrix_a(Q, z1, z2).determinant() + b * v * std::conj(det_q) +
         b * std::conj(v) * det_q + b * b * std::norm(v);
}

cplx int_power(cplx z, unsigned k) {
  cplx result = 1.0;
  while (k) {
    if (k & 1u) result *= z;
    z *= z;
    k >>= 1;
  }
  return result;
}

ComplexEstimate f2_oracle(const OracleConfig& cfg) {
  if (cfg.n < 1) throw DomainError("f2_oracle requires n >= 1");
  if (!(cfg.p > 0 && cfg.p <= cfg.n)) throw DomainError("f2_oracle requires 0 < p <= n");
  if (cfg.samples < 100) throw DomainError("f2_oracle requires at least 100 samples");

  const double b = cfg.b();
  const double var = 1.0 / cfg.n;
  const auto plan = ChunkPlan::make(cfg.samples, cfg.chunk_size, kMinBatches);
  std::vector<double> sums_re(plan.count()), sums_im(plan.count());

  parallel_for_index(plan.count(), cfg.workers, [&](std::size_t c) {
    auto rng = chunk_rng(cfg.seed, c);
    cplx acc = 0.0;
    for (std::size_t s = 0; s < plan.sizes[c]; ++s) {
      Eigen::Matrix2cd Q;
      Q << complex_gaussian(rng, var), complex_gaussian(rng, var), complex_gaussian(rng, var),
          complex_gaussian(rng, var);
      const cplx v = complex_gaussian(rng, var);
      acc += int_power(h_function(Q, v, cfg.z1, cfg.z2, b), static_cast<unsigned>(cfg.n));
    }
    sums_re[c] = acc.real();
    sums_im[c] = acc.imag();
  });

  for (std::size_t c = 0; c < plan.count(); ++c) {
    if (!std::isfinite(sums_re[c]) || !std::isfinite(sums_im[c])) {
      std::ostringstream msg;
      msg << "f2_oracle: non-finite accumulation at n=" << cfg.n
          << "; h^n overflows, reduce n or |z|";
      throw NumericalError(msg.str());
    }
  }
  const auto re = batch_means(sums_re, plan.sizes);
  const auto im = batch_means(sums_im, plan.sizes);
  ComplexEstimate out;
  out.mean = {re.mean, im.mean};
  out.std_error_re = re.std_error;
  out.std_error_im = im.std_error;
  out.n_samples = re.n_samples;
  out.seed = cfg.seed;
  return out;
}

double f2_closed_form_n1(double p, cplx z1, cplx z2) {
  if (!(p > 0 && p <= 1)) throw DomainError("f2_closed_form_n1 requires 0 < p <= 1");
  const double a1 = std::norm(z1);
  const double a2 = std::norm(z2);
  const double cross = 2 * (std::conj(z1) * z2).real();
  return (1 - p) * a1 * a2 + p * (2 / (p * p) + (a1 + a2 + cross) / p + a1 * a2);
}

double hciz_formula(const std::array<double, 2>& a, const std::array<double, 2>& b, double t) {
  const double va = a[1] - a[0];
  const double vb = b[1] - b[0];
  if (va == 0 || vb == 0) throw DomainError("hciz: eigenvalues must be distinct");
  if (t == 0) throw DomainError("hciz: t must be nonzero");
  const double det = std::exp(t * (a[0] * b[0] + a[1] * b[1])) -
                     std::exp(t * (a[0] * b[1] + a[1] * b[0]));
  return det / (t * va * vb);
}

HCIZCheck hciz_check(const std::array<double, 2>& a, const std::array<double, 2>& b, double t,
                     std::size_t samples, std::uint64_t seed, unsigned workers) {
  HCIZCheck out;
  out.rhs = hciz_formula(a, b, t);
  if (samples < 100) throw DomainError("hciz_check requires at least 100 samples");
  const auto plan = ChunkPlan::make(samples, 16384, kMinBatches);
  std::vector<double> sums(plan.count());
  parallel_for_index(plan.count(), workers, [&](std::size_t c) {
    auto rng = chunk_rng(seed, c);
    double acc = 0.0;
    for (std::size_t s = 0; s < plan.sizes[c]; ++s) {
      const Eigen::MatrixXcd u = haar_unitary(rng, 2);
      // tr(A U^* B U) = sum_{j,k} a_j b_k |U_kj|^2 for diagonal A, B.
      double tr = 0.0;
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) tr += a[j] * b[k] * std::norm(u(k, j));
      acc += std::exp(t * tr);
    }
    sums[c] = acc;
  });
  out.lhs = batch_means(sums, plan.sizes);
  out.lhs.seed = seed;
  return out;
}

}  // namespace sparsecp
