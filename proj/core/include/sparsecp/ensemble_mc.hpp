#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "sparsecp/mc_estimate.hpp"

namespace sparsecp {

/// One draw of the sparse ensemble: x_jk = d_jk w_jk with d_jk = 1/sqrt(p)
/// with probability p/n (else 0) and w_jk standard complex Gaussian.
Eigen::MatrixXcd sample_matrix(int n, double p, std::mt19937_64& rng);

/// log |det(X - z I)|^2 from a partially pivoted LU factorisation; empty when
/// a pivot is exactly zero.
std::optional<double> log_absdet_sq(const Eigen::MatrixXcd& X, std::complex<double> z);

/// Running log-sum-exp of log D1 + log D2, 2 log D1 and 2 log D2 where
/// D = |det(X - z)|^2.
class LogMoments {
 public:
  void add(double log_d1, double log_d2);
  void merge(const LogMoments& other);
  /// log of sum D1 D2 / sqrt(sum D1^2 sum D2^2).
  double log_ratio() const;
  std::size_t count() const { return cross_.count(); }

 private:
  LogSumExp cross_;
  LogSumExp first_;
  LogSumExp second_;
};

struct RatioConfig {
  int n = 128;
  double p = 4.0;
  std::complex<double> z0;
  std::complex<double> zeta1;
  std::complex<double> zeta2;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::size_t chunk_size = 64;
  std::size_t bootstrap_resamples = 400;
  std::size_t jackknife_groups = 50;
};

struct RatioEstimate {
  MCEstimate estimate;  // mean = ratio, std_error = bootstrap standard deviation
  double ci_low = 0.0;  // bootstrap 95% percentile interval
  double ci_high = 0.0;
  double jackknife = 0.0;  // delete-a-group jackknife, bias corrected
  bool reliable = true;    // jackknife inside the bootstrap interval
  std::size_t discarded = 0;
};

/// mean(D(z1) D(z2)) / sqrt(mean(D(z1)^2) mean(D(z2)^2)) with
/// z_j = z0 + zeta_j / sqrt(n), all three moments from the same draws.
/// Results depend on (seed, chunk_size, samples) but not on workers.
RatioEstimate estimate_ratio(const RatioConfig& cfg);

/// E[D(z1) D(z2)] by direct sampling; exactly singular draws count as D = 0.
MCEstimate estimate_f2(int n, double p, std::complex<double> z1, std::complex<double> z2,
                       std::size_t samples, std::uint64_t seed, unsigned workers = 1,
                       std::size_t chunk_size = 8192);

}  // namespace sparsecp
