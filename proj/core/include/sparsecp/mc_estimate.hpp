#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <complex>
#include <random>
#include <span>
#include <vector>

namespace sparsecp {

/// A Monte Carlo estimate of a real quantity.
struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Split of `samples` draws into chunks. Each chunk owns an independent
/// generator derived from (seed, chunk index), so the draws are fixed by
/// (seed, samples, chunk_size) alone and not by the number of workers.
struct ChunkPlan {
  std::vector<std::size_t> sizes;

  /// At least `min_chunks` chunks (when samples allow) of near-equal size, none
  /// larger than chunk_size.
  static ChunkPlan make(std::size_t samples, std::size_t chunk_size,
                        std::size_t min_chunks = 1);
  std::size_t count() const { return sizes.size(); }
};

std::mt19937_64 chunk_rng(std::uint64_t seed, std::size_t chunk_index);

/// Standard complex Gaussian with E|w|^2 = variance (real and imaginary parts
/// independent N(0, variance/2)).
template <typename Rng>
std::complex<double> complex_gaussian(Rng& rng, double variance = 1.0) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5 * variance));
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

/// Batch-means estimate from per-batch (sum, count) pairs.
MCEstimate batch_means(std::span<const double> batch_sums,
                       std::span<const std::size_t> batch_counts);

/// Streaming log-sum-exp with a running maximum.
class LogSumExp {
 public:
  void add(double log_value);
  void merge(const LogSumExp& other);
  /// log(sum exp(x_i)); -inf when empty.
  double value() const;
  std::size_t count() const { return count_; }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double scaled_sum_ = 0.0;  // sum exp(x_i - max_)
  std::size_t count_ = 0;
};

}  // namespace sparsecp
