#include "sparsecp/mc_estimate.hpp"

#include <algorithm>

namespace sparsecp {

ChunkPlan ChunkPlan::make(std::size_t samples, std::size_t chunk_size,
                          std::size_t min_chunks) {
  ChunkPlan plan;
  if (samples == 0) return plan;
  chunk_size = std::max<std::size_t>(1, chunk_size);
  std::size_t chunks = (samples + chunk_size - 1) / chunk_size;
  chunks = std::max(chunks, std::min(min_chunks, samples));
  plan.sizes.assign(chunks, samples / chunks);
  for (std::size_t i = 0; i < samples % chunks; ++i) ++plan.sizes[i];
  return plan;
}

std::mt19937_64 chunk_rng(std::uint64_t seed, std::size_t chunk_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk_index),
                    static_cast<std::uint32_t>(static_cast<std::uint64_t>(chunk_index) >> 32),
                    0x5eedu};
  return std::mt19937_64(seq);
}

MCEstimate batch_means(std::span<const double> batch_sums,
                       std::span<const std::size_t> batch_counts) {
  MCEstimate est;
  double total = 0.0;
  std::size_t n = 0;
  for (std::size_t b = 0; b < batch_sums.size(); ++b) {
    total += batch_sums[b];
    n += batch_counts[b];
  }
  est.n_samples = n;
  if (n == 0) return est;
  est.mean = total / static_cast<double>(n);
  std::size_t used = 0;
  double acc = 0.0;
  for (std::size_t b = 0; b < batch_sums.size(); ++b) {
    if (batch_counts[b] == 0) continue;
    const double nb = static_cast<double>(batch_counts[b]);
    const double dev = batch_sums[b] / nb - est.mean;
    acc += nb * nb * dev * dev;
    ++used;
  }
  if (used > 1) {
    const double nn = static_cast<double>(n);
    est.std_error = std::sqrt(acc / (nn * nn) * static_cast<double>(used) /
                           static_cast<double>(used - 1));
  }
  return est;
}

void LogSumExp::add(double log_value) {
  ++count_;
  if (log_value == -std::numeric_limits<double>::infinity()) return;
  if (log_value <= max_) {
    scaled_sum_ += std::exp(log_value - max_);
  } else {
    scaled_sum_ = scaled_sum_ * std::exp(max_ - log_value) + 1.0;
    max_ = log_value;
  }
}

void LogSumExp::merge(const LogSumExp& other) {
  count_ += other.count_;
  if (other.scaled_sum_ == 0.0) return;
  if (scaled_sum_ == 0.0) {
    max_ = other.max_;
    scaled_sum_ = other.scaled_sum_;
    return;
  }
  if (other.max_ <= max_) {
    scaled_sum_ += other.scaled_sum_ * std::exp(other.max_ - max_);
  } else {
    scaled_sum_ = scaled_sum_ * std::exp(max_ - other.max_) + other.scaled_sum_;
    max_ = other.max_;
  }
}

double LogSumExp::value() const {
  if (scaled_sum_ == 0.0) return -std::numeric_limits<double>::infinity();
  return max_ + std::log(scaled_sum_);
}

}  // namespace sparsecp
