#include "sparsecp/ensemble_mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sparsecp/errors.hpp"
#include "sparsecp/parallel.hpp"

namespace sparsecp {

using cplx = std::complex<double>;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::uint64_t kBootstrapStream = 0xb007'57a9'0000'0000ull;

void check_np(int n, double p) {
  if (n < 1 || !(p > 0 && p <= n)) {
    std::ostringstream msg;
    msg << "ensemble requires n >= 1 and 0 < p <= n, got n=" << n << ", p=" << p;
    throw DomainError(msg.str());
  }
}

struct LogPair {
  double d1;
  double d2;
  bool singular;
};

// Per-sample log D(z1), log D(z2) in chunk order.
std::vector<LogPair> sample_log_pairs(int n, double p, cplx z1, cplx z2, std::size_t samples,
                                      std::uint64_t seed, unsigned workers,
                                      std::size_t chunk_size) {
  const auto plan = ChunkPlan::make(samples, chunk_size);
  std::vector<std::size_t> offset(plan.count() + 1, 0);
  for (std::size_t c = 0; c < plan.count(); ++c) offset[c + 1] = offset[c] + plan.sizes[c];
  std::vector<LogPair> out(samples);
  const bool same = z1 == z2;
  parallel_for_index(plan.count(), workers, [&](std::size_t c) {
    auto rng = chunk_rng(seed, c);
    for (std::size_t s = 0; s < plan.sizes[c]; ++s) {
      const Eigen::MatrixXcd X = sample_matrix(n, p, rng);
      const auto l1 = log_absdet_sq(X, z1);
      const auto l2 = same ? l1 : log_absdet_sq(X, z2);
      LogPair& slot = out[offset[c] + s];
      slot.singular = !l1 || !l2;
      slot.d1 = l1.value_or(kNegInf);
      slot.d2 = l2.value_or(kNegInf);
    }
  });
  return out;
}

struct Scaled {
  std::vector<double> cross;
  std::vector<double> first;
  std::vector<double> second;
};

double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

Eigen::MatrixXcd sample_matrix(int n, double p, std::mt19937_64& rng) {
  check_np(n, p);
  std::bernoulli_distribution keep(p / n);
  const double scale = 1 / std::sqrt(p);
  Eigen::MatrixXcd X(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      // The Gaussian is drawn either way so the stream does not depend on the mask.
      const cplx w = complex_gaussian(rng);
      X(j, k) = keep(rng) ? scale * w : cplx{};
    }
  }
  return X;
}

std::optional<double> log_absdet_sq(const Eigen::MatrixXcd& X, cplx z) {
  Eigen::MatrixXcd M = X;
  M.diagonal().array() -= z;
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
  const auto& f = lu.matrixLU();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    const double mag = std::abs(f(i, i));
    if (mag == 0) return std::nullopt;
    acc += std::log(mag);
  }
  return 2 * acc;
}

void LogMoments::add(double log_d1, double log_d2) {
  cross_.add(log_d1 + log_d2);
  first_.add(2 * log_d1);
  second_.add(2 * log_d2);
}

void LogMoments::merge(const LogMoments& other) {
  cross_.merge(other.cross_);
  first_.merge(other.first_);
  second_.merge(other.second_);
}

double LogMoments::log_ratio() const {
  return cross_.value() - 0.5 * first_.value() - 0.5 * second_.value();
}

RatioEstimate estimate_ratio(const RatioConfig& cfg) {
  check_np(cfg.n, cfg.p);
  if (cfg.samples < 1000) throw DomainError("estimate_ratio requires at least 1000 samples");
  if (cfg.bootstrap_resamples < 200) {
    throw DomainError("estimate_ratio requires at least 200 bootstrap resamples");
  }
  const double root_n = std::sqrt(static_cast<double>(cfg.n));
  const cplx z1 = cfg.z0 + cfg.zeta1 / root_n;
  const cplx z2 = cfg.z0 + cfg.zeta2 / root_n;
  const auto pairs =
      sample_log_pairs(cfg.n, cfg.p, z1, z2, cfg.samples, cfg.seed, cfg.workers, cfg.chunk_size);

  RatioEstimate out;
  LogMoments moments;
  std::vector<LogPair> kept;
  kept.reserve(pairs.size());
  for (const auto& s : pairs) {
    if (s.singular) {
      ++out.discarded;
      continue;
    }
    moments.add(s.d1, s.d2);
    kept.push_back(s);
  }
  if (kept.empty()) throw NumericalError("estimate_ratio: every sample was singular");

  const double ratio = std::exp(moments.log_ratio());
  out.estimate.mean = ratio;
  out.estimate.n_samples = kept.size();
  out.estimate.seed = cfg.seed;

  // Rescale by the per-argument maxima; the shifts cancel in the ratio.
  double m1 = kNegInf, m2 = kNegInf;
  for (const auto& s : kept) {
    m1 = std::max(m1, s.d1);
    m2 = std::max(m2, s.d2);
  }
  Scaled sc;
  sc.cross.resize(kept.size());
  sc.first.resize(kept.size());
  sc.second.resize(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const double e1 = std::exp(kept[i].d1 - m1);
    const double e2 = std::exp(kept[i].d2 - m2);
    sc.cross[i] = e1 * e2;
    sc.first[i] = e1 * e1;
    sc.second[i] = e2 * e2;
  }

  const std::size_t m = kept.size();
  std::vector<double> boot(cfg.bootstrap_resamples);
  parallel_for_index(boot.size(), cfg.workers, [&](std::size_t r) {
    auto rng = chunk_rng(cfg.seed ^ kBootstrapStream, r);
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    double a = 0, b = 0, c = 0;
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t i = pick(rng);
      a += sc.cross[i];
      b += sc.first[i];
      c += sc.second[i];
    }
    boot[r] = a / std::sqrt(b * c);
  });
  double bm = 0;
  for (double v : boot) bm += v;
  bm /= static_cast<double>(boot.size());
  double bv = 0;
  for (double v : boot) bv += (v - bm) * (v - bm);
  out.estimate.std_error = std::sqrt(bv / static_cast<double>(boot.size() - 1));
  out.ci_low = percentile(boot, 0.025);
  out.ci_high = percentile(boot, 0.975);

  const std::size_t groups = std::clamp<std::size_t>(cfg.jackknife_groups, 2, m);
  std::vector<double> leave_out(groups);
  double ta = 0, tb = 0, tc = 0;
  for (std::size_t i = 0; i < m; ++i) {
    ta += sc.cross[i];
    tb += sc.first[i];
    tc += sc.second[i];
  }
  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t lo = g * m / groups;
    const std::size_t hi = (g + 1) * m / groups;
    double a = ta, b = tb, c = tc;
    for (std::size_t i = lo; i < hi; ++i) {
      a -= sc.cross[i];
      b -= sc.first[i];
      c -= sc.second[i];
    }
    leave_out[g] = a / std::sqrt(b * c);
  }
  double lm = 0;
  for (double v : leave_out) lm += v;
  lm /= static_cast<double>(groups);
  const double full = ta / std::sqrt(tb * tc);
  out.jackknife = static_cast<double>(groups) * full - static_cast<double>(groups - 1) * lm;
  out.reliable = out.jackknife >= out.ci_low && out.jackknife <= out.ci_high;
  return out;
}

MCEstimate estimate_f2(int n, double p, cplx z1, cplx z2, std::size_t samples,
                       std::uint64_t seed, unsigned workers, std::size_t chunk_size) {
  check_np(n, p);
  if (samples < 100) throw DomainError("estimate_f2 requires at least 100 samples");
  const auto plan = ChunkPlan::make(samples, chunk_size, 32);
  std::vector<double> sums(plan.count());
  const bool same = z1 == z2;
  parallel_for_index(plan.count(), workers, [&](std::size_t c) {
    auto rng = chunk_rng(seed, c);
    double acc = 0.0;
    for (std::size_t s = 0; s < plan.sizes[c]; ++s) {
      const Eigen::MatrixXcd X = sample_matrix(n, p, rng);
      const auto l1 = log_absdet_sq(X, z1);
      const auto l2 = same ? l1 : log_absdet_sq(X, z2);
      if (l1 && l2) acc += std::exp(*l1 + *l2);
    }
    sums[c] = acc;
  });
  for (double s : sums) {
    if (!std::isfinite(s)) throw NumericalError("estimate_f2: non-finite accumulation");
  }
  auto est = batch_means(sums, plan.sizes);
  est.seed = seed;
  return est;
}

}  // namespace sparsecp
