// SPDX-License-Identifier: Apache-2.0

#include "keyhole/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "keyhole/quadrature.hpp"

namespace keyhole {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline double uniform_open01(std::mt19937_64& rng) {
  // (0, 1]: never 0, so -log is always finite
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

inline std::complex<double> complex_normal(std::mt19937_64& rng) {
  const double r2 = -std::log(uniform_open01(rng));  // |z|^2 ~ Exp(1)
  const double phi = kTwoPi * uniform_open01(rng);
  const double r = std::sqrt(r2);
  return {r * std::cos(phi), r * std::sin(phi)};
}

double fill_vector(std::mt19937_64& rng, std::vector<std::complex<double>>& v, int n) {
  v.resize(static_cast<size_t>(n));
  double norm2 = 0.0;
  for (auto& z : v) {
    z = complex_normal(rng);
    norm2 += std::norm(z);
  }
  return norm2;
}

}  // namespace

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 1));
}

RoundDraw draw_round(std::mt19937_64& rng, const SystemConfig& config) {
  RoundDraw d;
  const double nu = fill_vector(rng, d.u, config.n_r);
  const double nv = fill_vector(rng, d.v, config.n_t);
  d.x = nu * nv;
  return d;
}

ChannelDraw draw_channel(std::mt19937_64& rng, const SystemConfig& config) {
  ChannelDraw c;
  c.rounds.resize(static_cast<size_t>(config.k_max));
  for (auto& r : c.rounds) r = draw_round(rng, config);
  return c;
}

DetState DetState::identity(int n) {
  DetState s;
  s.det = 1.0;
  s.inverse = Eigen::MatrixXcd::Identity(n, n);
  return s;
}

void det_rank1_update(DetState& state, double alpha, const Eigen::VectorXcd& v) {
  if (alpha == 0.0) return;
  const Eigen::VectorXcd w = state.inverse * v;
  const double q = std::real(v.dot(w));  // v^H A^{-1} v, real for Hermitian A
  const double growth = 1.0 + alpha * q;
  if (!(growth > 0.0))
    throw NumericsError("det_rank1_update: positive definiteness lost");
  state.det *= growth;
  state.inverse.noalias() -= (alpha / growth) * (w * w.adjoint());
}

namespace detail {

double cc_true_log2_det_rank1(const ChannelDraw& draws, const SystemConfig& config) {
  DetState state = DetState::identity(config.n_t);
  for (int k = 0; k < config.k_max; ++k) {
    const auto& rd = draws.rounds[static_cast<size_t>(k)];
    double nu = 0.0;
    for (const auto& z : rd.u) nu += std::norm(z);
    const double alpha = config.snr_per_round[static_cast<size_t>(k)] / config.n_t * nu;
    const Eigen::Map<const Eigen::VectorXcd> v(rd.v.data(), static_cast<long>(rd.v.size()));
    det_rank1_update(state, alpha, v);
  }
  return std::log2(state.det);
}

double cc_true_log2_det_gram(const ChannelDraw& draws, const SystemConfig& config) {
  // det(I_{N_T} + sum alpha_k v_k v_k^H) = det(I_K + diag(alpha) V^H V)
  const int k_max = config.k_max;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(k_max, k_max);
  for (int j = 0; j < k_max; ++j) {
    const auto& rj = draws.rounds[static_cast<size_t>(j)];
    double nu = 0.0;
    for (const auto& z : rj.u) nu += std::norm(z);
    const double alpha_j = config.snr_per_round[static_cast<size_t>(j)] / config.n_t * nu;
    const Eigen::Map<const Eigen::VectorXcd> vj(rj.v.data(), static_cast<long>(rj.v.size()));
    for (int k = 0; k < k_max; ++k) {
      const auto& rk = draws.rounds[static_cast<size_t>(k)];
      const Eigen::Map<const Eigen::VectorXcd> vk(rk.v.data(), static_cast<long>(rk.v.size()));
      m(j, k) += alpha_j * vj.dot(vk);
    }
  }
  const std::complex<double> det = m.partialPivLu().determinant();
  return std::log2(std::max(det.real(), 1e-300));
}

}  // namespace detail

double mutual_info(Scheme scheme, const ChannelDraw& draws, const SystemConfig& config,
                   CcVariant variant) {
  const int k_max = config.k_max;
  switch (scheme) {
    case Scheme::TypeI: {
      double best = 0.0;
      for (int k = 0; k < k_max; ++k)
        best = std::max(best, std::log2(1.0 + config.snr_per_round[static_cast<size_t>(k)] *
                                                  draws.rounds[static_cast<size_t>(k)].x /
                                                  config.n_t));
      return best;
    }
    case Scheme::IR: {
      double acc = 0.0;
      for (int k = 0; k < k_max; ++k)
        acc += std::log2(1.0 + config.snr_per_round[static_cast<size_t>(k)] *
                                   draws.rounds[static_cast<size_t>(k)].x / config.n_t);
      return acc;
    }
    case Scheme::CC: {
      if (variant == CcVariant::LemmaBound) {
        double acc = 0.0;
        for (int k = 0; k < k_max; ++k)
          acc += config.snr_per_round[static_cast<size_t>(k)] *
                 draws.rounds[static_cast<size_t>(k)].x / config.n_t;
        return std::log2(1.0 + acc);
      }
      // rank-one recursion is cheaper while N_T is small; the K x K Gram
      // determinant takes over for large arrays
      return config.n_t <= 256 ? detail::cc_true_log2_det_rank1(draws, config)
                               : detail::cc_true_log2_det_gram(draws, config);
    }
  }
  throw std::invalid_argument("mutual_info: unknown scheme");
}

OutageEstimate estimate_outage(const SystemConfig& config, Scheme scheme, CcVariant variant,
                               std::int64_t trials, const RngSpec& rng, Execution exec) {
  config.validate();
  if (trials < 1) throw std::invalid_argument("estimate_outage: requires trials >= 1");
  const std::int64_t chunk = std::max(1, rng.stream_chunk);
  const std::int64_t n_sub = (trials + chunk - 1) / chunk;
  std::vector<std::int64_t> counts(static_cast<size_t>(n_sub), 0);

  const bool parallel = exec == Execution::OpenMP;
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::int64_t i = 0; i < n_sub; ++i) {
    std::mt19937_64 gen(substream_seed(rng.seed, static_cast<std::uint64_t>(i)));
    const std::int64_t n_i = std::min<std::int64_t>(chunk, trials - i * chunk);
    std::int64_t c = 0;
    for (std::int64_t t = 0; t < n_i; ++t) {
      const ChannelDraw draw = draw_channel(gen, config);
      if (mutual_info(scheme, draw, config, variant) < config.rate) ++c;
    }
    counts[static_cast<size_t>(i)] = c;
  }

  std::int64_t outages = 0;
  for (std::int64_t c : counts) outages += c;  // fixed reduction order
  const double p = static_cast<double>(outages) / static_cast<double>(trials);

  OutageEstimate out;
  out.value = p;
  out.method = Method::MonteCarlo;
  out.stderr_est = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(trials));
  out.trials = trials;
  return out;
}

GapSummary gap_ir_cc(const SystemConfig& config, std::int64_t trials, const RngSpec& rng,
                     Execution exec) {
  config.validate();
  if (trials < 1) throw std::invalid_argument("gap_ir_cc: requires trials >= 1");
  const std::int64_t chunk = std::max(1, rng.stream_chunk);
  const std::int64_t n_sub = (trials + chunk - 1) / chunk;
  std::vector<double> gaps(static_cast<size_t>(trials), 0.0);

  const bool parallel = exec == Execution::OpenMP;
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::int64_t i = 0; i < n_sub; ++i) {
    std::mt19937_64 gen(substream_seed(rng.seed, static_cast<std::uint64_t>(i)));
    const std::int64_t n_i = std::min<std::int64_t>(chunk, trials - i * chunk);
    for (std::int64_t t = 0; t < n_i; ++t) {
      const ChannelDraw draw = draw_channel(gen, config);
      const double ir = mutual_info(Scheme::IR, draw, config);
      const double cc = mutual_info(Scheme::CC, draw, config, CcVariant::True);
      gaps[static_cast<size_t>(i * chunk + t)] = ir - cc;
    }
  }

  double mean = 0.0;
  for (double g : gaps) mean += g;  // fixed order
  mean /= static_cast<double>(trials);

  std::vector<double> sorted = gaps;
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&sorted](double q) {
    const auto idx = static_cast<size_t>(q * (static_cast<double>(sorted.size()) - 1.0));
    return sorted[idx];
  };

  GapSummary s;
  s.mean_gap = mean;
  s.p50 = quantile(0.50);
  s.p90 = quantile(0.90);
  s.p99 = quantile(0.99);
  s.min_gap = sorted.front();
  s.trials = trials;
  return s;
}

}  // namespace keyhole
