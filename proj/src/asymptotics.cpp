// SPDX-License-Identifier: Apache-2.0

#include "keyhole/asymptotics.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "keyhole/inversion.hpp"
#include "keyhole/quadrature.hpp"
#include "keyhole/specfun.hpp"

namespace keyhole {

namespace {

double gamma_fn(double x) { return std::exp(ln_gamma_real(x)); }

// Gamma(N)^{-K} * volume of {prod(1+t_k) <= B} weighted by prod t_k^{N-1}
double g_volume(int k, int n, double b, double rel_tol) {
  if (b <= 1.0) return 0.0;
  if (k == 1) return std::pow(b - 1.0, n) / gamma_fn(n + 1.0);
  QuadratureSettings qs;
  qs.rel_tol = rel_tol;
  qs.abs_tol = 1e-280;
  qs.max_subdiv = 600;
  auto f = [k, n, b, rel_tol](double t) {
    return std::pow(t, n - 1) * g_volume(k - 1, n, b / (1.0 + t), 3.0 * rel_tol);
  };
  const auto r = integrate(std::function<double(double)>(f), 0.0, b - 1.0, qs);
  return r.value / gamma_fn(n);
}

}  // namespace

double g_of_r(double rate, int k_max, int n_min) {
  if (!(rate > 0.0)) throw std::invalid_argument("g_of_r: requires R > 0");
  if (k_max < 1 || k_max > 4)
    throw std::invalid_argument("g_of_r: volume route supports K in 1..4");
  if (n_min < 1) throw std::invalid_argument("g_of_r: requires N >= 1");

  static std::map<std::tuple<int, int, long long>, double> cache;
  static std::mutex mutex;
  const auto key = std::make_tuple(k_max, n_min, static_cast<long long>(std::llround(rate * 1e12)));
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const double v = g_volume(k_max, n_min, std::exp2(rate), k_max >= 3 ? 1e-8 : 1e-10);
  std::lock_guard<std::mutex> lock(mutex);
  cache[key] = v;
  return v;
}

double g_of_r_mellin_barnes(double rate, int k_max, int n_min) {
  if (!(rate > 0.0)) throw std::invalid_argument("g_of_r_mellin_barnes: requires R > 0");
  // g(R) = (1/2 pi i) \int Gamma(t) Gamma(t-N)^K / (Gamma(t)^K Gamma(1+t)) z^t dt,
  // z = 2^R, along Re(t) = N + 1/2 (right of every numerator pole).
  std::vector<GammaTerm> terms;
  terms.push_back({{0.0, 0.0}, +1, false});
  for (int i = 0; i < k_max; ++i) terms.push_back({{-static_cast<double>(n_min), 0.0}, +1, false});
  for (int i = 0; i < k_max; ++i) terms.push_back({{0.0, 0.0}, +1, true});
  terms.push_back({{1.0, 0.0}, +1, true});

  ContourSettings cs;
  cs.offset = n_min + 0.5;
  cs.half_width = 400.0;
  cs.steps = 4000;
  const auto r = mellin_barnes_integral(terms, std::exp2(rate), cs);
  return r.value;
}

int diversity_order(const SystemConfig& config) {
  config.validate();
  return config.k_max * std::min(config.n_t, config.n_r);
}

namespace {

AsymptoticBreakdown make_breakdown(const SystemConfig& config, std::vector<double> constants,
                                   double shared) {
  AsymptoticBreakdown b;
  b.per_round_constants = std::move(constants);
  b.shared_factor = shared;
  b.diversity_order = diversity_order(config);
  b.log_exponent = (config.n_t == config.n_r) ? config.k_max : 0;
  double v = shared;
  for (double c : b.per_round_constants) v *= c;
  b.value = v;
  return b;
}

}  // namespace

AsymptoticBreakdown asym_type1(const SystemConfig& config) {
  config.validate();
  const auto p = antenna_profile(config);
  const double x = effective_threshold(config, Scheme::TypeI);
  const int nt = config.n_t, nr = config.n_r;
  std::vector<double> consts;
  consts.reserve(config.snr_per_round.size());
  for (double g : config.snr_per_round) {
    const double base = nt * x / g;
    if (p.tau == 0) {
      consts.push_back(std::pow(base, nt) * std::log(g) /
                       (nt * gamma_fn(nt) * gamma_fn(nt)));
    } else {
      const double e = 0.5 * (nt + nr) - 0.5 * p.tau;  // printed exponent; equals n_min
      consts.push_back(gamma_fn(p.tau) / (gamma_fn(nt) * gamma_fn(nr)) * std::pow(base, e) / e);
    }
  }
  return make_breakdown(config, std::move(consts), 1.0);
}

AsymptoticBreakdown asym_cc(const SystemConfig& config) {
  config.validate();
  const auto p = antenna_profile(config);
  const double x = effective_threshold(config, Scheme::CC);
  const int nt = config.n_t, nr = config.n_r;
  std::vector<double> consts;
  consts.reserve(config.snr_per_round.size());
  for (double g : config.snr_per_round) {
    const double base = nt * x / g;
    if (nt > nr) {
      consts.push_back(gamma_fn(p.tau) / gamma_fn(nt) * std::pow(base, nr));
    } else if (nt < nr) {
      consts.push_back(gamma_fn(p.tau) / gamma_fn(nr) * std::pow(base, nt));
    } else {
      consts.push_back(std::log(g) / gamma_fn(nt) * std::pow(base, nt));
    }
  }
  const double shared = 1.0 / gamma_fn(config.k_max * p.n_min + 1.0);
  return make_breakdown(config, std::move(consts), shared);
}

AsymptoticBreakdown asym_ir(const SystemConfig& config) {
  config.validate();
  const auto p = antenna_profile(config);
  const int nt = config.n_t, nr = config.n_r;
  std::vector<double> consts;
  consts.reserve(config.snr_per_round.size());
  for (double g : config.snr_per_round) {
    const double base = static_cast<double>(nt) / g;
    if (nt > nr) {
      consts.push_back(gamma_fn(p.tau) * std::pow(base, nr) / gamma_fn(nt));
    } else if (nt < nr) {
      consts.push_back(gamma_fn(p.tau) * std::pow(base, nt) / gamma_fn(nr));
    } else {
      consts.push_back(std::pow(base, nr) * std::log(g) / gamma_fn(nt));
    }
  }
  const double shared = g_of_r(config.rate, config.k_max, p.n_min);
  return make_breakdown(config, std::move(consts), shared);
}

double coding_gain(const SystemConfig& config, Scheme scheme) {
  config.validate();
  if (config.n_t != config.n_r)
    throw std::invalid_argument("coding_gain: defined only for N_T == N_R");
  const int n = config.n_t;
  const int k = config.k_max;
  const double x = std::exp2(config.rate) - 1.0;
  switch (scheme) {
    case Scheme::TypeI:
      return std::pow(n * gamma_fn(n) * gamma_fn(n), 1.0 / n) / (n * x);
    case Scheme::CC:
      return std::pow(gamma_fn(k * n + 1.0), 1.0 / (k * n)) * std::pow(gamma_fn(n), 1.0 / n) /
             (n * x);
    case Scheme::IR:
      return std::pow(g_of_r(config.rate, k, n), -1.0 / (k * n)) *
             std::pow(gamma_fn(n), 1.0 / n) / n;
  }
  throw std::invalid_argument("coding_gain: unknown scheme");
}

double asym_canonical(const SystemConfig& config, Scheme scheme, double gamma_linear) {
  config.validate();
  if (!(gamma_linear > 0.0))
    throw std::invalid_argument("asym_canonical: requires gamma > 0");
  SystemConfig eq = config;
  eq.snr_per_round.assign(static_cast<size_t>(config.k_max), gamma_linear);
  if (config.n_t != config.n_r) {
    switch (scheme) {
      case Scheme::TypeI: return asym_type1(eq).value;
      case Scheme::CC: return asym_cc(eq).value;
      case Scheme::IR: return asym_ir(eq).value;
    }
  }
  const int d = diversity_order(config);
  const double c = coding_gain(config, scheme);
  return std::pow(c * gamma_linear, -d) * std::pow(std::log(gamma_linear), config.k_max);
}

}  // namespace keyhole
