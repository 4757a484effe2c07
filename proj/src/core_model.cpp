// SPDX-License-Identifier: Apache-2.0

#include "keyhole/core_model.hpp"

namespace keyhole {

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::TypeI: return "type1";
    case Scheme::CC: return "cc";
    case Scheme::IR: return "ir";
  }
  return "?";
}

const char* method_name(Method m) {
  switch (m) {
    case Method::Exact: return "exact";
    case Method::UpperBound: return "upper-bound";
    case Method::Asymptotic: return "asymptotic";
    case Method::MonteCarlo: return "monte-carlo";
  }
  return "?";
}

SystemConfig::SystemConfig(int nt, int nr, int k, std::vector<double> snr_linear, double r)
    : n_t(nt), n_r(nr), k_max(k), snr_per_round(std::move(snr_linear)), rate(r) {
  validate();
}

SystemConfig SystemConfig::equal_snr_db(int nt, int nr, int k, double snr_db, double rate) {
  return SystemConfig(nt, nr, k, std::vector<double>(static_cast<size_t>(k), db_to_linear(snr_db)), rate);
}

void SystemConfig::validate() const {
  if (n_t < 1) throw std::invalid_argument("SystemConfig: n_t must be >= 1");
  if (n_r < 1) throw std::invalid_argument("SystemConfig: n_r must be >= 1");
  if (k_max < 1) throw std::invalid_argument("SystemConfig: k_max must be >= 1");
  if (static_cast<int>(snr_per_round.size()) != k_max)
    throw std::invalid_argument("SystemConfig: snr_per_round must have k_max entries");
  for (double g : snr_per_round)
    if (!(g > 0.0) || !std::isfinite(g))
      throw std::invalid_argument("SystemConfig: per-round SNR must be positive and finite");
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw std::invalid_argument("SystemConfig: rate must be positive and finite");
}

AntennaProfile antenna_profile(int n_t, int n_r) {
  if (n_t < 1 || n_r < 1) throw std::invalid_argument("antenna_profile: antenna counts must be >= 1");
  AntennaProfile p;
  p.tau = std::abs(n_t - n_r);
  p.n_min = std::min(n_t, n_r);
  p.n_max = std::max(n_t, n_r);
  p.antenna_case = (n_t == n_r)  ? AntennaCase::Equal
                   : (n_t > n_r) ? AntennaCase::TxExcess
                                 : AntennaCase::RxExcess;
  return p;
}

AntennaProfile antenna_profile(const SystemConfig& config) {
  config.validate();
  return antenna_profile(config.n_t, config.n_r);
}

double effective_threshold(const SystemConfig& config, Scheme scheme) {
  config.validate();
  const double pow2r = std::exp2(config.rate);
  return scheme == Scheme::IR ? pow2r : pow2r - 1.0;
}

}  // namespace keyhole
