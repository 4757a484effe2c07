// SPDX-License-Identifier: Apache-2.0
//
// Shared parameterization for HARQ outage analysis over keyhole MIMO
// channels: system configuration, derived antenna profile, scheme and
// method tags, and the estimate record produced by every engine.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace keyhole {

/// HARQ combining scheme.
enum class Scheme { TypeI, CC, IR };

/// How an outage value was obtained.
enum class Method { Exact, UpperBound, Asymptotic, MonteCarlo };

enum class AntennaCase { Equal, TxExcess, RxExcess };

const char* scheme_name(Scheme s);
const char* method_name(Method m);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// System parameters consumed by every formula. SNRs are stored on the
/// linear scale; all file and CLI interfaces speak dB.
struct SystemConfig {
  int n_t = 1;                        // transmit antennas
  int n_r = 1;                        // receive antennas
  int k_max = 1;                      // HARQ round budget K
  std::vector<double> snr_per_round;  // linear-scale per-round SNR, size K
  double rate = 1.0;                  // target rate R in bits/s/Hz

  SystemConfig() = default;
  SystemConfig(int nt, int nr, int k, std::vector<double> snr_linear, double r);

  /// Convenience constructor for the equal-SNR setups used throughout the
  /// experiments (one SNR repeated over all K rounds, given in dB).
  static SystemConfig equal_snr_db(int nt, int nr, int k, double snr_db, double rate);

  void validate() const;  // throws std::invalid_argument on a bad field
};

/// Derived antenna quantities controlling the three-way case splits.
struct AntennaProfile {
  int tau = 0;    // |N_T - N_R|
  int n_min = 1;  // min(N_T, N_R)
  int n_max = 1;  // max(N_T, N_R)
  AntennaCase antenna_case = AntennaCase::Equal;
};

AntennaProfile antenna_profile(int n_t, int n_r);
AntennaProfile antenna_profile(const SystemConfig& config);

/// Outage threshold on the accumulated channel-gain scale:
/// 2^R - 1 for Type-I and CC, 2^R for IR.
double effective_threshold(const SystemConfig& config, Scheme scheme);

/// An outage probability together with how it was produced. Values are
/// never clamped: asymptotic estimates may exceed 1 at low SNR and carry
/// the Asymptotic tag to say so. `below_floor` marks a contour-engine
/// result whose internal error estimate swamps the value itself.
struct OutageEstimate {
  double value = 0.0;
  Method method = Method::Exact;
  std::optional<double> stderr_est;    // present iff method == MonteCarlo
  std::optional<std::int64_t> trials;  // present iff method == MonteCarlo
  bool below_floor = false;
};

}  // namespace keyhole
