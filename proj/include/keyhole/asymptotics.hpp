// SPDX-License-Identifier: Apache-2.0
//
// High-SNR asymptotic outage formulas for the three HARQ schemes, the
// canonical (C(R) gamma)^{-d} (ln gamma)^{K I} asymptote, diversity order,
// modulation-and-coding gain, and the g(R) factor of the IR asymptote with
// its two independent evaluation routes.

#pragma once

#include <vector>

#include "keyhole/core_model.hpp"

namespace keyhole {

/// Asymptotic outage value together with its structural decomposition:
/// value = shared_factor * prod(per_round_constants). The shared factor is
/// 1 for Type-I, the 1/(K n_min)! prefactor for CC and g(R) for IR.
struct AsymptoticBreakdown {
  double value = 0.0;
  int diversity_order = 0;
  int log_exponent = 0;  // K when N_T == N_R, else 0
  std::vector<double> per_round_constants;
  double shared_factor = 1.0;
};

AsymptoticBreakdown asym_type1(const SystemConfig& config);
AsymptoticBreakdown asym_cc(const SystemConfig& config);
AsymptoticBreakdown asym_ir(const SystemConfig& config);

/// Primary route for g(R): the K-dimensional volume integral
///   g(R) = Gamma(N)^{-K} \int_{t_k >= 0, prod(1+t_k) <= 2^R} prod t_k^{N-1} dt,
/// evaluated by recursive adaptive quadrature (K <= 4). Values are cached.
double g_of_r(double rate, int k_max, int n_min);

/// Cross-check route: the Meijer-G Mellin-Barnes contour for the same g(R).
double g_of_r_mellin_barnes(double rate, int k_max, int n_min);

/// d = K min(N_T, N_R), identical for all three schemes.
int diversity_order(const SystemConfig& config);

/// Modulation-and-coding gain C(R); defined here for N_T == N_R only
/// (throws std::invalid_argument otherwise).
double coding_gain(const SystemConfig& config, Scheme scheme);

/// Canonical asymptote (C(R) gamma)^{-d} (ln gamma)^{K I(N_T - N_R)} under
/// equal per-round SNR; for N_T != N_R it delegates to the scheme's branch
/// formula.
double asym_canonical(const SystemConfig& config, Scheme scheme, double gamma_linear);

}  // namespace keyhole
