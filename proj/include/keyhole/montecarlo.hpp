// SPDX-License-Identifier: Apache-2.0
//
// Seeded Monte Carlo oracle: keyhole channel draws, per-scheme accumulated
// mutual information (with the lemma-bound CC variant), rank-one
// determinant updates, and deterministic chunked outage estimation. Trial
// substreams are independently seeded, so the OpenMP and serial paths
// produce bit-identical results.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "keyhole/core_model.hpp"

namespace keyhole {

struct RngSpec {
  std::uint64_t seed = 0x6b65796f31ull;
  int stream_chunk = 65536;  // trials per independently seeded substream
};

/// Deterministic per-substream seed derived from (seed, index).
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

struct RoundDraw {
  std::vector<std::complex<double>> u;  // length N_R
  std::vector<std::complex<double>> v;  // length N_T
  double x = 0.0;                       // ||u||^2 ||v||^2
};

struct ChannelDraw {
  std::vector<RoundDraw> rounds;
};

enum class CcVariant { True, LemmaBound };
enum class Execution { Serial, OpenMP };

/// One round's keyhole vectors; entries are standard complex normals
/// (|z|^2 ~ Exp(1), uniform phase).
RoundDraw draw_round(std::mt19937_64& rng, const SystemConfig& config);
ChannelDraw draw_channel(std::mt19937_64& rng, const SystemConfig& config);

/// Accumulated mutual information in bits/s/Hz for one channel draw.
/// CC True evaluates the N_T x N_T determinant by rank-one accumulation
/// (Gram form above 256 transmit antennas); LemmaBound evaluates the
/// scalar gain-sum lower bound.
double mutual_info(Scheme scheme, const ChannelDraw& draws, const SystemConfig& config,
                   CcVariant variant = CcVariant::True);

/// Determinant/inverse state for A accumulated from rank-one updates.
struct DetState {
  double det = 1.0;
  Eigen::MatrixXcd inverse;  // A^{-1}

  static DetState identity(int n);
};

/// A <- A + alpha v v^H: det(A + alpha v v^H) = det(A)(1 + alpha v^H A^{-1} v),
/// inverse updated by the Sherman-Morrison form.
void det_rank1_update(DetState& state, double alpha, const Eigen::VectorXcd& v);

namespace detail {
double cc_true_log2_det_rank1(const ChannelDraw& draws, const SystemConfig& config);
double cc_true_log2_det_gram(const ChannelDraw& draws, const SystemConfig& config);
}  // namespace detail

/// Fraction of draws with mutual information below the target rate.
/// Deterministic for a fixed RngSpec: trials are partitioned into
/// fixed-size substreams reduced in index order.
OutageEstimate estimate_outage(const SystemConfig& config, Scheme scheme, CcVariant variant,
                               std::int64_t trials, const RngSpec& rng,
                               Execution exec = Execution::OpenMP);

struct GapSummary {
  double mean_gap = 0.0;  // E[I_IR - I_CC_true], bits/s/Hz
  double p50 = 0.0;
  double p90 = 0.0;
  double p99 = 0.0;
  double min_gap = 0.0;   // most negative observed sample (float noise floor)
  std::int64_t trials = 0;
};

/// Distribution summary of the per-draw IR-vs-CC mutual-information gap.
GapSummary gap_ir_cc(const SystemConfig& config, std::int64_t trials, const RngSpec& rng,
                     Execution exec = Execution::OpenMP);

}  // namespace keyhole
