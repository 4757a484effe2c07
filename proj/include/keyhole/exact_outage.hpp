// SPDX-License-Identifier: Apache-2.0
//
// The three analytic outage engines: Type-I as a product of per-round CDF
// values, CC as a Bromwich-inverted upper bound on the lemma-bound gain
// sum, IR as an inverse Mellin transform of the accumulated-gain kernel.

#pragma once

#include "keyhole/core_model.hpp"

namespace keyhole {

/// P_out for Type-I HARQ: prod_k F_X(N_T (2^R - 1) / gamma_k).
OutageEstimate outage_type1(const SystemConfig& config);

/// Upper bound on the CC outage: F_{X_CC}(2^R - 1) with X_CC the scalar
/// lemma-bound gain sum; tagged UpperBound, never Exact.
OutageEstimate outage_cc_upper(const SystemConfig& config);

/// Exact IR outage: F_{X_IR}(2^R) by inverse Mellin transform. The contour
/// offset is placed near the real saddle of the integrand so the result
/// keeps relative accuracy deep into the high-SNR tail.
OutageEstimate outage_ir(const SystemConfig& config);

}  // namespace keyhole
