// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "keyhole/exact_outage.hpp"
#include "keyhole/keyhole_dist.hpp"

using namespace keyhole;

TEST_CASE("K=1: all three engines collapse to the mapped gain CDF") {
  for (auto [nt, nr] : {std::pair{1, 1}, {2, 2}, {3, 2}}) {
    const auto cfg = SystemConfig::equal_snr_db(nt, nr, 1, 10.0, 3.0);
    const KeyholeGainDist dist(nt, nr);
    const double ref = cdf_x(dist, nt * 7.0 / cfg.snr_per_round[0]);
    CHECK(std::abs(outage_type1(cfg).value - ref) < 1e-9);
    CHECK(std::abs(outage_cc_upper(cfg).value - ref) < 1e-5);
    CHECK(std::abs(outage_ir(cfg).value - ref) < 1e-5);
  }
}

TEST_CASE("Type-I product structure over equal rounds") {
  const auto c1 = SystemConfig::equal_snr_db(2, 3, 1, 8.0, 2.0);
  const auto c2 = SystemConfig::equal_snr_db(2, 3, 2, 8.0, 2.0);
  const double p1 = outage_type1(c1).value;
  CHECK(outage_type1(c2).value == doctest::Approx(p1 * p1).epsilon(1e-12));
}

TEST_CASE("method tags") {
  const auto cfg = SystemConfig::equal_snr_db(2, 2, 2, 10.0, 3.0);
  CHECK(outage_type1(cfg).method == Method::Exact);
  CHECK(outage_cc_upper(cfg).method == Method::UpperBound);
  CHECK(outage_ir(cfg).method == Method::Exact);
}

TEST_CASE("IR never exceeds the CC upper bound") {
  for (double snr : {0.0, 5.0, 15.0, 25.0}) {
    const auto cfg = SystemConfig::equal_snr_db(2, 2, 3, snr, 3.0);
    CHECK(outage_ir(cfg).value <= outage_cc_upper(cfg).value + 1e-9);
  }
}

TEST_CASE("monotone in SNR and in rate") {
  auto engines = {+[](const SystemConfig& c) { return outage_type1(c).value; },
                  +[](const SystemConfig& c) { return outage_cc_upper(c).value; },
                  +[](const SystemConfig& c) { return outage_ir(c).value; }};
  for (auto f : engines) {
    double prev = 2.0;
    for (double snr : {2.0, 7.0, 12.0, 20.0}) {
      const double v = f(SystemConfig::equal_snr_db(2, 3, 2, snr, 3.0));
      CHECK(v <= prev + 1e-12);
      prev = v;
    }
    prev = 0.0;
    for (double r : {1.0, 2.0, 3.0, 4.5}) {
      const double v = f(SystemConfig::equal_snr_db(2, 3, 2, 8.0, r));
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("per-round SNR monotonicity holds round by round") {
  SystemConfig base(2, 2, 2, {db_to_linear(6.0), db_to_linear(9.0)}, 3.0);
  const double p0 = outage_ir(base).value;
  SystemConfig boosted = base;
  boosted.snr_per_round[1] = db_to_linear(12.0);
  CHECK(outage_ir(boosted).value < p0);
  CHECK(outage_type1(boosted).value < outage_type1(base).value);
  CHECK(outage_cc_upper(boosted).value < outage_cc_upper(base).value);
}

TEST_CASE("limits: vanishing rate and saturating SNR") {
  const auto low_rate = SystemConfig::equal_snr_db(2, 2, 2, 5.0, 1e-3);
  CHECK(outage_ir(low_rate).value < 1e-4);

  const auto high_snr = SystemConfig::equal_snr_db(2, 2, 2, 60.0, 3.0);
  CHECK(outage_cc_upper(high_snr).value < 1e-8);
  CHECK(outage_type1(high_snr).value < 1e-10);

  const auto low_snr = SystemConfig::equal_snr_db(2, 2, 2, -25.0, 6.0);
  CHECK(outage_type1(low_snr).value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("unequal per-round SNRs feed every engine") {
  SystemConfig cfg(3, 2, 3, {db_to_linear(4.0), db_to_linear(9.0), db_to_linear(14.0)}, 3.0);
  const double t1 = outage_type1(cfg).value;
  const double cc = outage_cc_upper(cfg).value;
  const double ir = outage_ir(cfg).value;
  CHECK(t1 > 0.0);
  CHECK(t1 < 1.0);
  CHECK(ir < cc + 1e-9);
  CHECK(cc < t1);  // combining cannot hurt: bound sits below max-only decoding
}
