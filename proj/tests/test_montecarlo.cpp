// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "keyhole/exact_outage.hpp"
#include "keyhole/montecarlo.hpp"

using namespace keyhole;

TEST_CASE("fixed seed reproduces the first draw") {
  const auto cfg = SystemConfig::equal_snr_db(2, 3, 1, 10.0, 3.0);
  std::mt19937_64 a(substream_seed(42, 0));
  std::mt19937_64 b(substream_seed(42, 0));
  const auto da = draw_round(a, cfg);
  const auto db = draw_round(b, cfg);
  CHECK(da.x == db.x);
  REQUIRE(da.u.size() == db.u.size());
  for (size_t i = 0; i < da.u.size(); ++i) CHECK(da.u[i] == db.u[i]);

  std::mt19937_64 c(substream_seed(43, 0));
  CHECK(draw_round(c, cfg).x != da.x);
}

TEST_CASE("draw moments match the chi-square structure") {
  const auto cfg = SystemConfig::equal_snr_db(2, 3, 1, 10.0, 3.0);
  std::mt19937_64 rng(substream_seed(7, 0));
  const int n = 400000;
  double sum_u2 = 0.0, sum_x = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto d = draw_round(rng, cfg);
    double nu = 0.0;
    for (const auto& z : d.u) nu += std::norm(z);
    sum_u2 += nu;
    sum_x += d.x;
  }
  // E||u||^2 = N_R within 3 sigma (Var = N_R per draw)
  const double mean_u2 = sum_u2 / n;
  CHECK(std::abs(mean_u2 - 3.0) < 3.0 * std::sqrt(3.0 / n));
  // E[X] = N_T N_R within 1%
  CHECK(std::abs(sum_x / n - 6.0) / 6.0 < 0.01);
}

TEST_CASE("mutual information on a deterministic draw") {
  // all-ones vectors: ||u||^2 = ||v||^2 = 2 at N_T = N_R = 2
  const SystemConfig cfg(2, 2, 1, {1.0}, 1.0);
  ChannelDraw d;
  d.rounds.resize(1);
  d.rounds[0].u = {{1.0, 0.0}, {1.0, 0.0}};
  d.rounds[0].v = {{1.0, 0.0}, {1.0, 0.0}};
  d.rounds[0].x = 4.0;
  const double expect = std::log2(3.0);
  CHECK(mutual_info(Scheme::TypeI, d, cfg) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(mutual_info(Scheme::IR, d, cfg) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(mutual_info(Scheme::CC, d, cfg, CcVariant::True) ==
        doctest::Approx(expect).epsilon(1e-12));
  CHECK(mutual_info(Scheme::CC, d, cfg, CcVariant::LemmaBound) ==
        doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("per-draw ordering across schemes") {
  for (auto [nt, nr] : {std::pair{1, 1}, {2, 2}, {3, 2}, {2, 3}}) {
    for (int k : {1, 2, 3}) {
      const auto cfg = SystemConfig::equal_snr_db(nt, nr, k, 7.0, 3.0);
      std::mt19937_64 rng(substream_seed(99, static_cast<std::uint64_t>(nt * 10 + k)));
      for (int t = 0; t < 4000; ++t) {
        const auto d = draw_channel(rng, cfg);
        const double ir = mutual_info(Scheme::IR, d, cfg);
        const double cc = mutual_info(Scheme::CC, d, cfg, CcVariant::True);
        const double ccb = mutual_info(Scheme::CC, d, cfg, CcVariant::LemmaBound);
        const double t1 = mutual_info(Scheme::TypeI, d, cfg);
        CHECK(ir >= cc - 1e-9);
        CHECK(cc >= ccb - 1e-9);
        CHECK(cc >= t1 - 1e-9);
        if (k == 1) {
          CHECK(ir == doctest::Approx(cc).epsilon(1e-10));
          CHECK(ir == doctest::Approx(ccb).epsilon(1e-10));
          CHECK(ir == doctest::Approx(t1).epsilon(1e-10));
        }
      }
    }
  }
}

TEST_CASE("rank-one determinant update") {
  auto st = DetState::identity(3);
  Eigen::VectorXcd v(3);
  v << std::complex<double>(1.0, 0.0), std::complex<double>(0.0, 1.0),
      std::complex<double>(0.0, 0.0);
  det_rank1_update(st, 1.0, v);  // ||v||^2 = 2 -> det = 3
  CHECK(st.det == doctest::Approx(3.0).epsilon(1e-14));

  const double before = st.det;
  det_rank1_update(st, 0.0, v);
  CHECK(st.det == before);

  // sequential updates match a dense determinant
  std::mt19937_64 rng(substream_seed(5, 1));
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  auto st4 = DetState::identity(4);
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(4, 4);
  for (int k = 0; k < 3; ++k) {
    Eigen::VectorXcd w(4);
    for (int i = 0; i < 4; ++i) w(i) = std::complex<double>(nd(rng), nd(rng));
    const double alpha = 0.3 + 0.5 * k;
    det_rank1_update(st4, alpha, w);
    acc += alpha * (w * w.adjoint());
  }
  const double dense = acc.partialPivLu().determinant().real();
  CHECK(std::abs(st4.det - dense) / dense < 1e-9);
}

TEST_CASE("CC determinant: recursion and Gram form agree") {
  const auto cfg = SystemConfig::equal_snr_db(8, 2, 3, 6.0, 3.0);
  std::mt19937_64 rng(substream_seed(17, 3));
  for (int t = 0; t < 200; ++t) {
    const auto d = draw_channel(rng, cfg);
    const double a = detail::cc_true_log2_det_rank1(d, cfg);
    const double b = detail::cc_true_log2_det_gram(d, cfg);
    CHECK(std::abs(a - b) < 1e-9 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("outage estimation limits and determinism") {
  auto cfg = SystemConfig::equal_snr_db(2, 2, 2, 10.0, 3.0);
  cfg.rate = 1e-6;
  CHECK(estimate_outage(cfg, Scheme::IR, CcVariant::True, 20000, {11, 4096}).value == 0.0);
  cfg.rate = 1000.0;
  CHECK(estimate_outage(cfg, Scheme::IR, CcVariant::True, 20000, {11, 4096}).value == 1.0);

  cfg.rate = 3.0;
  const RngSpec rs{2024, 4096};
  const auto a = estimate_outage(cfg, Scheme::CC, CcVariant::True, 60000, rs);
  const auto b = estimate_outage(cfg, Scheme::CC, CcVariant::True, 60000, rs);
  const auto c =
      estimate_outage(cfg, Scheme::CC, CcVariant::True, 60000, rs, Execution::Serial);
  CHECK(a.value == b.value);
  CHECK(a.value == c.value);
  CHECK(*a.trials == 60000);
  CHECK(*a.stderr_est ==
        doctest::Approx(std::sqrt(a.value * (1.0 - a.value) / 60000)).epsilon(1e-12));
}

TEST_CASE("estimator agrees with the exact Type-I engine") {
  const auto cfg = SystemConfig::equal_snr_db(2, 2, 3, 10.0, 3.0);
  const auto mc = estimate_outage(cfg, Scheme::TypeI, CcVariant::True, 200000, {31415, 8192});
  const double exact = outage_type1(cfg).value;
  CHECK(std::abs(mc.value - exact) < 3.0 * *mc.stderr_est + 1e-7);
}

TEST_CASE("IR-CC gap summary") {
  const auto c4 = SystemConfig::equal_snr_db(4, 2, 3, 5.0, 3.0);
  const auto c16 = SystemConfig::equal_snr_db(16, 2, 3, 5.0, 3.0);
  const auto g4 = gap_ir_cc(c4, 3000, {77, 512});
  const auto g16 = gap_ir_cc(c16, 3000, {77, 512});
  CHECK(g4.min_gap >= -1e-9);
  CHECK(g16.min_gap >= -1e-9);
  CHECK(g16.mean_gap < g4.mean_gap);
  CHECK(g4.p50 <= g4.p90);
  CHECK(g4.p90 <= g4.p99);
  CHECK(g4.trials == 3000);
}
