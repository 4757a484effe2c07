// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "keyhole/inversion.hpp"
#include "keyhole/keyhole_dist.hpp"
#include "keyhole/quadrature.hpp"

using namespace keyhole;
using C = std::complex<double>;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_CASE("pdf values") {
  const KeyholeGainDist d11(1, 1);
  CHECK(rel(pdf_x(d11, 0.25), 0.8420488764814167) < 1e-10);  // 2 K_0(1)
  const KeyholeGainDist d22(2, 2);
  CHECK(rel(pdf_x(d22, 1.0), 0.2277877454990669) < 1e-10);   // 2 K_0(2)
  CHECK_THROWS_AS(pdf_x(d11, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(pdf_x(d11, -1.0), std::invalid_argument);
}

TEST_CASE("cdf frozen values and endpoints") {
  const KeyholeGainDist d11(1, 1);
  CHECK(cdf_x(d11, 0.0) == 0.0);
  CHECK(std::abs(cdf_x(d11, 1.0) - 0.7202682363669551) < 1e-9);
  CHECK(std::abs(cdf_x(d11, 7.0) - 0.9845103963645572) < 1e-9);
  const KeyholeGainDist d22(2, 2);
  CHECK(std::abs(cdf_x(d22, 0.7) - 0.1424054203782067) < 1e-9);
  const KeyholeGainDist d23(2, 3);
  CHECK(std::abs(cdf_x(d23, 2.0) - 0.2418633859669086) < 1e-9);
}

TEST_CASE("cdf is a proper distribution function") {
  for (int nt : {1, 2, 3}) {
    for (int nr : {1, 2, 4}) {
      const KeyholeGainDist d(nt, nr);
      double prev = 0.0;
      for (double lx = -4.0; lx <= 3.0; lx += 0.25) {
        const double f = cdf_x(d, std::pow(10.0, lx));
        CHECK(f >= prev - 1e-12);
        CHECK(f <= 1.0);
        prev = f;
      }
      CHECK(cdf_x(d, 1e6) == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("cdf agrees with its Meijer-G form") {
  const KeyholeGainDist d22(2, 2);
  CHECK(std::abs(cdf_x_meijer(d22, 0.7) - cdf_x(d22, 0.7)) < 1e-6);
  const KeyholeGainDist d32(3, 2);
  CHECK(std::abs(cdf_x_meijer(d32, 1.3) - cdf_x(d32, 1.3)) < 1e-6);
}

TEST_CASE("laplace factor values and limits") {
  const KeyholeGainDist d11(1, 1);
  // E[e^{-X}] for the product of two unit exponentials = e E_1(1)
  CHECK(std::abs(laplace_factor(d11, 1.0, 1, {1.0, 0.0}).real() - 0.5963473623231941) <
        1e-9);
  // s -> 0+ limit
  CHECK(std::abs(laplace_factor(d11, 1.0, 1, {1e-8, 0.0}).real() - 1.0) < 1e-6);

  // dual routes agree at a genuinely complex point
  const KeyholeGainDist d32(3, 2);
  const C s{0.7, 2.0};
  const C closed = laplace_factor(d32, 10.0, 3, s);
  const C quad = laplace_factor_quadrature(d32, 10.0, 3, s);
  CHECK(std::abs(closed - quad) / std::abs(quad) < 1e-8);

  CHECK_THROWS_AS(laplace_factor(d11, 1.0, 1, {-0.5, 1.0}), std::invalid_argument);
}

TEST_CASE("laplace factor on the real axis is a survival-style transform") {
  const KeyholeGainDist d23(2, 3);
  double prev = 1.0;
  for (double s : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const C v = laplace_factor(d23, 5.0, 2, {s, 0.0});
    CHECK(std::abs(v.imag()) < 1e-12);
    CHECK(v.real() > 0.0);
    CHECK(v.real() < prev);
    prev = v.real();
  }
  // -d/ds at 0 equals E[(gamma/N_T) X] = (gamma/N_T) N_T N_R
  const double h = 1e-7;
  const double d0 = (1.0 - laplace_factor(d23, 5.0, 2, {h, 0.0}).real()) / h;
  CHECK(rel(d0, 5.0 / 2.0 * 2.0 * 3.0) < 1e-4);
}

TEST_CASE("mellin factor trivial points") {
  const KeyholeGainDist d11(1, 1);
  CHECK(std::abs(mellin_factor(d11, 1.0, {1.0, 0.0}).real() - 1.0) < 1e-9);
  CHECK(std::abs(mellin_factor(d11, 1.0, {2.0, 0.0}).real() - 2.0) < 1e-8);

  const auto cfg23 = SystemConfig(2, 3, 1, {1.0}, 3.0);
  CHECK(std::abs(mellin_kernel(cfg23, {2.0, 0.0}).real() - 4.0) < 1e-8);

  // product structure over rounds
  const auto cfg2 = SystemConfig(2, 2, 2, {2.0, 8.0}, 3.0);
  const KeyholeGainDist d22(2, 2);
  const C s{-0.5, 1.0};
  const C prod = mellin_factor(d22, 1.0, s) * mellin_factor(d22, 4.0, s);
  CHECK(std::abs(mellin_kernel(cfg2, s) - prod) < 1e-8 * std::abs(prod));
}

TEST_CASE("mellin factor agrees with the Meijer-G product form on the contour") {
  const KeyholeGainDist d22(2, 2);
  const KeyholeGainDist d32(3, 2);
  for (double om : {0.0, 1.5, 7.0, 20.0}) {
    const C s{-0.5, om};
    const C a = mellin_factor(d22, 1.58, s + 1.0);
    const C b = mellin_factor_meijer(d22, 1.58, s + 1.0);
    CHECK(std::abs(a - b) < 1e-6 * std::abs(a));
    const C a2 = mellin_factor(d32, 3.3, s + 1.0);
    const C b2 = mellin_factor_meijer(d32, 3.3, s + 1.0);
    CHECK(std::abs(a2 - b2) < 1e-6 * std::abs(a2));
  }
}

TEST_CASE("bromwich of the K=1 laplace factor reproduces the scaled cdf") {
  // ties the MGF route to the direct CDF: F_{(g/N)X}(x) = F_X(N x / g)
  const KeyholeGainDist d22(2, 2);
  const double g = 4.0;
  auto transform = [&](C s) { return laplace_factor(d22, g, 2, s); };
  for (double x : {0.5, 2.0, 6.0}) {
    const double via_bromwich = inverse_laplace_cdf(transform, x);
    const double direct = cdf_x(d22, 2.0 * x / g);
    CHECK(std::abs(via_bromwich - direct) < 1e-6);
  }
}

TEST_CASE("mellin factor grid reproduces the quadrature factor") {
  const KeyholeGainDist d22(2, 2);
  const double a = db_to_linear(10.0) / 2.0;
  const MellinFactorGrid grid(d22, a, 400.0);

  CHECK(std::abs(grid.eval({0.0, 0.0}).real() - 1.0) < 1e-7);
  CHECK(rel(grid.eval({1.0, 0.0}).real(), 1.0 + a * 4.0) < 1e-6);

  for (double om : {0.0, 3.0, 25.0, 120.0}) {
    for (double sg : {-0.4, -1.5, -3.0}) {
      const C s{sg, om};
      const C direct = mellin_factor(d22, a, s + 1.0);  // E[(1+aX)^s]
      const C fast = grid.eval(s);
      CHECK(std::abs(direct - fast) < 2e-7 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST_CASE("grid contour evaluation matches pointwise evaluation") {
  const KeyholeGainDist d32(3, 2);
  const MellinFactorGrid grid(d32, 2.2, 300.0);
  const int n = 1500;
  std::vector<C> out(static_cast<size_t>(n));
  grid.eval_contour(-1.25, 0.0, 0.05, n, out.data());
  for (int j : {0, 1, 17, 800, 1499}) {
    const C ref = grid.eval({-1.25, 0.05 * j});
    CHECK(std::abs(out[static_cast<size_t>(j)] - ref) < 1e-10 * std::max(1.0, std::abs(ref)));
  }
}
