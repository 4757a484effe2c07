// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "keyhole/inversion.hpp"
#include "keyhole/specfun.hpp"

using namespace keyhole;
using C = std::complex<double>;

TEST_CASE("bromwich inversion on the Erlang battery") {
  auto exp1 = [](C s) { return 1.0 / (1.0 + s); };
  CHECK(std::abs(inverse_laplace_cdf(exp1, 1.0) - (1.0 - std::exp(-1.0))) < 1e-8);

  auto erl2 = [](C s) { return std::pow(1.0 + s, -2); };
  CHECK(std::abs(inverse_laplace_cdf(erl2, 2.0) - (1.0 - 3.0 * std::exp(-2.0))) < 1e-8);

  auto erl5 = [](C s) { return std::pow(1.0 + s, -5); };
  CHECK(std::abs(inverse_laplace_cdf(erl5, 5.0) - 0.5595067149347876) < 1e-8);
}

TEST_CASE("bromwich error reporting") {
  auto erl3 = [](C s) { return std::pow(1.0 + s, -3); };
  const auto r = inverse_laplace_cdf_checked(erl3, 2.0);
  CHECK(r.error < 1e-7);
  CHECK(std::abs(r.value - gamma_p(3.0, 2.0)) < 1e-8);
  CHECK(r.abate_a > 10.0);
}

TEST_CASE("inverse mellin on known kernels") {
  // exponential density: phi(s) = Gamma(s)
  auto expk = [](C s) { return std::exp(ln_gamma(s)); };
  CHECK(std::abs(inverse_mellin_cdf(expk, 1.0) - (1.0 - std::exp(-1.0))) < 1e-6);

  // Erlang-2: phi(s) = Gamma(s+1)/Gamma(2)
  auto erl2 = [](C s) { return std::exp(ln_gamma(s + 1.0)); };
  CHECK(std::abs(inverse_mellin_cdf(erl2, 2.0) - (1.0 - 3.0 * std::exp(-2.0))) < 1e-6);

  // product of two unit exponentials: phi(s) = Gamma(s)^2 and
  // F(x) = 1 - 2 sqrt(x) K_1(2 sqrt(x))
  auto prod2 = [](C s) { return std::exp(2.0 * ln_gamma(s)); };
  CHECK(std::abs(inverse_mellin_cdf(prod2, 1.0) - 0.7202682363669551) < 1e-6);
  CHECK(std::abs(inverse_mellin_cdf(prod2, 0.25) - 0.3980927698027654) < 1e-6);
}

TEST_CASE("inverse mellin pole-on-contour and imaginary residue") {
  auto expk = [](C s) { return std::exp(ln_gamma(s)); };
  ContourSettings cs;
  cs.offset = 0.0;
  CHECK_THROWS_AS(inverse_mellin_cdf(expk, 1.0, cs), NumericsError);

  const auto r = inverse_mellin_cdf_checked(expk, 1.0);
  CHECK(r.im_residue < 1e-10);
}

TEST_CASE("laplace and mellin agree on shared distributions") {
  for (int k = 1; k <= 5; ++k) {
    auto lap = [k](C s) { return std::pow(1.0 + s, -k); };
    auto mel = [k](C s) { return std::exp(ln_gamma(s + (k - 1.0)) - ln_gamma_real(k)); };
    const double x = 0.7 * k;
    CHECK(std::abs(inverse_laplace_cdf(lap, x) - inverse_mellin_cdf(mel, x)) < 1e-6);
  }
}

TEST_CASE("meijer-g canonical identities") {
  ContourSettings cs;
  cs.offset = -0.5;  // left of the Gamma(-t) pole chain
  const auto e = meijer_g(1, 0, {}, {0.0}, 1.0, cs);
  CHECK(std::abs(e.value - std::exp(-1.0)) < 1e-9);

  cs.offset = 0.5;
  const auto frac = meijer_g(1, 1, {1.0}, {1.0}, 3.0, cs);
  CHECK(std::abs(frac.value - 0.75) < 1e-9);
}

TEST_CASE("meijer-g form of the keyhole CDF") {
  // G^{2,1}_{1,3}(1; 2,2,0 | 0.7) / Gamma(2)^2 = F_X(0.7) for N_T = N_R = 2
  ContourSettings cs;
  cs.offset = 1.0;  // between the Gamma(t) poles and the Gamma(2-t) poles
  const auto gv = meijer_g(2, 1, {1.0}, {2.0, 2.0, 0.0}, 0.7, cs);
  CHECK(std::abs(gv.value - 0.1424054203782067) < 1e-7);
}

TEST_CASE("mellin-barnes rejects a divergent line") {
  // 1/Gamma(1+t) grows like e^{pi |Im t| / 2} along any vertical line
  std::vector<GammaTerm> terms = {{{1.0, 0.0}, +1, true}};
  ContourSettings cs;
  cs.offset = 0.5;
  CHECK_THROWS_AS(mellin_barnes_integral(terms, 1.0, cs), NumericsError);
}
