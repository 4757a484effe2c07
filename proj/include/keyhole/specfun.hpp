// SPDX-License-Identifier: Apache-2.0
//
// From-scratch special functions backing the analytic outage engines:
// complex log-gamma, integer-order modified Bessel K (plain, scaled and
// small-argument forms), the Tricomi confluent hypergeometric function on
// Re(z) > 0, and the regularized incomplete gamma.

#pragma once

#include <complex>

#include "keyhole/quadrature.hpp"

namespace keyhole {

/// Principal-branch log-gamma (Lanczos g=7 with reflection).
/// Throws std::invalid_argument at nonpositive-integer poles.
std::complex<double> ln_gamma(std::complex<double> z);

/// ln Gamma for real positive argument (same Lanczos path).
double ln_gamma_real(double x);

struct BesselKResult {
  double value = 0.0;
  bool underflowed = false;  // e^{-x} range exhausted; value reported as 0
};

/// K_tau(x) for integer tau >= 0, x > 0, accurate to ~1e-12 relative over
/// x in [1e-8, 700]. Series below x = 2, cosh-integral above, upward
/// recurrence in the order.
double bessel_k_int(int tau, double x);
BesselKResult bessel_k_int_checked(int tau, double x);

/// ln K_tau(x); usable far beyond the overflow range of bessel_k_int
/// (large order or large argument).
double ln_bessel_k_int(int tau, double x);

/// Leading small-argument form: (1/2) Gamma(tau) (x/2)^{-tau} for tau > 0,
/// -ln(x) for tau = 0.
double bessel_k_small_x(int tau, double x);

struct TricomiResult {
  std::complex<double> value{};
  double error = 0.0;
  bool converged = false;
};

/// Tricomi Psi(a, b; z) for a > 0, Re(z) > 0, via the Laplace-type
/// integral representation after t = e^u - 1, integrated with a
/// double-exponential rule.
TricomiResult tricomi_u_checked(double a, double b, std::complex<double> z);
std::complex<double> tricomi_u(double a, double b, std::complex<double> z);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);

}  // namespace keyhole
