// SPDX-License-Identifier: Apache-2.0
//
// Small quadrature toolkit: globally adaptive Gauss-Kronrod 15 on finite
// intervals (real or complex integrands), a semi-infinite wrapper, and a
// double-exponential rule for decaying integrands on (0, inf).

#pragma once

#include <complex>
#include <functional>
#include <stdexcept>

namespace keyhole {

/// Convergence failure inside a numerical engine (quadrature, contour
/// inversion, special function). Callers treat this as "no result", never
/// as a value to propagate.
class NumericsError : public std::runtime_error {
 public:
  explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

struct QuadratureSettings {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int max_subdiv = 4000;
};

template <typename T>
struct QuadResult {
  T value{};
  double error = 0.0;     // absolute error estimate
  bool converged = false;
};

QuadResult<double> integrate(const std::function<double(double)>& f, double a, double b,
                             const QuadratureSettings& settings = {});

QuadResult<std::complex<double>> integrate(const std::function<std::complex<double>(double)>& f,
                                           double a, double b,
                                           const QuadratureSettings& settings = {});

/// Integral over (a, inf) via the rational map x = a + t/(1-t).
QuadResult<double> integrate_to_inf(const std::function<double(double)>& f, double a,
                                    const QuadratureSettings& settings = {});

QuadResult<std::complex<double>> integrate_to_inf(const std::function<std::complex<double>(double)>& f,
                                                  double a, const QuadratureSettings& settings = {});

/// Double-exponential (exp-sinh) rule for ∫_0^inf f(x) dx, f decaying at
/// both ends after the map x = exp((pi/2) sinh t). Error estimated from
/// successive level halving.
QuadResult<std::complex<double>> integrate_exp_sinh(
    const std::function<std::complex<double>(double)>& f, const QuadratureSettings& settings = {});

}  // namespace keyhole
