// SPDX-License-Identifier: Apache-2.0

#include "keyhole/inversion.hpp"

#include <cmath>
#include <stdexcept>

#include "keyhole/specfun.hpp"

namespace keyhole {

namespace {

constexpr double kPi = 3.14159265358979323846;
// e^{-A} is the Abate-Whitt discretization error level.
constexpr double kAbateA = 18.420680743952367;  // ln(1e8)

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / i;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Bromwich / Abate-Whitt with Euler summation
// ---------------------------------------------------------------------------

InversionResult inverse_laplace_cdf_checked(const TransformFn& transform, double x,
                                            const ContourSettings& settings) {
  if (!(x > 0.0)) throw std::invalid_argument("inverse_laplace_cdf: requires x > 0");
  const double a_par = settings.offset > 0.0 ? 2.0 * settings.offset * x : kAbateA;
  const double pref = std::exp(0.5 * a_par) / (2.0 * x);

  const int m = std::max(2, settings.euler_terms);
  int n = std::max(4, settings.series_terms);
  const int max_terms = 512;

  InversionResult out;
  for (;;) {
    const int total = n + m + 2;
    std::vector<double> terms(static_cast<size_t>(total) + 1);
    for (int k = 0; k <= total; ++k) {
      const std::complex<double> s(0.5 * a_par / x, k * kPi / x);
      const std::complex<double> g = transform(s) / s;
      if (!std::isfinite(g.real()) || !std::isfinite(g.imag()))
        throw NumericsError("inverse_laplace_cdf: transform not finite on contour");
      const double re = g.real();
      terms[static_cast<size_t>(k)] = (k == 0) ? re : 2.0 * ((k % 2) ? -re : re);
    }
    // partial sums
    std::vector<double> s_part(terms.size());
    double acc = 0.0;
    for (size_t k = 0; k < terms.size(); ++k) {
      acc += terms[k];
      s_part[k] = acc;
    }
    auto euler = [&](int n0) {
      double e = 0.0;
      for (int j = 0; j <= m; ++j)
        e += binomial(m, j) * s_part[static_cast<size_t>(n0 + j)];
      return e * std::pow(2.0, -m);
    };
    const double est = euler(n);
    const double est_lo = euler(n - 2);
    out.value = pref * est;
    out.euler_tail = pref * std::abs(est - est_lo);
    out.abate_a = a_par;
    out.error = out.euler_tail + std::exp(-a_par) * std::max(1.0, std::abs(out.value));

    const double tol = std::max(1e-8, 1e-8 * std::abs(out.value));
    if (out.error <= tol || n >= max_terms) break;
    n *= 2;
  }
  if (out.error > std::max(1e-6, 0.5 * std::abs(out.value)))
    throw NumericsError("inverse_laplace_cdf: Euler tail estimate exceeds tolerance");
  return out;
}

double inverse_laplace_cdf(const TransformFn& transform, double x,
                           const ContourSettings& settings) {
  return inverse_laplace_cdf_checked(transform, x, settings).value;
}

// ---------------------------------------------------------------------------
// Generic trapezoidal contour integration (shared by the Mellin engines)
// ---------------------------------------------------------------------------

namespace {

// Trapezoid of g over [-T, T] with `steps` panels; g is the full complex
// contour integrand as a function of the imaginary coordinate.
std::complex<double> trapezoid_line(const std::function<std::complex<double>(double)>& g,
                                    double half_width, int steps, double* tail_mag) {
  const double h = 2.0 * half_width / steps;
  std::complex<double> acc{0.0, 0.0};
  double tail = 0.0;
  for (int j = 0; j <= steps; ++j) {
    const double w = -half_width + j * h;
    std::complex<double> v = g(w);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NumericsError("contour integrand not finite (pole on contour?)");
    if (j == 0 || j == steps) {
      v *= 0.5;
      tail = std::max(tail, std::abs(v));
    }
    acc += v;
  }
  if (tail_mag) *tail_mag = tail;
  return acc * h;
}

// Adaptive driver: double the step count until the value is stable, then
// extend the truncation until the endpoint contribution is negligible.
InversionResult adaptive_contour(const std::function<std::complex<double>(double)>& g,
                                 const ContourSettings& settings, double abs_target) {
  double T = settings.half_width;
  int steps = std::max(64, settings.steps);
  // start cheap; the doubling loop below restores the requested resolution
  int cur_steps = std::max(64, steps / 8);

  std::complex<double> val{};
  double tail = 0.0;
  double step_err = 0.0;

  for (int rounds = 0; rounds < 24; ++rounds) {
    val = trapezoid_line(g, T, cur_steps, &tail);
    // refine steps at fixed T
    for (int r = 0; r < 12; ++r) {
      const int next = cur_steps * 2;
      const std::complex<double> v2 = trapezoid_line(g, T, next, &tail);
      step_err = std::abs(v2 - val);
      val = v2;
      cur_steps = next;
      if (step_err <= 0.25 * std::max(abs_target, 1e-3 * std::abs(v2))) break;
      if (cur_steps >= steps * 16) break;
    }
    // estimate truncation from the endpoint magnitude;
    // extend T when the tail is not yet negligible
    const double trunc_est = tail * T;  // crude overestimate of the remaining tail
    if (trunc_est <= 0.5 * std::max(abs_target, 1e-6 * std::abs(val)) || T >= settings.half_width * 64) {
      InversionResult out;
      out.value = val.real() / (2.0 * kPi);
      out.im_residue = std::abs(val.imag()) / (2.0 * kPi);
      out.error = (step_err + trunc_est) / (2.0 * kPi);
      return out;
    }
    T *= 2.0;
    cur_steps *= 2;
  }
  throw NumericsError("contour integral: truncated tail exceeds tolerance");
}

}  // namespace

// ---------------------------------------------------------------------------
// Inverse Mellin CDF
// ---------------------------------------------------------------------------

InversionResult inverse_mellin_cdf_checked(const TransformFn& kernel, double x,
                                           const ContourSettings& settings) {
  if (!(x > 0.0)) throw std::invalid_argument("inverse_mellin_cdf: requires x > 0");
  if (settings.offset == 0.0)
    throw NumericsError("inverse_mellin_cdf: pole on contour (offset == 0)");

  const double c = settings.offset;
  const double lx = std::log(x);
  auto g = [&kernel, c, lx](double w) -> std::complex<double> {
    const std::complex<double> s(c, w);
    return std::exp(-s * lx) * kernel(s + 1.0) / (-s);
  };
  InversionResult r = adaptive_contour(g, settings, 1e-7);
  if (r.error > 1e-6 + 1e-6 * std::abs(r.value))
    throw NumericsError("inverse_mellin_cdf: error estimate exceeds tolerance");
  return r;
}

double inverse_mellin_cdf(const TransformFn& kernel, double x, const ContourSettings& settings) {
  return inverse_mellin_cdf_checked(kernel, x, settings).value;
}

// ---------------------------------------------------------------------------
// Mellin-Barnes / Meijer-G
// ---------------------------------------------------------------------------

InversionResult mellin_barnes_integral(const std::vector<GammaTerm>& terms, double z,
                                       const ContourSettings& settings) {
  if (!(z > 0.0)) throw std::invalid_argument("mellin_barnes_integral: requires z > 0");
  const double c = settings.offset;
  const double lz = std::log(z);
  auto g = [&terms, c, lz](double w) -> std::complex<double> {
    const std::complex<double> t(c, w);
    std::complex<double> log_sum = t * lz;
    for (const auto& term : terms) {
      const std::complex<double> arg =
          term.sign > 0 ? term.shift + t : term.shift - t;
      const std::complex<double> lg = ln_gamma(arg);
      log_sum += term.denominator ? -lg : lg;
    }
    if (log_sum.real() > 700.0)
      throw NumericsError("mellin_barnes_integral: integrand overflow (divergent line?)");
    return std::exp(log_sum);
  };
  return adaptive_contour(g, settings, 1e-9);
}

InversionResult meijer_g(int m, int n, const std::vector<double>& a,
                         const std::vector<double>& b, double z,
                         const ContourSettings& settings) {
  const int p = static_cast<int>(a.size());
  const int q = static_cast<int>(b.size());
  if (m < 0 || m > q || n < 0 || n > p)
    throw std::invalid_argument("meijer_g: invalid (m, n) for the given parameter lists");
  std::vector<GammaTerm> terms;
  for (int j = 0; j < m; ++j) terms.push_back({{b[j], 0.0}, -1, false});
  for (int j = 0; j < n; ++j) terms.push_back({{1.0 - a[j], 0.0}, +1, false});
  for (int j = m; j < q; ++j) terms.push_back({{1.0 - b[j], 0.0}, +1, true});
  for (int j = n; j < p; ++j) terms.push_back({{a[j], 0.0}, -1, true});
  return mellin_barnes_integral(terms, z, settings);
}

}  // namespace keyhole
