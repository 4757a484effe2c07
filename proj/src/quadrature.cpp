// SPDX-License-Identifier: Apache-2.0

#include "keyhole/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace keyhole {

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename T>
struct Panel {
  double a, b;
  T value;
  double error;
};

template <typename T>
void gk15(const std::function<T(double)>& f, double a, double b, T& value, double& error) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const T fc = f(c);
  T resg = kWg[3] * fc;
  T resk = kWgk[7] * fc;
  double resabs = kWgk[7] * std::abs(fc);
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const T f1 = f(c - x);
    const T f2 = f(c + x);
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  value = resk * h;
  const double diff = std::abs(resk - resg) * std::abs(h);
  resabs *= std::abs(h);
  // QUADPACK-style error sharpening
  error = diff;
  if (resabs > 0.0 && diff > 0.0)
    error = resabs * std::min(1.0, std::pow(200.0 * diff / resabs, 1.5));
}

template <typename T>
QuadResult<T> adaptive(const std::function<T(double)>& f, double a, double b,
                       const QuadratureSettings& settings) {
  auto cmp = [](const Panel<T>& l, const Panel<T>& r) { return l.error < r.error; };
  std::priority_queue<Panel<T>, std::vector<Panel<T>>, decltype(cmp)> heap(cmp);

  Panel<T> root{a, b, T{}, 0.0};
  gk15(f, a, b, root.value, root.error);
  T total = root.value;
  double total_err = root.error;
  heap.push(root);

  int splits = 0;
  while (splits < settings.max_subdiv) {
    const double tol = std::max(settings.abs_tol, settings.rel_tol * std::abs(total));
    if (total_err <= tol) break;
    Panel<T> worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {  // interval exhausted at double precision
      heap.push(Panel<T>{worst.a, worst.b, worst.value, 0.0});
      continue;
    }
    Panel<T> left{worst.a, mid, T{}, 0.0};
    Panel<T> right{mid, worst.b, T{}, 0.0};
    gk15(f, left.a, left.b, left.value, left.error);
    gk15(f, right.a, right.b, right.value, right.error);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++splits;
  }

  QuadResult<T> out;
  out.value = total;
  out.error = total_err;
  out.converged = total_err <= std::max(settings.abs_tol, settings.rel_tol * std::abs(total));
  return out;
}

template <typename T>
QuadResult<T> to_inf(const std::function<T(double)>& f, double a, const QuadratureSettings& settings) {
  auto mapped = [&f, a](double t) -> T {
    const double om = 1.0 - t;
    const double x = a + t / om;
    return f(x) / (om * om);
  };
  return adaptive<T>(mapped, 0.0, 1.0, settings);
}

}  // namespace

QuadResult<double> integrate(const std::function<double(double)>& f, double a, double b,
                             const QuadratureSettings& settings) {
  return adaptive<double>(f, a, b, settings);
}

QuadResult<std::complex<double>> integrate(const std::function<std::complex<double>(double)>& f,
                                           double a, double b, const QuadratureSettings& settings) {
  return adaptive<std::complex<double>>(f, a, b, settings);
}

QuadResult<double> integrate_to_inf(const std::function<double(double)>& f, double a,
                                    const QuadratureSettings& settings) {
  return to_inf<double>(f, a, settings);
}

QuadResult<std::complex<double>> integrate_to_inf(const std::function<std::complex<double>(double)>& f,
                                                  double a, const QuadratureSettings& settings) {
  return to_inf<std::complex<double>>(f, a, settings);
}

QuadResult<std::complex<double>> integrate_exp_sinh(
    const std::function<std::complex<double>(double)>& f, const QuadratureSettings& settings) {
  using C = std::complex<double>;
  constexpr double kHalfPi = 1.57079632679489661923;

  auto term = [&f, kHalfPi](double t) -> C {
    const double sh = kHalfPi * std::sinh(t);
    if (sh > 700.0 || sh < -745.0) return C{0.0, 0.0};
    const double x = std::exp(sh);
    const double w = x * kHalfPi * std::cosh(t);
    if (!std::isfinite(w)) return C{0.0, 0.0};
    const C v = f(x) * w;
    return std::isfinite(v.real()) && std::isfinite(v.imag()) ? v : C{0.0, 0.0};
  };

  double h = 0.5;
  // level 0 sum at spacing h; the integrand can be zero near t = 0 with all
  // of its mass in a far window, so only stop early once mass has been seen
  auto sweep = [&term](double step, double start) {
    C acc{0.0, 0.0};
    for (int dir : {+1, -1}) {
      double max_mag = 0.0;
      int consecutive_small = 0;
      for (int j = (dir > 0 ? 0 : 1);; ++j) {
        const double t = start + dir * j * step;
        if (std::abs(t) > 6.8) break;  // x spans e^{+-700}: double range exhausted
        const C v = term(t);
        acc += v;
        const double m = std::abs(v);
        max_mag = std::max(max_mag, m);
        if (max_mag > 0.0 && m < 1e-17 * max_mag)
          ++consecutive_small;
        else
          consecutive_small = 0;
        if (consecutive_small > 8) break;
      }
    }
    return acc;
  };

  C prev = sweep(h, 0.0) * h;
  QuadResult<C> out;
  for (int level = 0; level < 10; ++level) {
    const double h2 = 0.5 * h;
    // refined grid = old points + midpoints
    const C mids = sweep(h, h2);
    const C cur = 0.5 * prev + mids * h2;
    out.error = std::abs(cur - prev);
    out.value = cur;
    h = h2;
    prev = cur;
    const double tol = std::max(settings.abs_tol, settings.rel_tol * std::abs(cur));
    if (level >= 2 && out.error <= tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace keyhole
