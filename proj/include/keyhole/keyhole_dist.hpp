// SPDX-License-Identifier: Apache-2.0
//
// Distribution of the per-round keyhole gain X = ||u||^2 ||v||^2 (product
// of two chi-square-type variables) and its integral transforms. This is
// the analytic substrate shared by the Type-I, CC and IR outage engines.

#pragma once

#include <complex>
#include <vector>

#include "keyhole/core_model.hpp"
#include "keyhole/inversion.hpp"
#include "keyhole/quadrature.hpp"

namespace keyhole {

struct KeyholeGainDist {
  AntennaProfile profile;

  KeyholeGainDist() = default;
  explicit KeyholeGainDist(AntennaProfile p) : profile(p) {}
  KeyholeGainDist(int n_t, int n_r) : profile(antenna_profile(n_t, n_r)) {}
};

/// Density f(x) = 2 x^{(N_T+N_R)/2 - 1} K_tau(2 sqrt x) / (G(N_T) G(N_R)).
double pdf_x(const KeyholeGainDist& dist, double x);
double ln_pdf_x(const KeyholeGainDist& dist, double x);

/// CDF by adaptive quadrature of the density (integrated in w = sqrt(x);
/// complement form on the right half for absolute accuracy near 1).
double cdf_x(const KeyholeGainDist& dist, double x);

/// CDF through the Meijer-G contour form; cross-check route only.
double cdf_x_meijer(const KeyholeGainDist& dist, double x, const ContourSettings& settings = {});

/// Per-round Laplace factor L_k(s) = E[exp(-s (gamma_k/N_T) X)], Re(s) > 0.
/// Closed form through the Tricomi function; falls back to direct
/// quadrature when the Tricomi evaluation flags low accuracy, and raises
/// NumericsError if the two routes disagree beyond 1e-7 relative.
std::complex<double> laplace_factor(const KeyholeGainDist& dist, double gamma_k, int n_t,
                                    std::complex<double> s);

/// Quadrature route for the same factor (oracle / fallback).
std::complex<double> laplace_factor_quadrature(const KeyholeGainDist& dist, double gamma_k,
                                               int n_t, std::complex<double> s);

/// One factor of the Mellin kernel: E[(1 + a X)^{s-1}] with a = gamma/N_T,
/// by adaptive quadrature against the density.
std::complex<double> mellin_factor(const KeyholeGainDist& dist, double a,
                                   std::complex<double> s);

/// Same factor through the paper-form Meijer-G contour (cross-check);
/// valid for Re(s) < 1.
std::complex<double> mellin_factor_meijer(const KeyholeGainDist& dist, double a,
                                          std::complex<double> s,
                                          const ContourSettings& settings = {});

/// Mellin transform of the accumulated IR gain's PDF:
///   phi(s) = prod_k E[(1 + gamma_k X / N_T)^{s-1}].
std::complex<double> mellin_kernel(const SystemConfig& config, std::complex<double> s);

/// Precomputed piecewise representation of one round's transformed density
/// h(z) = f_X((e^z - 1)/a) e^z / a on z = ln(1 + a x), supporting fast
/// evaluation of E[(1+aX)^s] = \int e^{s z} h(z) dz for many s on a
/// vertical contour: a short power-moment series covers (0, z_head] and
/// quadratic panels with exact exponential moments cover the rest, so the
/// cost per contour point is independent of the oscillation frequency.
class MellinFactorGrid {
 public:
  MellinFactorGrid(const KeyholeGainDist& dist, double a, double max_abs_s);

  /// E[(1 + a X)^s] for one s (Re(s) <= 0 intended).
  std::complex<double> eval(std::complex<double> s) const;

  /// Fills out[j] = E[(1+aX)^{sigma + i (omega0 + j domega)}] for
  /// j = 0..count-1. OpenMP-parallel over chunks; output is bit-identical
  /// to the serial evaluation because every element is computed
  /// independently from an analytic chunk seed.
  void eval_contour(double sigma, double omega0, double domega, int count,
                    std::complex<double>* out) const;

  double max_abs_s() const { return max_abs_s_; }
  double head_cut() const { return z_head_; }

 private:
  void build(const KeyholeGainDist& dist);
  // panel layout
  std::vector<double> z_mid_, z_half_;             // midpoints and half-widths
  std::vector<double> c0_, c1_, c2_;               // quadratic coefficients of h
  std::vector<double> head_moments_;               // M_p = \int_0^{z_head} z^p h dz
  double a_ = 1.0;
  double z_head_ = 0.0;
  double z_max_ = 0.0;
  double max_abs_s_ = 0.0;
};

}  // namespace keyhole
