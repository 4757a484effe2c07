// SPDX-License-Identifier: Apache-2.0

#include "keyhole/keyhole_dist.hpp"

#include <algorithm>
#include <cmath>

#include "keyhole/specfun.hpp"

namespace keyhole {

namespace {

// log of the density integrand in w = sqrt(x):  F(x) = int_0^sqrt(x) g(w) dw,
// g(w) = 4 w^{N_T+N_R-1} K_tau(2w) / (G(N_T) G(N_R))
double ln_density_w(const AntennaProfile& p, double w) {
  if (w <= 0.0) return -std::numeric_limits<double>::infinity();
  const int pw = p.n_min + p.n_max - 1;
  return std::log(4.0) + pw * std::log(w) + ln_bessel_k_int(p.tau, 2.0 * w) -
         ln_gamma_real(p.n_min) - ln_gamma_real(p.n_max);
}

// rightmost w where the density integrand still matters at 1e-21 relative
double density_w_end(const AntennaProfile& p) {
  const double pw = p.n_min + p.n_max - 1;
  const double w_peak = std::max(0.5 * pw, 0.5);
  const double ln_peak = ln_density_w(p, w_peak);
  double w = w_peak + 1.0;
  double step = 1.0;
  while (ln_density_w(p, w) > ln_peak - 50.0) {
    w += step;
    step *= 1.5;
  }
  return w;
}

// integral of the density over [w_lo, w_hi], computed around a probed
// log-scale maximum so that huge antenna counts stay in range
double density_integral(const AntennaProfile& p, double w_lo, double w_hi) {
  if (w_hi <= w_lo) return 0.0;
  double m = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 8; ++i) {
    const double w = w_lo + (w_hi - w_lo) * i / 8.0;
    if (w > 0.0) m = std::max(m, ln_density_w(p, w));
  }
  if (m == -std::numeric_limits<double>::infinity()) return 0.0;
  QuadratureSettings qs;
  qs.rel_tol = 1e-11;
  qs.abs_tol = 1e-290;
  qs.max_subdiv = 6000;
  auto f = [&p, m](double w) { return w <= 0.0 ? 0.0 : std::exp(ln_density_w(p, w) - m); };
  const auto r = integrate(std::function<double(double)>(f), w_lo, w_hi, qs);
  if (!r.converged && r.error > 1e-8 * std::abs(r.value))
    throw NumericsError("keyhole density quadrature did not converge");
  return r.value * std::exp(m);
}

}  // namespace

double ln_pdf_x(const KeyholeGainDist& dist, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("pdf_x: requires x > 0");
  const auto& p = dist.profile;
  const double half = 0.5 * (p.n_min + p.n_max);
  return std::log(2.0) + (half - 1.0) * std::log(x) + ln_bessel_k_int(p.tau, 2.0 * std::sqrt(x)) -
         ln_gamma_real(p.n_min) - ln_gamma_real(p.n_max);
}

double pdf_x(const KeyholeGainDist& dist, double x) {
  const double lp = ln_pdf_x(dist, x);
  return lp < -708.0 ? 0.0 : std::exp(lp);
}

double cdf_x(const KeyholeGainDist& dist, double x) {
  if (x < 0.0) throw std::invalid_argument("cdf_x: requires x >= 0");
  if (x == 0.0) return 0.0;
  const auto& p = dist.profile;
  const double w = std::sqrt(x);
  const double mean = static_cast<double>(p.n_min) * p.n_max;  // E[X]
  if (x <= mean) return std::min(1.0, density_integral(p, 0.0, w));
  const double w_end = density_w_end(p);
  if (w >= w_end) return 1.0;
  return std::max(0.0, 1.0 - density_integral(p, w, w_end));
}

double cdf_x_meijer(const KeyholeGainDist& dist, double x, const ContourSettings& settings) {
  if (!(x > 0.0)) throw std::invalid_argument("cdf_x_meijer: requires x > 0");
  const auto& p = dist.profile;
  // G^{2,1}_{1,3}(1; N_T, N_R, 0 | x) / (G(N_T) G(N_R)); contour between
  // the Gamma(t) poles (t <= 0) and the Gamma(N - t) poles (t >= n_min)
  ContourSettings cs = settings;
  cs.offset = 0.5 * p.n_min;
  const auto g = meijer_g(2, 1, {1.0},
                          {static_cast<double>(p.n_max), static_cast<double>(p.n_min), 0.0}, x, cs);
  return g.value / std::exp(ln_gamma_real(p.n_min) + ln_gamma_real(p.n_max));
}

// ---------------------------------------------------------------------------
// Laplace factor
// ---------------------------------------------------------------------------

std::complex<double> laplace_factor_quadrature(const KeyholeGainDist& dist, double gamma_k,
                                               int n_t, std::complex<double> s) {
  if (!(s.real() > 0.0))
    throw std::invalid_argument("laplace_factor: requires Re(s) > 0");
  const auto& p = dist.profile;
  const double damp = s.real() * gamma_k / n_t;
  const double w_end = std::min(density_w_end(p), std::sqrt(60.0 / damp) + 2.0);

  double m = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 8; ++i) {
    const double w = w_end * i / 8.0;
    if (w > 0.0) m = std::max(m, ln_density_w(p, w) - damp * w * w);
  }
  const std::complex<double> cs = s * (gamma_k / n_t);
  auto f = [&p, cs, m](double w) -> std::complex<double> {
    if (w <= 0.0) return {0.0, 0.0};
    return std::exp(std::complex<double>(ln_density_w(p, w) - m, 0.0) - cs * (w * w));
  };
  QuadratureSettings qs;
  qs.rel_tol = 1e-12;
  qs.abs_tol = 1e-290;
  qs.max_subdiv = 12000;
  const auto r = integrate(std::function<std::complex<double>(double)>(f), 0.0, w_end, qs);
  if (!r.converged && r.error > 1e-9 * std::abs(r.value))
    throw NumericsError("laplace_factor quadrature did not converge");
  return r.value * std::exp(m);
}

std::complex<double> laplace_factor(const KeyholeGainDist& dist, double gamma_k, int n_t,
                                    std::complex<double> s) {
  if (!(gamma_k > 0.0)) throw std::invalid_argument("laplace_factor: requires gamma > 0");
  if (!(s.real() > 0.0)) throw std::invalid_argument("laplace_factor: requires Re(s) > 0");
  const auto& p = dist.profile;
  const std::complex<double> z = static_cast<double>(n_t) / (gamma_k * s);
  const auto t = tricomi_u_checked(p.n_max, p.tau + 1.0, z);
  const std::complex<double> closed = std::pow(z, p.n_max) * t.value;
  if (t.converged && t.error <= 1e-10 * (std::abs(t.value) + 1e-300)) return closed;

  const std::complex<double> quad = laplace_factor_quadrature(dist, gamma_k, n_t, s);
  if (std::abs(closed - quad) > 1e-7 * std::max(std::abs(quad), 1e-300))
    throw NumericsError("laplace_factor: closed form and quadrature disagree");
  return quad;
}

// ---------------------------------------------------------------------------
// Mellin factor / kernel
// ---------------------------------------------------------------------------

std::complex<double> mellin_factor(const KeyholeGainDist& dist, double a,
                                   std::complex<double> s) {
  if (!(a > 0.0)) throw std::invalid_argument("mellin_factor: requires a > 0");
  const auto& p = dist.profile;
  const double w_end = density_w_end(p);
  double m = -std::numeric_limits<double>::infinity();
  const double sig = s.real() - 1.0;
  for (int i = 0; i <= 8; ++i) {
    const double w = w_end * i / 8.0;
    if (w > 0.0) m = std::max(m, ln_density_w(p, w) + sig * std::log1p(a * w * w));
  }
  const std::complex<double> sm1 = s - 1.0;
  auto f = [&p, a, sm1, m](double w) -> std::complex<double> {
    if (w <= 0.0) return {0.0, 0.0};
    const std::complex<double> e =
        std::complex<double>(ln_density_w(p, w) - m, 0.0) + sm1 * std::log1p(a * w * w);
    return std::exp(e);
  };
  QuadratureSettings qs;
  qs.rel_tol = 1e-11;
  qs.abs_tol = 1e-290;
  qs.max_subdiv = (2000 + static_cast<int>(10.0 * std::abs(s.imag())));
  const auto r = integrate(std::function<std::complex<double>(double)>(f), 0.0, w_end, qs);
  if (!r.converged && r.error > 1e-8 * std::abs(r.value))
    throw NumericsError("mellin_factor quadrature did not converge");
  return r.value * std::exp(m);
}

std::complex<double> mellin_factor_meijer(const KeyholeGainDist& dist, double a,
                                          std::complex<double> s,
                                          const ContourSettings& settings) {
  if (!(s.real() < 1.0))
    throw std::invalid_argument("mellin_factor_meijer: requires Re(s) < 1");
  (void)settings;
  const auto& p = dist.profile;
  const std::complex<double> one_m_s = 1.0 - s;
  // G^{3,1}_{1,3}(1; 1-s, N_T, N_R | N_T/gamma) expanded into its contour
  // form; the factor is complex for complex s, so integrate the full
  // integrand here instead of going through the real-valued engine.
  const double c = 0.5 * std::min(static_cast<double>(p.n_min), one_m_s.real());
  const double z = 1.0 / a;  // = N_T / gamma
  const double lz = std::log(z);
  auto g = [&](double w) -> std::complex<double> {
    const std::complex<double> t(c, w);
    const std::complex<double> lg = ln_gamma(t) + ln_gamma(one_m_s - t) +
                                    ln_gamma(static_cast<double>(p.n_max) - t) +
                                    ln_gamma(static_cast<double>(p.n_min) - t) + t * lz;
    return std::exp(lg);
  };
  QuadratureSettings qs;
  qs.rel_tol = 1e-10;
  qs.abs_tol = 1e-16;
  qs.max_subdiv = 20000;
  const double T = std::max(60.0, 4.0 * std::abs(s.imag()) + 60.0);
  const auto r = integrate(std::function<std::complex<double>(double)>(g), -T, T, qs);
  const std::complex<double> norm =
      std::exp(ln_gamma(std::complex<double>(p.n_min, 0.0)) +
               ln_gamma(std::complex<double>(p.n_max, 0.0)) + ln_gamma(one_m_s));
  return r.value / (2.0 * 3.14159265358979323846 * norm);
}

std::complex<double> mellin_kernel(const SystemConfig& config, std::complex<double> s) {
  config.validate();
  const KeyholeGainDist dist(config.n_t, config.n_r);
  std::complex<double> prod{1.0, 0.0};
  for (int k = 0; k < config.k_max; ++k)
    prod *= mellin_factor(dist, config.snr_per_round[static_cast<size_t>(k)] / config.n_t, s);
  return prod;
}

// ---------------------------------------------------------------------------
// MellinFactorGrid
// ---------------------------------------------------------------------------

namespace {

// exact moments of e^{beta tau} against 1, tau, tau^2 on [-1, 1]
inline void filon_moments(std::complex<double> beta, std::complex<double> ep,
                          std::complex<double> em, std::complex<double>& mu0,
                          std::complex<double>& mu1, std::complex<double>& mu2) {
  const double b2 = std::norm(beta);
  if (b2 < 0.1225) {  // |beta| < 0.35: series
    const std::complex<double> q = beta * beta;
    mu0 = 2.0 + q * (1.0 / 3.0 + q * (1.0 / 60.0 + q * (1.0 / 2520.0 + q / 181440.0)));
    mu1 = beta * (2.0 / 3.0 + q * (1.0 / 15.0 + q * (1.0 / 420.0 + q / 22680.0)));
    mu2 = 2.0 / 3.0 + q * (1.0 / 5.0 + q * (1.0 / 84.0 + q * (1.0 / 3240.0 + q / 221760.0)));
    return;
  }
  const std::complex<double> inv = 1.0 / beta;
  const std::complex<double> sh = 0.5 * (ep - em);
  const std::complex<double> ch = 0.5 * (ep + em);
  mu0 = 2.0 * sh * inv;
  mu1 = 2.0 * inv * (ch - sh * inv);
  mu2 = 2.0 * inv * (sh + 2.0 * inv * (inv * sh - ch));
}

}  // namespace

MellinFactorGrid::MellinFactorGrid(const KeyholeGainDist& dist, double a, double max_abs_s) {
  if (!(a > 0.0)) throw std::invalid_argument("MellinFactorGrid: requires a > 0");
  a_ = a;
  max_abs_s_ = std::max(max_abs_s, 8.0);
  const auto& p = dist.profile;
  const double w_end = density_w_end(p);
  z_max_ = std::log1p(a * w_end * w_end);
  z_head_ = std::min(0.4 / max_abs_s_, 0.25 * z_max_);
  build(dist);
}

void MellinFactorGrid::build(const KeyholeGainDist& dist) {
  const auto& p = dist.profile;

  // power moments of h over the head (0, z_head]:
  // M_q = int_0^{w_c} ln(1 + a w^2)^q * density(w) dw
  const double w_c = std::sqrt(std::expm1(z_head_) / a_);
  const int n_moments = 13;
  head_moments_.assign(n_moments, 0.0);
  {
    QuadratureSettings qs;
    qs.rel_tol = 1e-12;
    qs.abs_tol = 1e-300;
    qs.max_subdiv = 4000;
    const double a = a_;
    for (int q = 0; q < n_moments; ++q) {
      auto f = [&pf = p, a, q](double w) {
        if (w <= 0.0) return 0.0;
        const double lz = std::log1p(a * w * w);
        return std::exp(ln_density_w(pf, w) + q * std::log(lz));
      };
      const auto r = integrate(std::function<double(double)>(f), 0.0, w_c, qs);
      head_moments_[static_cast<size_t>(q)] = r.value;
    }
  }

  auto h_of_z = [this, &dist](double z) {
    const double x = std::expm1(z) / a_;
    const double lp = ln_pdf_x(dist, x) + z - std::log(a_);
    return lp < -708.0 ? 0.0 : std::exp(lp);
  };

  // panel layout: geometric growth from the head cut, width capped; the
  // refinement loop below halves everything until self-checks pass
  double cap = std::max(z_max_ / 256.0, z_head_);
  std::complex<double> prev_probe[3];
  bool have_prev = false;

  for (int round = 0;; ++round) {
    z_mid_.clear();
    z_half_.clear();
    c0_.clear();
    c1_.clear();
    c2_.clear();
    double z = z_head_;
    double width = z_head_ * 0.5;
    while (z < z_max_) {
      width = std::min({width * 1.4, cap, z_max_ - z});
      const double lo = z, hi = z + width;
      const double mid = 0.5 * (lo + hi);
      const double hl = h_of_z(lo), hm = h_of_z(mid), hr = h_of_z(hi);
      z_mid_.push_back(mid);
      z_half_.push_back(0.5 * width);
      c0_.push_back(hm);
      c1_.push_back(0.5 * (hr - hl));
      c2_.push_back(0.5 * (hl - 2.0 * hm + hr));
      z = hi;
    }

    // self checks: normalization and probe stability across refinements
    const double norm_err = std::abs(eval({0.0, 0.0}).real() - 1.0);
    std::complex<double> probe[3] = {eval({-0.5, 0.37 * max_abs_s_}),
                                     eval({-0.5, max_abs_s_}),
                                     eval({-1.0, 17.0})};
    bool stable = have_prev;
    if (have_prev) {
      for (int i = 0; i < 3; ++i)
        if (std::abs(probe[i] - prev_probe[i]) >
            std::max(1e-10, 1e-7 * std::abs(probe[i])))
          stable = false;
    }
    if (norm_err < 5e-8 && stable) break;
    if (round >= 6)
      throw NumericsError("MellinFactorGrid: panel refinement did not converge");
    for (int i = 0; i < 3; ++i) prev_probe[i] = probe[i];
    have_prev = true;
    cap *= 0.5;
  }
}

std::complex<double> MellinFactorGrid::eval(std::complex<double> s) const {
  // head: sum_q s^q M_q / q!
  std::complex<double> head{0.0, 0.0};
  std::complex<double> term{1.0, 0.0};
  for (size_t q = 0; q < head_moments_.size(); ++q) {
    head += term * head_moments_[q];
    term *= s / static_cast<double>(q + 1);
  }
  std::complex<double> acc = head;
  for (size_t i = 0; i < z_mid_.size(); ++i) {
    const double d = z_half_[i];
    const std::complex<double> beta = s * d;
    const std::complex<double> ep = std::exp(beta);
    const std::complex<double> em = 1.0 / ep;
    std::complex<double> mu0, mu1, mu2;
    filon_moments(beta, ep, em, mu0, mu1, mu2);
    acc += d * std::exp(s * z_mid_[i]) * (c0_[i] * mu0 + c1_[i] * mu1 + c2_[i] * mu2);
  }
  return acc;
}

void MellinFactorGrid::eval_contour(double sigma, double omega0, double domega, int count,
                                    std::complex<double>* out) const {
  const int n_panels = static_cast<int>(z_mid_.size());
  const int chunk = 512;
  const int n_chunks = (count + chunk - 1) / chunk;

#pragma omp parallel
  {
    std::vector<std::complex<double>> emid(static_cast<size_t>(n_panels));
    std::vector<std::complex<double>> epl(static_cast<size_t>(n_panels));
    std::vector<std::complex<double>> emn(static_cast<size_t>(n_panels));
    std::vector<std::complex<double>> rot_mid(static_cast<size_t>(n_panels));
    std::vector<std::complex<double>> rot_d(static_cast<size_t>(n_panels));

#pragma omp for schedule(dynamic, 1)
    for (int c = 0; c < n_chunks; ++c) {
      const int j0 = c * chunk;
      const int j1 = std::min(count, j0 + chunk);
      const std::complex<double> s0(sigma, omega0 + j0 * domega);
      for (int i = 0; i < n_panels; ++i) {
        const auto iu = static_cast<size_t>(i);
        emid[iu] = std::exp(s0 * z_mid_[iu]);
        const std::complex<double> b0 = s0 * z_half_[iu];
        epl[iu] = std::exp(b0);
        emn[iu] = 1.0 / epl[iu];
        rot_mid[iu] = std::exp(std::complex<double>(0.0, domega * z_mid_[iu]));
        rot_d[iu] = std::exp(std::complex<double>(0.0, domega * z_half_[iu]));
      }
      for (int j = j0; j < j1; ++j) {
        const std::complex<double> s(sigma, omega0 + j * domega);
        // head series
        std::complex<double> acc{0.0, 0.0};
        std::complex<double> term{1.0, 0.0};
        for (size_t q = 0; q < head_moments_.size(); ++q) {
          acc += term * head_moments_[q];
          term *= s / static_cast<double>(q + 1);
        }
        for (int i = 0; i < n_panels; ++i) {
          const auto iu = static_cast<size_t>(i);
          const double d = z_half_[iu];
          const std::complex<double> beta = s * d;
          std::complex<double> mu0, mu1, mu2;
          filon_moments(beta, epl[iu], emn[iu], mu0, mu1, mu2);
          acc += d * emid[iu] * (c0_[iu] * mu0 + c1_[iu] * mu1 + c2_[iu] * mu2);
          emid[iu] *= rot_mid[iu];
          epl[iu] *= rot_d[iu];
          emn[iu] *= std::conj(rot_d[iu]);
        }
        out[j] = acc;
      }
    }
  }
}

}  // namespace keyhole
