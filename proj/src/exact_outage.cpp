// SPDX-License-Identifier: Apache-2.0

#include "keyhole/exact_outage.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <vector>

#include "keyhole/inversion.hpp"
#include "keyhole/keyhole_dist.hpp"
#include "keyhole/quadrature.hpp"

namespace keyhole {

namespace {

constexpr double kPi = 3.14159265358979323846;

// round estimates that overshoot the probability range by no more than
// their own error bars back into [0, 1]; anything worse is a real failure
double snap_to_unit(double v, double err, const char* who) {
  if (v > 1.0) {
    if (v - 1.0 <= 3.0 * err + 1e-12) return 1.0;
    throw NumericsError(std::string(who) + ": value above 1 beyond error bars");
  }
  return v;
}

int diversity_order_cc(const SystemConfig& config) {
  return config.k_max * std::min(config.n_t, config.n_r);
}

}  // namespace

OutageEstimate outage_type1(const SystemConfig& config) {
  config.validate();
  const KeyholeGainDist dist(config.n_t, config.n_r);
  const double thr = effective_threshold(config, Scheme::TypeI);
  double prod = 1.0;
  for (double g : config.snr_per_round) prod *= cdf_x(dist, config.n_t * thr / g);
  return OutageEstimate{prod, Method::Exact, std::nullopt, std::nullopt, false};
}

OutageEstimate outage_cc_upper(const SystemConfig& config) {
  config.validate();
  const KeyholeGainDist dist(config.n_t, config.n_r);
  const double x = effective_threshold(config, Scheme::CC);

  auto transform = [&](std::complex<double> s) {
    std::complex<double> prod{1.0, 0.0};
    std::map<double, std::complex<double>> cache;  // rounds often share one SNR
    for (double g : config.snr_per_round) {
      auto it = cache.find(g);
      if (it == cache.end())
        it = cache.emplace(g, laplace_factor(dist, g, config.n_t, s)).first;
      prod *= it->second;
    }
    return prod;
  };

  auto r = inverse_laplace_cdf_checked(transform, x);
  if (r.value > 0.0 && r.value < 1e-6) {
    // deep tail: rerun with a larger Abate-Whitt A so the aliasing error,
    // which scales like e^{-A} F(3x) ~ e^{-A} 3^d F(x), stays relatively small
    ContourSettings cs;
    cs.offset = 29.934 / (2.0 * x);  // a = A/(2x)
    r = inverse_laplace_cdf_checked(transform, x, cs);
  }
  // structure-aware error: aliasing is relative through the diversity order
  const double rel_alias = std::exp(-r.abate_a) * std::pow(3.0, diversity_order_cc(config));
  const double err = r.euler_tail + rel_alias * std::abs(r.value);

  OutageEstimate out;
  out.method = Method::UpperBound;
  if (r.value <= 0.0 || err >= 0.5 * std::abs(r.value)) {
    out.value = std::max(r.value, 0.0);
    out.below_floor = true;
    return out;
  }
  out.value = snap_to_unit(r.value, err, "outage_cc_upper");
  return out;
}

// ---------------------------------------------------------------------------
// IR engine
// ---------------------------------------------------------------------------

namespace {

struct IrContour {
  std::vector<const MellinFactorGrid*> round_grids;  // one per round
  double ln_x = 0.0;

  // ln |integrand| on the real axis; convex in sigma
  double ln_integrand(double sigma) const {
    double acc = -sigma * ln_x - std::log(-sigma);
    for (const auto* g : round_grids) {
      const double f = g->eval({sigma, 0.0}).real();
      if (!(f > 0.0)) return 1e300;
      acc += std::log(f);
    }
    return acc;
  }

  double find_saddle(double lo, double hi) const {
    // golden-section minimization of the log-integrand
    const double gr = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = ln_integrand(c), fd = ln_integrand(d);
    for (int it = 0; it < 70 && (b - a) > 1e-3; ++it) {
      if (fc < fd) {
        b = d; d = c; fd = fc;
        c = b - gr * (b - a);
        fc = ln_integrand(c);
      } else {
        a = c; c = d; fc = fd;
        d = a + gr * (b - a);
        fd = ln_integrand(d);
      }
    }
    return 0.5 * (a + b);
  }

  // One full trapezoid pass at spacing `delta`, accumulating omega blocks
  // until their contribution is negligible. Returns the integral
  // (1/pi) int_0^inf Re g, plus the last block magnitude via *tail.
  double sweep(double sigma, double delta, double omega_cap, double* tail) const {
    const int block_pts = 2048;
    const size_t n_rounds = round_grids.size();
    std::vector<std::vector<std::complex<double>>> fac(n_rounds);
    for (auto& f : fac) f.resize(static_cast<size_t>(block_pts));

    double sum = 0.0;        // running trapezoid sum of Re g (j >= 1 full weight)
    double g0_half = 0.0;    // half-weighted omega = 0 term
    double last_block = 0.0;
    int calm_blocks = 0;
    double omega = 0.0;
    bool first = true;

    while (omega < omega_cap) {
      for (size_t r = 0; r < n_rounds; ++r)
        round_grids[r]->eval_contour(sigma, omega, delta, block_pts, fac[r].data());
      double block_abs = 0.0;
      for (int j = 0; j < block_pts; ++j) {
        const double w = omega + j * delta;
        const std::complex<double> s(sigma, w);
        std::complex<double> g = std::exp(-s * ln_x) / (-s);
        for (size_t r = 0; r < n_rounds; ++r) g *= fac[r][static_cast<size_t>(j)];
        if (!std::isfinite(g.real()))
          throw NumericsError("outage_ir: contour integrand not finite");
        if (first && j == 0) {
          g0_half = 0.5 * g.real();
        } else {
          sum += g.real();
          block_abs += std::abs(g.real());
        }
      }
      first = false;
      omega += block_pts * delta;
      last_block = block_abs * delta / kPi;
      const double running = std::abs(g0_half + sum) * delta / kPi;
      if (last_block <= std::max(1e-13, 1e-7 * running))
        ++calm_blocks;
      else
        calm_blocks = 0;
      if (calm_blocks >= 2) break;
    }
    *tail = last_block;
    return (g0_half + sum) * delta / kPi;
  }
};

}  // namespace

OutageEstimate outage_ir(const SystemConfig& config) {
  config.validate();
  const KeyholeGainDist dist(config.n_t, config.n_r);
  const AntennaProfile prof = dist.profile;
  const double x = effective_threshold(config, Scheme::IR);  // 2^R > 1
  const ContourSettings defaults{};

  const double sigma_lo = -(config.k_max * prof.n_min + 6.0);
  const double omega_budget = 8.0 * defaults.half_width;
  const double max_abs_s = std::hypot(sigma_lo, omega_budget);

  // one grid per distinct per-round scale a = gamma/N_T
  std::map<double, std::unique_ptr<MellinFactorGrid>> grids;
  IrContour ic;
  ic.ln_x = std::log(x);
  for (double g : config.snr_per_round) {
    const double a = g / config.n_t;
    auto it = grids.find(a);
    if (it == grids.end())
      it = grids.emplace(a, std::make_unique<MellinFactorGrid>(dist, a, max_abs_s)).first;
    ic.round_grids.push_back(it->second.get());
  }

  const double sigma = ic.find_saddle(sigma_lo, -0.05);
  const double delta0 = 2.0 * defaults.half_width / defaults.steps;  // 0.02

  double tail1 = 0.0, tail2 = 0.0;
  const double f_coarse = ic.sweep(sigma, delta0, 64.0 * defaults.half_width, &tail1);
  const double f_fine = ic.sweep(sigma, 0.5 * delta0, 64.0 * defaults.half_width, &tail2);
  const double step_err = std::abs(f_fine - f_coarse) / 3.0;
  const double err = step_err + tail2;

  OutageEstimate out;
  out.method = Method::Exact;
  if (f_fine <= 0.0 || err >= 0.5 * std::abs(f_fine)) {
    if (std::abs(f_fine) > 1e-9 && err < std::abs(f_fine))
      throw NumericsError("outage_ir: inversion failed to converge");
    out.value = std::max(f_fine, 0.0);
    out.below_floor = true;
    return out;
  }
  out.value = snap_to_unit(f_fine, err, "outage_ir");
  return out;
}

}  // namespace keyhole
