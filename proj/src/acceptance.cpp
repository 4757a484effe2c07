// SPDX-License-Identifier: Apache-2.0

#include "keyhole/acceptance.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <ostream>

#include "keyhole/asymptotics.hpp"
#include "keyhole/exact_outage.hpp"
#include "keyhole/inversion.hpp"
#include "keyhole/keyhole_dist.hpp"
#include "keyhole/montecarlo.hpp"
#include "keyhole/quadrature.hpp"
#include "keyhole/specfun.hpp"
#include "keyhole/sweep.hpp"

namespace keyhole {

namespace {

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

struct Gate {
  bool ok = true;
  std::string detail;
  double worst = 0.0;  // worst observed margin ratio (measured / allowed)

  void require(bool cond, const std::string& msg) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += msg;
    }
  }
  void margin(double measured, double allowed, const char* what) {
    const double r = allowed > 0.0 ? measured / allowed : 1e300;
    if (r > worst) {
      worst = r;
      if (ok) detail = fmt("worst %s: %.3g (allowed %.3g)", what, measured, allowed);
    }
    require(measured <= allowed, fmt("%s %.4g exceeds %.4g", what, measured, allowed));
  }
};

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < n; ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  return num / den;
}

// --------------------------------------------------------------------------

CriterionResult crit1_k1_agreement(AcceptLevel) {
  Gate g;
  const int antennas[4][2] = {{1, 1}, {2, 2}, {2, 3}, {3, 2}};
  for (const auto& a : antennas) {
    for (double snr_db : {0.0, 10.0, 20.0}) {
      const auto cfg = SystemConfig::equal_snr_db(a[0], a[1], 1, snr_db, 3.0);
      const KeyholeGainDist dist(a[0], a[1]);
      const double ref = cdf_x(dist, a[0] * (std::exp2(3.0) - 1.0) / cfg.snr_per_round[0]);
      g.margin(std::abs(outage_type1(cfg).value - ref), 1e-5, "type1-vs-cdf");
      g.margin(std::abs(outage_cc_upper(cfg).value - ref), 1e-5, "cc-vs-cdf");
      g.margin(std::abs(outage_ir(cfg).value - ref), 1e-5, "ir-vs-cdf");
    }
  }
  return {1, "K=1 cross-engine agreement", g.ok, g.detail};
}

CriterionResult crit2_exact_vs_mc(AcceptLevel level) {
  Gate g;
  const std::int64_t trials = level == AcceptLevel::Full ? 1000000 : 150000;
  const int antennas[3][2] = {{2, 2}, {3, 2}, {2, 3}};
  std::uint64_t salt = 20001;
  for (const auto& a : antennas) {
    for (int k : {2, 3}) {
      for (double snr_db : {5.0, 10.0, 15.0}) {
        const auto cfg = SystemConfig::equal_snr_db(a[0], a[1], k, snr_db, 3.0);
        RngSpec rs{salt++, 16384};
        const auto mc_t1 = estimate_outage(cfg, Scheme::TypeI, CcVariant::True, trials, rs);
        rs.seed = salt++;
        const auto mc_ir = estimate_outage(cfg, Scheme::IR, CcVariant::True, trials, rs);
        rs.seed = salt++;
        const auto mc_ccb = estimate_outage(cfg, Scheme::CC, CcVariant::LemmaBound, trials, rs);
        rs.seed = salt++;
        const auto mc_cct = estimate_outage(cfg, Scheme::CC, CcVariant::True, trials, rs);

        g.margin(std::abs(outage_type1(cfg).value - mc_t1.value),
                 3.0 * *mc_t1.stderr_est + 1e-7, "type1-vs-mc");
        g.margin(std::abs(outage_ir(cfg).value - mc_ir.value),
                 3.0 * *mc_ir.stderr_est + 1e-7, "ir-vs-mc");
        const double ccu = outage_cc_upper(cfg).value;
        g.margin(std::abs(ccu - mc_ccb.value), 3.0 * *mc_ccb.stderr_est + 1e-7,
                 "ccbound-vs-mc");
        g.require(ccu >= mc_cct.value - 3.0 * *mc_cct.stderr_est,
                  fmt("cc upper %.4g below true-CC mc %.4g - 3sigma", ccu, mc_cct.value));
      }
    }
  }
  return {2, "exact vs Monte Carlo (figs 2-4 battery)", g.ok, g.detail};
}

CriterionResult crit3_diversity_slope(AcceptLevel level) {
  Gate g;
  std::vector<double> grid_db = level == AcceptLevel::Full
                                    ? std::vector<double>{35.0, 37.5, 40.0, 42.5, 45.0}
                                    : std::vector<double>{35.0, 40.0, 45.0};
  struct Case {
    int nt, nr;
    double tol;
  };
  const Case cases[] = {{3, 2, 0.10}, {2, 3, 0.10}, {2, 2, 0.15}};
  for (const auto& c : cases) {
    for (int k : {1, 2, 3}) {
      const double d = k * std::min(c.nt, c.nr);
      for (int engine = 0; engine < 3; ++engine) {
        std::vector<double> lx, ly;
        bool usable = true;
        for (double snr_db : grid_db) {
          const auto cfg = SystemConfig::equal_snr_db(c.nt, c.nr, k, snr_db, 3.0);
          OutageEstimate e;
          if (engine == 0)
            e = outage_type1(cfg);
          else if (engine == 1)
            e = outage_cc_upper(cfg);
          else
            e = outage_ir(cfg);
          if (e.below_floor || !(e.value > 0.0)) {
            usable = false;
            break;
          }
          lx.push_back(std::log(cfg.snr_per_round[0]));
          ly.push_back(std::log(e.value));
        }
        const char* names[] = {"type1", "cc", "ir"};
        g.require(usable, fmt("%s (%d,%d) K=%d produced a floor/nonpositive value",
                              names[engine], c.nt, c.nr, k));
        if (!usable) continue;
        const double slope = ls_slope(lx, ly);
        g.margin(std::abs(slope + d), c.tol * d, fmt("slope %s (%d,%d) K=%d",
                                                     names[engine], c.nt, c.nr, k).c_str());
      }
    }
  }
  return {3, "high-SNR log-log slope matches K*min(N_T,N_R)", g.ok, g.detail};
}

CriterionResult crit4_asymptote_convergence(AcceptLevel) {
  Gate g;
  const int antennas[2][2] = {{3, 2}, {2, 3}};
  for (const auto& a : antennas) {
    for (int scheme = 0; scheme < 3; ++scheme) {
      std::vector<double> ratios;
      for (double snr_db : {30.0, 40.0, 50.0}) {
        const auto cfg = SystemConfig::equal_snr_db(a[0], a[1], 2, snr_db, 3.0);
        double exact = 0.0, asym = 0.0;
        if (scheme == 0) {
          exact = outage_type1(cfg).value;
          asym = asym_type1(cfg).value;
        } else if (scheme == 1) {
          exact = outage_cc_upper(cfg).value;
          asym = asym_cc(cfg).value;
        } else {
          exact = outage_ir(cfg).value;
          asym = asym_ir(cfg).value;
        }
        g.require(exact > 0.0 && asym > 0.0, "nonpositive outage in ratio test");
        ratios.push_back(exact / asym);
      }
      const char* names[] = {"type1", "cc", "ir"};
      g.require(ratios[1] >= 0.5 && ratios[1] <= 2.0,
                fmt("%s (%d,%d): ratio at 40dB = %.4g outside [0.5,2]", names[scheme], a[0],
                    a[1], ratios[1]));
      g.require(std::abs(ratios[1] - 1.0) < std::abs(ratios[0] - 1.0) &&
                    std::abs(ratios[2] - 1.0) < std::abs(ratios[1] - 1.0),
                fmt("%s (%d,%d): |ratio-1| not shrinking (%.4g, %.4g, %.4g)", names[scheme],
                    a[0], a[1], ratios[0], ratios[1], ratios[2]));
    }
  }
  return {4, "exact/asymptotic ratio converges toward 1", g.ok, g.detail};
}

CriterionResult crit5_coding_gain(AcceptLevel) {
  Gate g;
  for (double r = 1.0; r <= 8.0 + 1e-9; r += 0.5) {
    const auto cfg = SystemConfig::equal_snr_db(2, 2, 3, 10.0, r);
    const double ci = coding_gain(cfg, Scheme::TypeI);
    const double ccc = coding_gain(cfg, Scheme::CC);
    const double cir = coding_gain(cfg, Scheme::IR);
    g.require(cir >= ccc - 1e-12 && ccc >= ci - 1e-12,
              fmt("ordering violated at R=%.2f: %.5g / %.5g / %.5g", r, cir, ccc, ci));
  }
  const auto cfg3 = SystemConfig::equal_snr_db(2, 2, 3, 10.0, 3.0);
  const double gain_db = 10.0 * std::log10(coding_gain(cfg3, Scheme::IR) /
                                           coding_gain(cfg3, Scheme::TypeI));
  g.margin(std::abs(gain_db - 6.5), 1.0, "IR/Type-I coding-gain anchor (dB)");
  if (g.ok) g.detail = fmt("anchor 10log10(C_IR/C_I) = %.3f dB", gain_db);
  return {5, "coding-gain ordering and 6.5 dB anchor", g.ok, g.detail};
}

CriterionResult crit6_g_dual_route(AcceptLevel level) {
  Gate g;
  const std::vector<double> rates =
      level == AcceptLevel::Full ? std::vector<double>{1.0, 2.0, 3.0, 5.0}
                                 : std::vector<double>{1.0, 3.0};
  for (int k = 1; k <= 3; ++k) {
    for (int n = 1; n <= 3; ++n) {
      for (double r : rates) {
        const double vol = g_of_r(r, k, n);
        const double mb = g_of_r_mellin_barnes(r, k, n);
        g.margin(std::abs(vol - mb) / vol, 1e-4,
                 fmt("g dual-route K=%d N=%d R=%g", k, n, r).c_str());
      }
    }
  }
  for (int n = 1; n <= 3; ++n) {
    for (double r : rates) {
      const double closed =
          std::pow(std::exp2(r) - 1.0, n) / std::exp(ln_gamma_real(n + 1.0));
      g.margin(std::abs(g_of_r(r, 1, n) - closed) / closed, 1e-8, "g K=1 closed form");
    }
  }
  for (int k : {2, 3}) {
    std::vector<double> gv;
    for (double r = 0.5; r <= 8.0 + 1e-9; r += 0.5) gv.push_back(g_of_r(r, k, 2));
    for (size_t i = 1; i < gv.size(); ++i)
      g.require(gv[i] > gv[i - 1], fmt("g not increasing at K=%d", k));
    for (size_t i = 2; i < gv.size(); ++i)
      g.require(gv[i] - 2.0 * gv[i - 1] + gv[i - 2] > 0.0, fmt("g not convex at K=%d", k));
  }
  return {6, "g(R) dual-route, K=1 closed form, shape", g.ok, g.detail};
}

CriterionResult crit7_gap_convergence(AcceptLevel level) {
  Gate g;
  const std::int64_t trials = level == AcceptLevel::Full ? 10000 : 3000;
  std::vector<double> means;
  for (int nt : {4, 16, 64, 256}) {
    auto cfg = SystemConfig::equal_snr_db(nt, 2, 3, 5.0, 3.0);
    const GapSummary s = gap_ir_cc(cfg, trials, RngSpec{777, 256});
    g.require(s.min_gap >= -1e-9, fmt("negative gap %.3g at N_T=%d", s.min_gap, nt));
    means.push_back(s.mean_gap);
  }
  for (size_t i = 1; i < means.size(); ++i)
    g.require(means[i] < means[i - 1],
              fmt("mean gap not decreasing: %.4g -> %.4g", means[i - 1], means[i]));
  g.require(means.back() < 0.1 * means.front(),
            fmt("gap(256)=%.4g not below 0.1*gap(4)=%.4g", means.back(), 0.1 * means.front()));
  if (g.ok) g.detail = fmt("mean gap %.4g -> %.4g bits/s/Hz", means.front(), means.back());
  return {7, "IR-CC mutual-information gap shrinks with N_T", g.ok, g.detail};
}

CriterionResult crit8_outage_floor(AcceptLevel level) {
  Gate g;
  const std::int64_t trials = level == AcceptLevel::Full ? 300000 : 100000;
  const auto cfg = SystemConfig::equal_snr_db(1024, 2, 3, 5.0, 3.0);
  const auto mc = estimate_outage(cfg, Scheme::CC, CcVariant::LemmaBound, trials,
                                  RngSpec{4242, 4096});
  // N_T -> inf floor: P(sum_k gamma ||u_k||^2 < 2^R - 1), an Erlang(K N_R) CDF
  const double floor_cf = gamma_p(cfg.k_max * cfg.n_r,
                                  (std::exp2(cfg.rate) - 1.0) / cfg.snr_per_round[0]);
  g.margin(std::abs(mc.value - floor_cf) / floor_cf, 0.05, "relative floor gap");
  if (g.ok) g.detail = fmt("mc %.5g vs closed form %.5g", mc.value, floor_cf);
  return {8, "large-N_T outage floor matches Erlang closed form", g.ok, g.detail};
}

CriterionResult crit9_numerics(AcceptLevel) {
  Gate g;
  // frozen oracle values (independent high-precision reference)
  struct KRef {
    int tau;
    double x, val;
  };
  const KRef krefs[] = {
      {0, 1.0, 0.4210244382407083}, {1, 1.0, 0.6019072301972346},
      {0, 2.0, 0.1138938727495334}, {1, 2.0, 0.1398658818165224},
      {2, 0.5, 7.550183551240869},  {3, 2.5, 0.2682271463934492},
      {0, 0.1, 2.4270690247020166}, {2, 10.0, 2.1509817006932769e-5},
      {5, 30.0, 3.2103335105890262e-14}, {0, 100.0, 4.656628229175902e-45},
      {1, 250.0, 2.1189445978139999e-110}, {4, 600.0, 1.3740119933512935e-262},
      {0, 650.0, 2.5125028846628392e-284}, {6, 0.3, 5243852.508697134}};
  for (const auto& k : krefs)
    g.margin(std::abs(bessel_k_int(k.tau, k.x) - k.val) / k.val, 1e-9,
             fmt("K_%d(%g)", k.tau, k.x).c_str());

  for (int tau : {1, 2, 3, 4, 5}) {
    for (double x : {0.5, 1.0, 3.0, 10.0, 50.0}) {
      const double lhs = bessel_k_int(tau + 1, x);
      const double rhs = bessel_k_int(tau - 1, x) + 2.0 * tau / x * bessel_k_int(tau, x);
      g.margin(std::abs(lhs - rhs) / lhs, 1e-9, "K recurrence");
    }
  }

  // Erlang battery for the Bromwich engine (unit-rate Erlang-k CDFs)
  struct LRef {
    int k;
    double x, val;
  };
  const LRef lrefs[] = {{1, 1.0, 1.0 - std::exp(-1.0)},
                        {2, 2.0, 1.0 - 3.0 * std::exp(-2.0)},
                        {5, 5.0, 0.5595067149347876}};
  for (const auto& t : lrefs) {
    auto transform = [&t](std::complex<double> s) {
      return std::pow(1.0 + s, -t.k);
    };
    g.margin(std::abs(inverse_laplace_cdf(transform, t.x) - t.val), 1e-8,
             fmt("laplace Erlang-%d", t.k).c_str());
  }

  // Laplace / Mellin cross agreement on Erlang-k, k = 1..5
  for (int k = 1; k <= 5; ++k) {
    const double x = k;  // evaluate near the mean
    auto lap = [k](std::complex<double> s) { return std::pow(1.0 + s, -k); };
    auto mel = [k](std::complex<double> s) {
      return std::exp(ln_gamma(s + static_cast<double>(k - 1)) - ln_gamma_real(k));
    };
    const double fl = inverse_laplace_cdf(lap, x);
    const double fm = inverse_mellin_cdf(mel, x);
    g.margin(std::abs(fl - fm), 1e-6, fmt("laplace-mellin Erlang-%d", k).c_str());
  }

  // density normalization over every antenna pair in 1..4
  for (int nt = 1; nt <= 4; ++nt) {
    for (int nr = 1; nr <= 4; ++nr) {
      const KeyholeGainDist dist(nt, nr);
      QuadratureSettings qs;
      qs.rel_tol = 1e-12;
      qs.abs_tol = 1e-300;
      const double w_hi = 45.0 + 2.0 * (nt + nr);
      auto f = [&dist](double w) { return w > 0.0 ? 2.0 * w * pdf_x(dist, w * w) : 0.0; };
      const auto r = integrate(std::function<double(double)>(f), 0.0, w_hi, qs);
      g.margin(std::abs(r.value - 1.0), 1e-8, fmt("normalization (%d,%d)", nt, nr).c_str());
    }
  }
  return {9, "numerics substrate (Bessel, inversion battery, normalization)", g.ok, g.detail};
}

CriterionResult crit10_determinism(AcceptLevel) {
  Gate g;
  const auto cfg = SystemConfig::equal_snr_db(2, 2, 3, 10.0, 3.0);
  const RngSpec rs{918273645, 2048};
  const auto a = estimate_outage(cfg, Scheme::IR, CcVariant::True, 50000, rs);
  const auto b = estimate_outage(cfg, Scheme::IR, CcVariant::True, 50000, rs);
  const auto c = estimate_outage(cfg, Scheme::IR, CcVariant::True, 50000, rs, Execution::Serial);
  g.require(a.value == b.value, "repeated runs differ");
  g.require(a.value == c.value, "parallel and serial runs differ");

  SweepSpec spec;
  spec.base = SystemConfig::equal_snr_db(2, 2, 2, 10.0, 3.0);
  spec.axis = SweepAxis::SnrDb;
  spec.grid = {5.0, 10.0};
  spec.methods = {Method::MonteCarlo};
  spec.trials = 20000;
  spec.seed = 31337;
  spec.zero_timing = true;
  const std::string f1 = to_csv(run_sweep(spec));
  const std::string f2 = to_csv(run_sweep(spec));
  g.require(f1 == f2, "sweep result files not byte-identical");
  return {10, "fixed-seed runs are bit-identical", g.ok, g.detail};
}

}  // namespace

std::vector<CriterionResult> run_acceptance(AcceptLevel level, std::ostream& log) {
  using CritFn = std::function<CriterionResult(AcceptLevel)>;
  const CritFn criteria[] = {
      crit1_k1_agreement,    crit2_exact_vs_mc,   crit3_diversity_slope,
      crit4_asymptote_convergence, crit5_coding_gain, crit6_g_dual_route,
      crit7_gap_convergence, crit8_outage_floor,  crit9_numerics,
      crit10_determinism};
  std::vector<CriterionResult> results;
  for (const auto& fn : criteria) {
    CriterionResult r;
    try {
      r = fn(level);
    } catch (const std::exception& ex) {
      r.pass = false;
      r.detail = std::string("exception: ") + ex.what();
      r.id = static_cast<int>(results.size()) + 1;
      r.name = "criterion aborted";
    }
    log << (r.pass ? "PASS" : "FAIL") << " criterion " << r.id << ": " << r.name;
    if (!r.detail.empty()) log << "  [" << r.detail << "]";
    log << "\n" << std::flush;
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace keyhole
