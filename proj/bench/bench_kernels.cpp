// SPDX-License-Identifier: Apache-2.0
//
// Times the OpenMP kernels against their serial reference paths and checks
// that both produce identical results. Run manually:
//   ./build/bench_kernels [trials]

#include <chrono>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <omp.h>
#include <vector>

#include "keyhole/exact_outage.hpp"
#include "keyhole/keyhole_dist.hpp"
#include "keyhole/montecarlo.hpp"

using namespace keyhole;

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  const std::int64_t trials = argc > 1 ? std::atoll(argv[1]) : 2000000;
  const int max_threads = omp_get_max_threads();
  std::printf("threads available: %d\n\n", max_threads);

  // --- Monte Carlo outage kernel ---
  const auto cfg = SystemConfig::equal_snr_db(2, 2, 3, 10.0, 3.0);
  const RngSpec rs{12345, 16384};

  double t0 = now_ms();
  const auto serial = estimate_outage(cfg, Scheme::CC, CcVariant::True, trials, rs,
                                      Execution::Serial);
  const double t_serial = now_ms() - t0;

  t0 = now_ms();
  const auto parallel = estimate_outage(cfg, Scheme::CC, CcVariant::True, trials, rs,
                                        Execution::OpenMP);
  const double t_par = now_ms() - t0;

  std::printf("monte-carlo CC outage, %lld trials\n", static_cast<long long>(trials));
  std::printf("  serial : %8.1f ms  (%.2f Mtrials/s)\n", t_serial, trials / t_serial / 1e3);
  std::printf("  openmp : %8.1f ms  (%.2f Mtrials/s, speedup %.2fx)\n", t_par,
              trials / t_par / 1e3, t_serial / t_par);
  std::printf("  identical results: %s (p = %.8g)\n\n",
              serial.value == parallel.value ? "yes" : "NO", parallel.value);

  // --- Mellin contour kernel ---
  const KeyholeGainDist dist(2, 2);
  const MellinFactorGrid grid(dist, db_to_linear(10.0) / 2.0, 1700.0);
  const int count = 200000;
  std::vector<std::complex<double>> out1(count), outn(count);

  omp_set_num_threads(1);
  t0 = now_ms();
  grid.eval_contour(-1.0, 0.0, 0.02, count, out1.data());
  const double t_c1 = now_ms() - t0;

  omp_set_num_threads(max_threads);
  t0 = now_ms();
  grid.eval_contour(-1.0, 0.0, 0.02, count, outn.data());
  const double t_cn = now_ms() - t0;

  bool same = true;
  for (int i = 0; i < count; ++i)
    if (out1[static_cast<size_t>(i)] != outn[static_cast<size_t>(i)]) same = false;

  std::printf("mellin contour factors, %d points\n", count);
  std::printf("  1 thread : %8.1f ms  (%.2f Mpts/s)\n", t_c1, count / t_c1 / 1e3);
  std::printf("  %d threads: %8.1f ms  (%.2f Mpts/s, speedup %.2fx)\n", max_threads, t_cn,
              count / t_cn / 1e3, t_c1 / t_cn);
  std::printf("  identical results: %s\n", same ? "yes" : "NO");

  // --- end-to-end IR engine ---
  t0 = now_ms();
  const auto ir = outage_ir(cfg);
  std::printf("\noutage_ir end-to-end: %.1f ms (value %.8g)\n", now_ms() - t0, ir.value);
  return 0;
}
