// SPDX-License-Identifier: Apache-2.0
//
// keyhole-harq: outage probabilities for Type-I / CC / IR HARQ over
// keyhole MIMO channels.
//
// Subcommands:
//   eval       one configuration, every method, printed as a table
//   sweep      axis sweep from a config file and/or flags
//   preset     built-in experiment sweeps (fig2..fig7)
//   self-test  acceptance battery (fast or full)
//
// Exit codes: 0 ok, 1 invalid input, 2 numerical failure in a requested
// cell when --strict is set (self-test: any failed criterion).

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "keyhole/acceptance.hpp"
#include "keyhole/asymptotics.hpp"
#include "keyhole/exact_outage.hpp"
#include "keyhole/montecarlo.hpp"
#include "keyhole/sweep.hpp"

namespace {

using namespace keyhole;

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  std::string format;
  std::string methods;
  std::int64_t trials = -1;
  std::uint64_t seed = 0;
  bool have_seed = false;
  bool strict = false;
  bool zero_timing = false;
};

void apply_overrides(SweepSpec& spec, const CommonOpts& o) {
  if (!o.out_path.empty()) spec.out_path = o.out_path;
  if (!o.format.empty()) {
    if (o.format == "csv")
      spec.format = OutputFormat::Csv;
    else if (o.format == "json")
      spec.format = OutputFormat::Json;
    else
      throw std::invalid_argument("unknown --format: " + o.format);
  }
  if (!o.methods.empty()) {
    spec.methods.clear();
    std::istringstream ss(o.methods);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item == "exact")
        spec.methods.push_back(Method::Exact);
      else if (item == "asymptotic")
        spec.methods.push_back(Method::Asymptotic);
      else if (item == "monte-carlo")
        spec.methods.push_back(Method::MonteCarlo);
      else
        throw std::invalid_argument("unknown method in --methods: " + item);
    }
  }
  if (o.trials > 0) spec.trials = o.trials;
  if (o.have_seed) spec.seed = o.seed;
  spec.strict = o.strict;
  spec.zero_timing = o.zero_timing;
}

int emit_sweep(const SweepSpec& spec) {
  const auto rows = run_sweep(spec);
  const std::string text =
      spec.format == OutputFormat::Csv ? to_csv(rows) : to_json(rows);
  if (spec.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(spec.out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot open output file: " << spec.out_path << "\n";
      return 1;
    }
    out << text;
  }
  if (spec.strict)
    for (const auto& r : rows)
      if (!r.error.empty()) {
        std::cerr << "cell failed (" << r.scheme << ", " << r.method << ", axis "
                  << r.axis_value << "): " << r.error << "\n";
        return 2;
      }
  return 0;
}

int run_eval(int n_t, int n_r, int k, double snr_db, double rate, std::int64_t trials,
             std::uint64_t seed) {
  const auto cfg = SystemConfig::equal_snr_db(n_t, n_r, k, snr_db, rate);
  std::printf("config: N_T=%d N_R=%d K=%d snr=%.3g dB rate=%.4g bits/s/Hz\n", n_t, n_r, k,
              snr_db, rate);
  std::printf("diversity order: %d\n", diversity_order(cfg));
  std::printf("%-8s %-14s %-16s %s\n", "scheme", "method", "outage", "stderr");

  const Scheme schemes[] = {Scheme::TypeI, Scheme::CC, Scheme::IR};
  for (Scheme s : schemes) {
    OutageEstimate exact;
    switch (s) {
      case Scheme::TypeI: exact = outage_type1(cfg); break;
      case Scheme::CC: exact = outage_cc_upper(cfg); break;
      case Scheme::IR: exact = outage_ir(cfg); break;
    }
    std::printf("%-8s %-14s %-16.8g %s\n", scheme_name(s), method_name(exact.method),
                exact.value, exact.below_floor ? "(below numerical floor)" : "");

    double asym = 0.0;
    switch (s) {
      case Scheme::TypeI: asym = asym_type1(cfg).value; break;
      case Scheme::CC: asym = asym_cc(cfg).value; break;
      case Scheme::IR: asym = asym_ir(cfg).value; break;
    }
    std::printf("%-8s %-14s %-16.8g\n", scheme_name(s), "asymptotic", asym);

    const auto mc =
        estimate_outage(cfg, s, CcVariant::True, trials, RngSpec{seed, 16384});
    std::printf("%-8s %-14s %-16.8g %.3g\n", scheme_name(s), "monte-carlo", mc.value,
                *mc.stderr_est);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HARQ outage analysis over keyhole MIMO fading channels"};
  app.require_subcommand(1);

  CommonOpts opts;

  // ---- eval ----
  auto* eval_cmd = app.add_subcommand("eval", "evaluate one configuration with all methods");
  int e_nt = 2, e_nr = 2, e_k = 3;
  double e_snr = 10.0, e_rate = 3.0;
  std::int64_t e_trials = 100000;
  std::uint64_t e_seed = 1;
  eval_cmd->add_option("--n-t", e_nt, "transmit antennas");
  eval_cmd->add_option("--n-r", e_nr, "receive antennas");
  eval_cmd->add_option("--k", e_k, "max HARQ rounds");
  eval_cmd->add_option("--snr-db", e_snr, "per-round average SNR in dB");
  eval_cmd->add_option("--rate", e_rate, "target rate, bits/s/Hz");
  eval_cmd->add_option("--trials", e_trials, "Monte Carlo trials");
  eval_cmd->add_option("--seed", e_seed, "Monte Carlo seed");

  // ---- sweep ----
  auto* sweep_cmd = app.add_subcommand("sweep", "run a sweep from a config file");
  sweep_cmd->add_option("--config", opts.config_path, "flat key=value config file");
  sweep_cmd->add_option("--out", opts.out_path, "output path (default stdout)");
  sweep_cmd->add_option("--format", opts.format, "csv|json");
  sweep_cmd->add_option("--methods", opts.methods, "comma list: exact,asymptotic,monte-carlo");
  sweep_cmd->add_option("--trials", opts.trials, "Monte Carlo trials per cell");
  auto* seed_opt = sweep_cmd->add_option("--seed", opts.seed, "sweep seed");
  sweep_cmd->add_flag("--strict", opts.strict, "exit 2 if any cell fails");
  sweep_cmd->add_flag("--zero-timing", opts.zero_timing,
                      "write wall_time_ms as 0 for byte-stable output");

  // ---- preset ----
  auto* preset_cmd = app.add_subcommand("preset", "run a built-in experiment preset");
  std::string preset_name;
  preset_cmd->add_option("name", preset_name, "fig2|fig3|fig4|fig5|fig6|fig7")->required();
  preset_cmd->add_option("--out", opts.out_path, "output path (default stdout)");
  preset_cmd->add_option("--format", opts.format, "csv|json");
  preset_cmd->add_option("--methods", opts.methods, "comma list: exact,asymptotic,monte-carlo");
  preset_cmd->add_option("--trials", opts.trials, "Monte Carlo trials per cell");
  auto* seed_opt2 = preset_cmd->add_option("--seed", opts.seed, "sweep seed");
  preset_cmd->add_flag("--strict", opts.strict, "exit 2 if any cell fails");
  preset_cmd->add_flag("--zero-timing", opts.zero_timing,
                       "write wall_time_ms as 0 for byte-stable output");

  // ---- self-test ----
  auto* st_cmd = app.add_subcommand("self-test", "run the acceptance battery");
  std::string level = "fast";
  std::string report_path;
  st_cmd->add_option("--level", level, "fast|full");
  st_cmd->add_option("--report", report_path, "also write a JSON report here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*eval_cmd) return run_eval(e_nt, e_nr, e_k, e_snr, e_rate, e_trials, e_seed);

    if (*sweep_cmd) {
      opts.have_seed = seed_opt->count() > 0;
      SweepSpec spec = opts.config_path.empty() ? SweepSpec{} : load_config_file(opts.config_path);
      if (opts.config_path.empty())
        spec.base = SystemConfig::equal_snr_db(2, 2, 3, 10.0, 3.0);
      apply_overrides(spec, opts);
      return emit_sweep(spec);
    }

    if (*preset_cmd) {
      opts.have_seed = seed_opt2->count() > 0;
      SweepSpec spec = preset(preset_name);
      apply_overrides(spec, opts);
      return emit_sweep(spec);
    }

    if (*st_cmd) {
      if (level != "fast" && level != "full") {
        std::cerr << "--level must be fast or full\n";
        return 1;
      }
      const auto results = run_acceptance(
          level == "full" ? AcceptLevel::Full : AcceptLevel::Fast, std::cout);
      if (!report_path.empty()) {
        std::ofstream out(report_path);
        out << "[\n";
        for (size_t i = 0; i < results.size(); ++i) {
          out << "  {\"id\": " << results[i].id << ", \"pass\": "
              << (results[i].pass ? "true" : "false") << ", \"name\": \"" << results[i].name
              << "\"}" << (i + 1 < results.size() ? "," : "") << "\n";
        }
        out << "]\n";
      }
      for (const auto& r : results)
        if (!r.pass) return 2;
      return 0;
    }
  } catch (const std::invalid_argument& ex) {
    std::cerr << "invalid input: " << ex.what() << "\n";
    return 1;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 0;
}
