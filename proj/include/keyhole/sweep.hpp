// SPDX-License-Identifier: Apache-2.0
//
// Configuration-driven parameter sweeps that reproduce the experiment
// families of the reference setups as machine-readable tables (CSV/JSON),
// plus the flat key=value config format used by the CLI.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "keyhole/core_model.hpp"

namespace keyhole {

enum class SweepAxis { SnrDb, Rate, NT };
enum class OutputFormat { Csv, Json };
enum class SweepQuantity { Outage, CodingGain };

const char* axis_name(SweepAxis a);

struct SweepSpec {
  SystemConfig base;  // k_max/rate/snr fields not on the axis stay fixed
  SweepAxis axis = SweepAxis::SnrDb;
  std::vector<double> grid;  // strictly increasing
  std::vector<Scheme> schemes = {Scheme::TypeI, Scheme::CC, Scheme::IR};
  std::vector<Method> methods = {Method::Exact, Method::Asymptotic, Method::MonteCarlo};
  std::int64_t trials = 100000;
  std::uint64_t seed = 1;
  std::string out_path;  // empty: stdout
  OutputFormat format = OutputFormat::Csv;
  bool strict = false;        // CLI exit code 2 on any cell error
  bool zero_timing = false;   // report wall_time_ms as 0 for byte-stable files
  SweepQuantity quantity = SweepQuantity::Outage;
  // additional Type-I series at boosted SNR (label suffix carries the dB),
  // used by the antenna-count sweep preset
  std::vector<double> extra_type1_snr_db;

  void validate() const;
};

struct SweepRow {
  double axis_value = 0.0;
  std::string scheme;
  std::string method;
  std::optional<double> value;
  std::optional<double> stderr_est;
  int diversity_order = 0;
  double wall_time_ms = 0.0;
  std::string error;  // empty when the cell succeeded
};

/// Runs every (axis value, scheme, method) cell; cell failures land in the
/// row's error column and the sweep continues. Row order follows the grid.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

std::string to_csv(const std::vector<SweepRow>& rows);
std::string to_json(const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_csv(const std::string& text);

/// Built-in experiment presets: fig2 .. fig7.
SweepSpec preset(const std::string& name);
std::vector<std::string> preset_names();

/// Flat key=value config document (keys: n_t, n_r, k, rate_bps_hz, snr_db,
/// scheme, trials, seed, axis, grid, methods, format, out). '#' comments.
SweepSpec parse_config_text(const std::string& text);
SweepSpec load_config_file(const std::string& path);

}  // namespace keyhole
