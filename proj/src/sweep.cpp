// SPDX-License-Identifier: Apache-2.0

#include "keyhole/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "keyhole/asymptotics.hpp"
#include "keyhole/exact_outage.hpp"
#include "keyhole/montecarlo.hpp"

namespace keyhole {

const char* axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::SnrDb: return "snr_db";
    case SweepAxis::Rate: return "rate";
    case SweepAxis::NT: return "n_t";
  }
  return "?";
}

void SweepSpec::validate() const {
  base.validate();
  if (grid.empty()) throw std::invalid_argument("sweep: grid must be nonempty");
  for (size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw std::invalid_argument("sweep: grid must be strictly increasing");
  if (schemes.empty()) throw std::invalid_argument("sweep: scheme list must be nonempty");
  if (methods.empty()) throw std::invalid_argument("sweep: method list must be nonempty");
  if (trials < 1000) throw std::invalid_argument("sweep: trials must be >= 1000");
  if (axis == SweepAxis::NT)
    for (double v : grid)
      if (v < 1.0 || v != std::floor(v))
        throw std::invalid_argument("sweep: n_t grid values must be positive integers");
}

namespace {

SystemConfig config_at(const SweepSpec& spec, double axis_value, double snr_db_override) {
  SystemConfig c = spec.base;
  switch (spec.axis) {
    case SweepAxis::SnrDb:
      c.snr_per_round.assign(static_cast<size_t>(c.k_max), db_to_linear(axis_value));
      break;
    case SweepAxis::Rate:
      c.rate = axis_value;
      break;
    case SweepAxis::NT:
      c.n_t = static_cast<int>(axis_value);
      break;
  }
  if (!std::isnan(snr_db_override))
    c.snr_per_round.assign(static_cast<size_t>(c.k_max), db_to_linear(snr_db_override));
  c.validate();
  return c;
}

OutageEstimate eval_cell(const SystemConfig& config, Scheme scheme, Method method,
                         std::int64_t trials, std::uint64_t cell_seed) {
  switch (method) {
    case Method::Exact:
    case Method::UpperBound:
      switch (scheme) {
        case Scheme::TypeI: return outage_type1(config);
        case Scheme::CC: return outage_cc_upper(config);
        case Scheme::IR: return outage_ir(config);
      }
      break;
    case Method::Asymptotic: {
      AsymptoticBreakdown b;
      switch (scheme) {
        case Scheme::TypeI: b = asym_type1(config); break;
        case Scheme::CC: b = asym_cc(config); break;
        case Scheme::IR: b = asym_ir(config); break;
      }
      return OutageEstimate{b.value, Method::Asymptotic, std::nullopt, std::nullopt, false};
    }
    case Method::MonteCarlo: {
      RngSpec rs;
      rs.seed = cell_seed;
      rs.stream_chunk = 8192;
      return estimate_outage(config, scheme, CcVariant::True, trials, rs);
    }
  }
  throw std::invalid_argument("sweep: unknown method");
}

struct CellJob {
  double axis_value;
  std::string scheme_label;
  Scheme scheme;
  Method method;
  double snr_db_override;  // NaN unless this is an extra boosted series
};

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const double nan = std::numeric_limits<double>::quiet_NaN();

  std::vector<CellJob> jobs;
  for (double v : spec.grid) {
    if (spec.quantity == SweepQuantity::CodingGain) {
      for (Scheme s : spec.schemes)
        jobs.push_back({v, scheme_name(s), s, Method::Asymptotic, nan});
      continue;
    }
    for (Scheme s : spec.schemes)
      for (Method m : spec.methods) jobs.push_back({v, scheme_name(s), s, m, nan});
    for (double boost : spec.extra_type1_snr_db) {
      char label[48];
      std::snprintf(label, sizeof label, "%s+%gdB", scheme_name(Scheme::TypeI), boost);
      for (Method m : spec.methods)
        jobs.push_back({v, label, Scheme::TypeI, m, boost});
    }
  }

  std::vector<SweepRow> rows;
  rows.reserve(jobs.size());
  std::uint64_t cell_index = 0;
  for (const auto& job : jobs) {
    SweepRow row;
    row.axis_value = job.axis_value;
    row.scheme = job.scheme_label;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const SystemConfig config = config_at(spec, job.axis_value, job.snr_db_override);
      row.diversity_order = diversity_order(config);
      if (spec.quantity == SweepQuantity::CodingGain) {
        row.method = "coding-gain";
        row.value = coding_gain(config, job.scheme);
      } else {
        const OutageEstimate e =
            eval_cell(config, job.scheme, job.method, spec.trials,
                      substream_seed(spec.seed, cell_index));
        row.method = method_name(e.method);
        row.value = e.value;
        row.stderr_est = e.stderr_est;
      }
    } catch (const std::exception& ex) {
      row.method = method_name(job.method);
      row.error = ex.what();
    }
    const auto t1 = std::chrono::steady_clock::now();
    row.wall_time_ms =
        spec.zero_timing ? 0.0 : std::chrono::duration<double, std::milli>(t1 - t0).count();
    rows.push_back(std::move(row));
    ++cell_index;
  }
  return rows;
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

namespace {

std::string fmt_double(double v, const char* spec_fmt) {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec_fmt, v);
  return buf;
}

}  // namespace

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "axis,scheme,method,value,stderr,diversity_order,wall_time_ms,error\n";
  for (const auto& r : rows) {
    out += fmt_double(r.axis_value, "%.10g");
    out += ',';
    out += r.scheme;
    out += ',';
    out += r.method;
    out += ',';
    if (r.value) out += fmt_double(*r.value, "%.12g");
    out += ',';
    if (r.stderr_est) out += fmt_double(*r.stderr_est, "%.6g");
    out += ',';
    out += std::to_string(r.diversity_order);
    out += ',';
    out += fmt_double(r.wall_time_ms, "%.3f");
    out += ',';
    out += r.error;  // engine messages carry no commas
    out += '\n';
  }
  return out;
}

std::string to_json(const std::vector<SweepRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json o;
    o["axis"] = r.axis_value;
    o["scheme"] = r.scheme;
    o["method"] = r.method;
    if (r.value)
      o["value"] = *r.value;
    else
      o["value"] = nullptr;
    if (r.stderr_est)
      o["stderr"] = *r.stderr_est;
    else
      o["stderr"] = nullptr;
    o["diversity_order"] = r.diversity_order;
    o["wall_time_ms"] = r.wall_time_ms;
    o["error"] = r.error;
    arr.push_back(std::move(o));
  }
  return arr.dump(2) + "\n";
}

std::vector<SweepRow> parse_csv(const std::string& text) {
  std::vector<SweepRow> rows;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        f.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    f.push_back(cur);
    if (f.size() != 8) throw std::invalid_argument("parse_csv: malformed row");
    SweepRow r;
    r.axis_value = std::stod(f[0]);
    r.scheme = f[1];
    r.method = f[2];
    if (!f[3].empty()) r.value = std::stod(f[3]);
    if (!f[4].empty()) r.stderr_est = std::stod(f[4]);
    r.diversity_order = std::stoi(f[5]);
    r.wall_time_ms = std::stod(f[6]);
    r.error = f[7];
    rows.push_back(std::move(r));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// presets
// ---------------------------------------------------------------------------

namespace {

std::vector<double> linspace_step(double lo, double step, double hi) {
  std::vector<double> g;
  for (double v = lo; v <= hi + 1e-9; v += step) g.push_back(v);
  return g;
}

SweepSpec snr_sweep_preset(int n_t, int n_r) {
  SweepSpec s;
  s.base = SystemConfig(n_t, n_r, 3, {1.0, 1.0, 1.0}, 3.0);
  s.axis = SweepAxis::SnrDb;
  s.grid = linspace_step(0.0, 2.0, 40.0);
  return s;
}

}  // namespace

SweepSpec preset(const std::string& name) {
  if (name == "fig2") return snr_sweep_preset(2, 2);
  if (name == "fig3") return snr_sweep_preset(3, 2);
  if (name == "fig4") return snr_sweep_preset(2, 3);
  if (name == "fig5") {
    SweepSpec s;
    s.base = SystemConfig::equal_snr_db(2, 2, 3, 5.0, 3.0);
    s.axis = SweepAxis::Rate;
    s.grid = linspace_step(0.5, 0.5, 8.0);
    return s;
  }
  if (name == "fig6") {
    SweepSpec s;
    s.base = SystemConfig::equal_snr_db(2, 2, 3, 5.0, 3.0);
    s.axis = SweepAxis::Rate;
    s.grid = linspace_step(1.0, 0.25, 8.0);
    s.quantity = SweepQuantity::CodingGain;
    return s;
  }
  if (name == "fig7") {
    SweepSpec s;
    s.base = SystemConfig::equal_snr_db(2, 2, 3, 5.0, 3.0);
    s.axis = SweepAxis::NT;
    s.grid = {2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
    s.methods = {Method::MonteCarlo};
    s.extra_type1_snr_db = {11.5};
    return s;
  }
  throw std::invalid_argument("unknown preset: " + name);
}

std::vector<std::string> preset_names() {
  return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7"};
}

// ---------------------------------------------------------------------------
// config file
// ---------------------------------------------------------------------------

namespace {

std::vector<double> parse_grid(const std::string& text) {
  // "a:step:b" or comma list
  if (text.find(':') != std::string::npos) {
    double a, st, b;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &a, &st, &b) != 3 || st <= 0.0)
      throw std::invalid_argument("config: bad grid range '" + text + "'");
    return linspace_step(a, st, b);
  }
  std::vector<double> g;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) g.push_back(std::stod(item));
  return g;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

SweepSpec parse_config_text(const std::string& text) {
  SweepSpec spec;
  int n_t = 2, n_r = 2, k = 3;
  double rate = 3.0;
  std::vector<double> snr_db = {10.0};
  bool have_grid = false;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "n_t") {
      n_t = std::stoi(val);
    } else if (key == "n_r") {
      n_r = std::stoi(val);
    } else if (key == "k") {
      k = std::stoi(val);
    } else if (key == "rate_bps_hz") {
      rate = std::stod(val);
    } else if (key == "snr_db") {
      snr_db = parse_grid(val);  // scalar or list
    } else if (key == "scheme") {
      spec.schemes.clear();
      std::istringstream ss(val);
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item == "type1")
          spec.schemes.push_back(Scheme::TypeI);
        else if (item == "cc")
          spec.schemes.push_back(Scheme::CC);
        else if (item == "ir")
          spec.schemes.push_back(Scheme::IR);
        else
          throw std::invalid_argument("config: unknown scheme '" + item + "'");
      }
    } else if (key == "methods") {
      spec.methods.clear();
      std::istringstream ss(val);
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item == "exact")
          spec.methods.push_back(Method::Exact);
        else if (item == "asymptotic")
          spec.methods.push_back(Method::Asymptotic);
        else if (item == "monte-carlo")
          spec.methods.push_back(Method::MonteCarlo);
        else
          throw std::invalid_argument("config: unknown method '" + item + "'");
      }
    } else if (key == "trials") {
      spec.trials = std::stoll(val);
    } else if (key == "seed") {
      spec.seed = std::stoull(val);
    } else if (key == "axis") {
      if (val == "snr_db")
        spec.axis = SweepAxis::SnrDb;
      else if (val == "rate")
        spec.axis = SweepAxis::Rate;
      else if (val == "n_t")
        spec.axis = SweepAxis::NT;
      else
        throw std::invalid_argument("config: unknown axis '" + val + "'");
    } else if (key == "grid") {
      spec.grid = parse_grid(val);
      have_grid = true;
    } else if (key == "format") {
      if (val == "csv")
        spec.format = OutputFormat::Csv;
      else if (val == "json")
        spec.format = OutputFormat::Json;
      else
        throw std::invalid_argument("config: unknown format '" + val + "'");
    } else if (key == "out") {
      spec.out_path = val;
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }

  std::vector<double> snr_linear;
  if (snr_db.size() == 1) {
    snr_linear.assign(static_cast<size_t>(k), db_to_linear(snr_db[0]));
  } else {
    for (double d : snr_db) snr_linear.push_back(db_to_linear(d));
  }
  spec.base = SystemConfig(n_t, n_r, k, snr_linear, rate);
  if (!have_grid) {
    // default grid follows the axis
    if (spec.axis == SweepAxis::SnrDb)
      spec.grid = linspace_step(0.0, 2.0, 40.0);
    else if (spec.axis == SweepAxis::Rate)
      spec.grid = linspace_step(0.5, 0.5, 8.0);
    else
      spec.grid = {2, 4, 8, 16, 32, 64};
  }
  return spec;
}

SweepSpec load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace keyhole
