#pragma once

#include <charconv>
#include <ctime>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "unoma/config.hpp"
#include "unoma/experiments.hpp"
#include "unoma/sha256.hpp"

namespace unoma {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Locale-independent shortest representation at 10 significant digits.
inline std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 10);
  return std::string(buf, res.ptr);
}

inline std::string csv_header() {
  return "axis,mode,exact,asymptotic,mc_estimate,mc_stderr,trials,feasible";
}

inline std::string to_csv(const SweepResult& result) {
  std::string out = csv_header() + "\n";
  for (const CopPoint& row : result.rows) {
    out += format_number(row.axis);
    out += ',' + to_string(row.mode);
    out += ',' + format_number(row.exact);
    out += ',';
    if (row.asymptotic) out += format_number(*row.asymptotic);
    out += ',';
    if (row.mc_estimate) out += format_number(*row.mc_estimate);
    out += ',';
    if (row.mc_stderr) out += format_number(*row.mc_stderr);
    out += ',' + std::to_string(row.mc_estimate ? result.spec.trials : 0);
    out += ',';
    out += row.feasible ? '1' : '0';
    out += '\n';
  }
  return out;
}

inline std::string to_csv(const ValidationReport& report) {
  std::string out = "snr_db,mode,analytic,mc_estimate,mc_stderr,tolerance,checked,pass\n";
  for (const ValidationRow& row : report.rows) {
    out += format_number(row.snr_db);
    out += ',' + to_string(row.mode);
    out += ',' + format_number(row.analytic);
    out += ',' + format_number(row.mc);
    out += ',' + format_number(row.mc_stderr);
    out += ',' + format_number(row.tolerance);
    out += ',';
    out += row.checked ? '1' : '0';
    out += ',';
    out += row.pass ? '1' : '0';
    out += '\n';
  }
  return out;
}

/// Renderer-agnostic drawing commands for the CSV next to it: one log-y
/// curve per mode, exact/asymptotic/MC series distinguished by style.
inline std::string to_plot_script(const SweepResult& result, const std::string& csv_name) {
  std::ostringstream os;
  os << "plot \"" << csv_name << "\"\n";
  os << "x-axis column=axis label=\"" << to_string(result.spec.axis) << "\"\n";
  os << "y-axis log label=\"outage probability\"\n";
  std::vector<std::string> seen;
  for (const CopPoint& row : result.rows) {
    std::string mode = to_string(row.mode);
    bool first = true;
    for (const auto& s : seen) first = first && s != mode;
    if (!first) continue;
    seen.push_back(mode);
    os << "curve select mode=\"" << mode << "\" y=exact style=line title=\"" << mode
       << " exact\"\n";
    if (row.asymptotic)
      os << "curve select mode=\"" << mode << "\" y=asymptotic style=dash title=\"" << mode
         << " asymptotic\"\n";
    if (row.mc_estimate)
      os << "curve select mode=\"" << mode << "\" y=mc_estimate style=marker title=\""
         << mode << " simulated\"\n";
  }
  return os.str();
}

inline nlohmann::json to_json(const SystemConfig& c) {
  return nlohmann::json{{"num_users", c.num_users},
                        {"num_subcarriers", c.num_subcarriers},
                        {"rank_m", c.rank_m},
                        {"rank_n", c.rank_n},
                        {"a_m", c.a_m},
                        {"a_n", c.a_n},
                        {"rate_m", c.rate_m},
                        {"rate_n", c.rate_n},
                        {"path_loss_exp", c.path_loss_exp},
                        {"eta", c.eta},
                        {"disk_radius", c.disk_radius},
                        {"ri_power_total", c.ri_power_total},
                        {"chebyshev_nodes", c.chebyshev_nodes},
                        {"laguerre_nodes", c.laguerre_nodes},
                        {"throughput_pairing",
                         c.throughput_pairing == ThroughputPairing::conventional
                             ? "conventional"
                             : "as_printed"}};
}

/// Reads a config JSON over `base`. Keys mirror the SystemConfig fields;
/// dB-valued inputs carry a `_db` suffix and are converted here, once.
inline SystemConfig config_from_json(const nlohmann::json& j, SystemConfig base = {}) {
  SystemConfig c = base;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const auto& v = it.value();
    if (key == "num_users") c.num_users = v.get<int>();
    else if (key == "num_subcarriers") c.num_subcarriers = v.get<int>();
    else if (key == "rank_m") c.rank_m = v.get<int>();
    else if (key == "rank_n") c.rank_n = v.get<int>();
    else if (key == "a_m") c.a_m = v.get<double>();
    else if (key == "a_n") c.a_n = v.get<double>();
    else if (key == "rate_m") c.rate_m = v.get<double>();
    else if (key == "rate_n") c.rate_n = v.get<double>();
    else if (key == "path_loss_exp") c.path_loss_exp = v.get<double>();
    else if (key == "eta") c.eta = v.get<double>();
    else if (key == "disk_radius") c.disk_radius = v.get<double>();
    else if (key == "ri_power_total") c.ri_power_total = v.get<double>();
    else if (key == "ri_power_total_db") c.ri_power_total = db_to_linear(v.get<double>());
    else if (key == "chebyshev_nodes") c.chebyshev_nodes = v.get<int>();
    else if (key == "laguerre_nodes") c.laguerre_nodes = v.get<int>();
    else if (key == "throughput_pairing") {
      std::string p = v.get<std::string>();
      if (p == "as_printed") c.throughput_pairing = ThroughputPairing::as_printed;
      else if (p == "conventional") c.throughput_pairing = ThroughputPairing::conventional;
      else throw IoError("unknown throughput_pairing: " + p);
    } else {
      throw IoError("unknown config key: " + key);
    }
  }
  return c;
}

inline SystemConfig load_config_file(const std::string& path, SystemConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("malformed config JSON (" + path + "): " + e.what());
  }
  return config_from_json(j, base);
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Record of one CLI run: command line, resolved config, seed, and the
/// emitted files with content digests, enough to reproduce the run exactly.
struct RunManifest {
  std::string command;
  std::string config_path;  // empty when defaults/flags only
  SystemConfig config;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::vector<std::string> argv;
  std::string created_utc;
  std::vector<std::pair<std::string, std::string>> files;  // name -> sha256

  void add_file(const std::string& name, const std::string& content) {
    files.emplace_back(name, Sha256::of(content));
  }

  void stamp(int argc, char** raw_argv) {
    argv.assign(raw_argv, raw_argv + argc);
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    created_utc = buf;
  }

  nlohmann::json to_json() const {
    nlohmann::json jf = nlohmann::json::array();
    for (const auto& [name, digest] : files)
      jf.push_back({{"path", name}, {"sha256", digest}});
    return nlohmann::json{{"command", command},
                          {"config_path", config_path},
                          {"config", unoma::to_json(config)},
                          {"out_dir", out_dir},
                          {"seed", seed},
                          {"trials", trials},
                          {"argv", argv},
                          {"created_utc", created_utc},
                          {"files", jf}};
  }
};

}  // namespace unoma
