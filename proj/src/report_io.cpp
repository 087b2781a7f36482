#include "panelfc/report_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace panelfc {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string records_to_csv(const std::vector<ForecastRecord>& records) {
  std::ostringstream os;
  os << "unit,origin,method,forecast,actual\n";
  for (const auto& r : records) {
    os << r.unit << "," << r.origin << "," << r.method << "," << format_double(r.forecast)
       << "," << format_double(r.actual) << "\n";
  }
  return os.str();
}

namespace {

std::vector<std::string> split_line(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

double to_double(const std::string& s, const std::string& path, long line_no) {
  double v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw std::invalid_argument(path + ": line " + std::to_string(line_no) +
                                ": bad number '" + s + "'");
  }
  return v;
}

long to_long(const std::string& s, const std::string& path, long line_no) {
  long v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw std::invalid_argument(path + ": line " + std::to_string(line_no) +
                                ": bad integer '" + s + "'");
  }
  return v;
}

}  // namespace

std::vector<ForecastRecord> records_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || split_line(line) != std::vector<std::string>{
                                     "unit", "origin", "method", "forecast", "actual"}) {
    throw std::invalid_argument(path + ": expected records header");
  }
  std::vector<ForecastRecord> out;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split_line(line);
    if (f.size() != 5) {
      throw std::invalid_argument(path + ": line " + std::to_string(line_no) + ": bad row");
    }
    out.push_back({static_cast<int>(to_long(f[0], path, line_no)), to_long(f[1], path, line_no),
                   f[2], to_double(f[3], path, line_no), to_double(f[4], path, line_no)});
  }
  return out;
}

std::string dstats_to_csv(const std::vector<ConditioningStat>& stats) {
  std::ostringstream os;
  os << "unit,origin,d,mean,sd\n";
  for (const auto& s : stats) {
    os << s.unit << "," << s.origin << "," << format_double(s.d) << ","
       << format_double(s.mean) << "," << format_double(s.sd) << "\n";
  }
  return os.str();
}

std::vector<ConditioningStat> dstats_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) ||
      split_line(line) != std::vector<std::string>{"unit", "origin", "d", "mean", "sd"}) {
    throw std::invalid_argument(path + ": expected d-stat header");
  }
  std::vector<ConditioningStat> out;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split_line(line);
    if (f.size() != 5) {
      throw std::invalid_argument(path + ": line " + std::to_string(line_no) + ": bad row");
    }
    out.push_back({static_cast<int>(to_long(f[0], path, line_no)), to_long(f[1], path, line_no),
                   to_double(f[2], path, line_no), to_double(f[3], path, line_no),
                   to_double(f[4], path, line_no)});
  }
  return out;
}

std::string report_to_csv(const EvaluationReport& report) {
  std::ostringstream os;
  os << "subset,method,msfe,rmsfe,beat_freq,best_freq,worst_freq\n";
  for (const auto& m : report.methods) {
    const auto& st = report.stats.at(m);
    os << report.subset << "," << m << "," << format_double(st.msfe) << ","
       << format_double(st.rmsfe) << "," << format_double(st.beat_freq) << ","
       << format_double(st.best_freq) << "," << format_double(st.worst_freq) << "\n";
  }
  return os.str();
}

std::string dm_to_csv(const std::vector<DmResult>& results) {
  std::ostringstream os;
  os << "scope,method,benchmark,statistic,degenerate,hac_lags,n_obs\n";
  for (const auto& r : results) {
    os << (r.scope_unit < 0 ? std::string("panel") : std::to_string(r.scope_unit)) << ","
       << r.method << "," << r.benchmark << ","
       << (r.degenerate ? "" : format_double(r.statistic)) << "," << (r.degenerate ? 1 : 0)
       << "," << r.hac_lags << "," << r.n_obs << "\n";
  }
  return os.str();
}

std::string experiment_to_csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream os;
  os << "cell,kappa,method,rmsfe,msfe,msfe_benchmark,n_reps,n_failures\n";
  for (const auto& r : rows) {
    os << r.cell << "," << r.kappa << "," << r.method << "," << format_double(r.rmsfe) << ","
       << format_double(r.msfe) << "," << format_double(r.msfe_benchmark) << ","
       << r.n_reps_used << "," << r.n_failures << "\n";
  }
  return os.str();
}

std::string density_to_csv(const std::vector<std::pair<double, double>>& curve) {
  std::ostringstream os;
  os << "grid,density\n";
  for (const auto& [g, d] : curve) {
    os << format_double(g) << "," << format_double(d) << "\n";
  }
  return os.str();
}

std::string manifest_json(const std::string& command, std::uint64_t seed,
                          const std::string& config_text,
                          const std::vector<std::pair<std::string, std::string>>& flags) {
  std::uint64_t hash = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char c : config_text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  nlohmann::ordered_json j;
  j["version"] = "0.1.0";
  j["command"] = command;
  j["seed"] = seed;
  j["config_hash"] = hash;
  nlohmann::ordered_json f = nlohmann::ordered_json::object();
  for (const auto& [k, v] : flags) f[k] = v;
  j["flags"] = f;
  return j.dump(2) + "\n";
}

}  // namespace panelfc
