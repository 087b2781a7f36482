#include "panelfc/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace panelfc {

namespace {

std::vector<std::string> split_csv_line(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& s, long line_no) {
  double v{};
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw std::invalid_argument("ingest_csv: line " + std::to_string(line_no) +
                                ": cannot parse number '" + s + "'");
  }
  return v;
}

}  // namespace

PanelDataset ingest_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("ingest_csv: cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("ingest_csv: empty file " + path);
  const std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 3 || header[0] != "unit_id" || header[1] != "period" || header[2] != "y") {
    throw std::invalid_argument("ingest_csv: header must start unit_id,period,y");
  }
  const int n_x = static_cast<int>(header.size()) - 3;
  std::map<std::string, int> x_index;  // header name -> x column
  for (int j = 0; j < n_x; ++j) x_index[header[3 + j]] = j;

  // unit -> period -> row values
  std::map<std::string, std::map<std::string, std::vector<double>>> cells;
  std::set<std::string> all_periods;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw std::invalid_argument("ingest_csv: line " + std::to_string(line_no) +
                                  ": expected " + std::to_string(header.size()) + " fields, got " +
                                  std::to_string(fields.size()));
    }
    std::vector<double> vals(1 + n_x);
    vals[0] = parse_double(fields[2], line_no);
    for (int j = 0; j < n_x; ++j) vals[1 + j] = parse_double(fields[3 + j], line_no);
    auto [it, inserted] = cells[fields[0]].emplace(fields[1], std::move(vals));
    if (!inserted) {
      throw std::invalid_argument("ingest_csv: line " + std::to_string(line_no) +
                                  ": duplicate (unit, period) cell");
    }
    all_periods.insert(fields[1]);
  }
  if (cells.empty()) throw std::invalid_argument("ingest_csv: no data rows in " + path);

  // Balance check against the union of period labels.
  std::vector<std::string> offenders;
  for (const auto& [unit, rows] : cells) {
    if (rows.size() != all_periods.size()) offenders.push_back(unit);
  }
  if (!offenders.empty()) {
    std::ostringstream os;
    os << "ingest_csv: unbalanced panel after alignment; offending units:";
    for (const auto& u : offenders) os << " " << u;
    throw std::invalid_argument(os.str());
  }

  std::vector<std::string> units;
  for (const auto& [unit, rows] : cells) units.push_back(unit);
  const std::vector<std::string> periods(all_periods.begin(), all_periods.end());
  const int n = static_cast<int>(units.size());
  const int t_raw = static_cast<int>(periods.size());

  arma::mat y_raw(t_raw, n);
  arma::cube x_raw(t_raw, std::max(n_x, 1), n);
  x_raw.zeros();
  for (int i = 0; i < n; ++i) {
    const auto& rows = cells[units[i]];
    for (int t = 0; t < t_raw; ++t) {
      const auto& vals = rows.at(periods[t]);
      y_raw(t, i) = vals[0];
      for (int j = 0; j < n_x; ++j) x_raw(t, j, i) = vals[1 + j];
    }
  }

  std::vector<ColumnSpec> specs = schema.regressors;
  if (specs.empty()) {
    for (int j = 0; j < n_x; ++j) specs.push_back({header[3 + j], 0});
  }
  int max_lag = 0;
  for (const auto& s : specs) {
    if (s.lag < 0) throw std::invalid_argument("ingest_csv: negative lag");
    if (s.source != "y" && !x_index.count(s.source)) {
      throw std::invalid_argument("ingest_csv: unknown regressor source '" + s.source + "'");
    }
    max_lag = std::max(max_lag, s.lag);
  }
  const int t_out = t_raw - max_lag;
  if (t_out < 1) throw std::invalid_argument("ingest_csv: lags leave no usable periods");

  arma::mat y(t_out, n);
  arma::cube x(t_out, specs.size(), n);
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < t_out; ++t) {
      const int tr = t + max_lag;
      y(t, i) = y_raw(tr, i);
      for (std::size_t j = 0; j < specs.size(); ++j) {
        const int src_t = tr - specs[j].lag;
        x(t, j, i) = specs[j].source == "y" ? y_raw(src_t, i)
                                            : x_raw(src_t, x_index.at(specs[j].source), i);
      }
    }
  }
  std::vector<std::string> plabels(periods.begin() + max_lag, periods.end());
  return PanelDataset(std::move(y), std::move(x), std::move(units), std::move(plabels));
}

}  // namespace panelfc
