#include "panelfc/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace panelfc {

EvaluationReport msfe_report(const std::vector<ForecastRecord>& records,
                             const std::string& benchmark,
                             const std::vector<std::string>& methods,
                             const std::string& subset_label) {
  EvaluationReport rep;
  rep.benchmark = benchmark;
  rep.subset = subset_label;
  rep.methods = methods;
  std::sort(rep.methods.begin(), rep.methods.end());
  if (std::find(rep.methods.begin(), rep.methods.end(), benchmark) == rep.methods.end()) {
    throw std::invalid_argument("msfe_report: benchmark not in method list");
  }

  // method -> (unit, origin) -> squared error
  std::map<std::string, std::map<std::pair<int, long>, double>> sq;
  for (const auto& r : records) {
    if (std::find(rep.methods.begin(), rep.methods.end(), r.method) == rep.methods.end()) {
      continue;
    }
    const double e = r.actual - r.forecast;
    auto [it, inserted] = sq[r.method].emplace(std::make_pair(r.unit, r.origin), e * e);
    if (!inserted) throw std::invalid_argument("msfe_report: duplicate (unit, origin, method)");
  }
  const auto bench_it = sq.find(benchmark);
  if (bench_it == sq.end() || bench_it->second.empty()) {
    throw std::invalid_argument("msfe_report: no records for benchmark");
  }
  for (const auto& m : rep.methods) {
    auto it = sq.find(m);
    if (it == sq.end()) throw std::invalid_argument("msfe_report: no records for method " + m);
    if (it->second.size() != bench_it->second.size()) {
      throw std::invalid_argument("msfe_report: records misaligned across methods");
    }
    for (const auto& [key, val] : it->second) {
      if (!bench_it->second.count(key)) {
        throw std::invalid_argument("msfe_report: records misaligned across methods");
      }
    }
  }

  std::set<long> origins;
  std::set<int> unit_set;
  for (const auto& [key, val] : bench_it->second) {
    unit_set.insert(key.first);
    origins.insert(key.second);
  }
  rep.units.assign(unit_set.begin(), unit_set.end());
  rep.n_origins = static_cast<long>(origins.size());

  for (const auto& m : rep.methods) {
    std::map<int, double> acc;
    std::map<int, long> cnt;
    for (const auto& [key, val] : sq[m]) {
      acc[key.first] += val;
      cnt[key.first] += 1;
    }
    for (auto& [u, s] : acc) s /= cnt[u];
    rep.unit_msfe[m] = std::move(acc);
  }

  const auto& bench_msfe = rep.unit_msfe[benchmark];
  double bench_mean = 0.0;
  for (const auto& [u, v] : bench_msfe) bench_mean += v;
  bench_mean /= rep.units.size();

  for (const auto& m : rep.methods) {
    MethodStats st;
    const auto& um = rep.unit_msfe[m];
    for (const auto& [u, v] : um) st.msfe += v;
    st.msfe /= rep.units.size();
    st.rmsfe = st.msfe / bench_mean;
    long beat = 0;
    for (int u : rep.units) {
      if (um.at(u) < bench_msfe.at(u)) ++beat;
    }
    st.beat_freq = static_cast<double>(beat) / rep.units.size();
    rep.stats[m] = st;
  }

  // Best/worst per unit; ties resolved toward the lexicographically first
  // method (methods are already sorted, so strict comparisons suffice).
  for (int u : rep.units) {
    std::string best = rep.methods.front(), worst = rep.methods.front();
    double bv = rep.unit_msfe[best].at(u), wv = bv;
    for (const auto& m : rep.methods) {
      const double v = rep.unit_msfe[m].at(u);
      if (v < bv) { bv = v; best = m; }
      if (v > wv) { wv = v; worst = m; }
    }
    rep.stats[best].best_freq += 1.0;
    rep.stats[worst].worst_freq += 1.0;
  }
  for (auto& [m, st] : rep.stats) {
    st.best_freq /= rep.units.size();
    st.worst_freq /= rep.units.size();
  }
  return rep;
}

ConditioningSubset conditioning_filter(const std::vector<ConditioningStat>& stats, double kappa,
                                       double c) {
  ConditioningSubset out;
  std::set<int> zero_sd;
  for (const auto& s : stats) {
    if (!(s.sd > 0.0)) {
      zero_sd.insert(s.unit);
      continue;
    }
    const bool in_plus = std::abs(s.d - s.mean - kappa * s.sd) < c * s.sd;
    const bool in_minus =
        kappa != 0.0 && std::abs(s.d - s.mean + kappa * s.sd) < c * s.sd;
    if (in_plus || in_minus) out.keys.emplace(s.unit, s.origin);
  }
  out.zero_sd_units.assign(zero_sd.begin(), zero_sd.end());
  return out;
}

std::vector<ForecastRecord> filter_records(const std::vector<ForecastRecord>& records,
                                           const ConditioningSubset& subset) {
  std::vector<ForecastRecord> out;
  for (const auto& r : records) {
    if (subset.keys.count({r.unit, r.origin})) out.push_back(r);
  }
  return out;
}

int default_hac_lags(long n) {
  if (n <= 0) return 0;
  return static_cast<int>(std::floor(4.0 * std::pow(n / 100.0, 2.0 / 9.0)));
}

DmResult dm_test_unit(const arma::vec& loss_method, const arma::vec& loss_benchmark,
                      int hac_lags) {
  if (loss_method.n_elem != loss_benchmark.n_elem) {
    throw std::invalid_argument("dm_test_unit: series length mismatch");
  }
  const long n = static_cast<long>(loss_method.n_elem);
  if (hac_lags < 0) hac_lags = default_hac_lags(n);
  if (n < hac_lags + 2) {
    throw std::invalid_argument("dm_test_unit: series too short for requested lags");
  }

  const arma::vec d = loss_method - loss_benchmark;
  const double dbar = arma::mean(d);
  const arma::vec dc = d - dbar;

  // Bartlett-kernel long-run variance.
  double lrv = arma::dot(dc, dc) / n;
  for (int j = 1; j <= hac_lags; ++j) {
    double g = 0.0;
    for (long s = j; s < n; ++s) g += dc(s) * dc(s - j);
    g /= n;
    lrv += 2.0 * (1.0 - static_cast<double>(j) / (hac_lags + 1)) * g;
  }

  DmResult res;
  res.hac_lags = hac_lags;
  res.n_obs = n;
  const double scale = arma::dot(d, d) / n;  // gamma_0 + dbar^2
  if (lrv <= 1e-12 * scale || !(lrv > 0.0)) {
    res.degenerate = true;
    return res;
  }
  res.statistic = dbar / std::sqrt(lrv / n);
  return res;
}

DmResult dm_test_panel(const std::vector<ForecastRecord>& records, const std::string& method,
                       const std::string& benchmark, int hac_lags) {
  // origin -> (sum of squared errors, count) per side
  std::map<long, std::pair<double, long>> m_acc, b_acc;
  for (const auto& r : records) {
    const double e2 = (r.actual - r.forecast) * (r.actual - r.forecast);
    if (r.method == method) {
      m_acc[r.origin].first += e2;
      m_acc[r.origin].second += 1;
    } else if (r.method == benchmark) {
      b_acc[r.origin].first += e2;
      b_acc[r.origin].second += 1;
    }
  }
  if (m_acc.size() != b_acc.size() || m_acc.empty()) {
    throw std::invalid_argument("dm_test_panel: records misaligned");
  }
  arma::vec lm(m_acc.size()), lb(m_acc.size());
  arma::uword idx = 0;
  for (const auto& [origin, acc] : m_acc) {
    auto it = b_acc.find(origin);
    if (it == b_acc.end() || it->second.second != acc.second) {
      throw std::invalid_argument("dm_test_panel: records misaligned");
    }
    lm(idx) = acc.first / acc.second;
    lb(idx) = it->second.first / it->second.second;
    ++idx;
  }
  DmResult res = dm_test_unit(lm, lb, hac_lags);
  res.method = method;
  res.benchmark = benchmark;
  res.scope_unit = -1;
  return res;
}

std::vector<std::pair<double, double>> density_curve(const arma::vec& values, double bandwidth,
                                                     const arma::vec& grid) {
  if (values.n_elem < 2) throw std::invalid_argument("density_curve: needs >= 2 values");
  if (!(bandwidth > 0.0)) throw std::invalid_argument("density_curve: bandwidth must be > 0");
  arma::vec g = grid;
  if (g.n_elem == 0) {
    g = arma::linspace(values.min() - 4.0 * bandwidth, values.max() + 4.0 * bandwidth, 512);
  }
  const double norm = 1.0 / (values.n_elem * bandwidth * std::sqrt(2.0 * arma::datum::pi));
  std::vector<std::pair<double, double>> out;
  out.reserve(g.n_elem);
  for (arma::uword j = 0; j < g.n_elem; ++j) {
    double acc = 0.0;
    for (arma::uword i = 0; i < values.n_elem; ++i) {
      const double z = (g(j) - values(i)) / bandwidth;
      acc += std::exp(-0.5 * z * z);
    }
    out.emplace_back(g(j), norm * acc);
  }
  return out;
}

}  // namespace panelfc
