#include "panelfc/rolling.hpp"

#include <algorithm>
#include <stdexcept>

#include "panelfc/estimators.hpp"
#include "panelfc/rng.hpp"

namespace panelfc {

RollingResult run_rolling(const PanelDataset& panel, const RollingConfig& config) {
  const int t_total = panel.n_periods();
  const int w = config.window;
  if (w <= panel.n_coef() + 1) {
    throw std::invalid_argument("run_rolling: window must exceed K + 1");
  }
  if (t_total < w + 2) {
    throw std::invalid_argument("run_rolling: panel needs at least window + 2 periods");
  }
  if (config.methods.empty()) throw std::invalid_argument("run_rolling: no methods");
  if (std::find(config.methods.begin(), config.methods.end(), config.benchmark) ==
      config.methods.end()) {
    throw std::invalid_argument("run_rolling: benchmark not in method list");
  }
  const int n = panel.n_units();

  RollingResult out;
  for (int origin = w - 1; origin + 1 < t_total; ++origin) {
    const PanelDataset est = panel.window(origin - w + 1, w);
    arma::mat x_next(n, panel.n_regressors());
    for (int i = 0; i < n; ++i) {
      x_next.row(i) = panel.regressors(i).row(origin + 1);
    }
    const ForecastTarget target = ForecastTarget::from_regressors(x_next);

    try {
      MethodOptions opt;
      opt.gibbs = config.gibbs;
      opt.gibbs.seed = derive_seed(config.seed, static_cast<std::uint64_t>(origin));
      const auto forecasts = method_forecasts(est, target, config.methods, opt);

      // d statistics from the individual fit on this window only.
      const FitResult ind = fit_individual(est, target);
      for (int i = 0; i < n; ++i) {
        const arma::vec fitted = est.design(i) * ind.theta.col(i);
        ConditioningStat cs;
        cs.unit = i;
        cs.origin = origin;
        cs.d = arma::dot(ind.theta.col(i), target.row(i));
        cs.mean = arma::mean(fitted);
        cs.sd = arma::stddev(fitted);
        out.d_stats.push_back(cs);
      }
      for (const auto& m : config.methods) {
        const arma::vec& f = forecasts.at(m);
        for (int i = 0; i < n; ++i) {
          out.records.push_back({i, origin, m, f(i), panel.y(i, origin + 1)});
        }
      }
    } catch (const std::exception&) {
      out.failed_origins.push_back(origin);
    }
  }
  if (out.records.empty()) throw std::runtime_error("run_rolling: every origin failed");

  std::sort(out.records.begin(), out.records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.origin, a.unit, a.method) < std::tie(b.origin, b.unit, b.method);
  });

  out.reports.emplace("all",
                      msfe_report(out.records, config.benchmark, config.methods, "all"));
  const auto near = conditioning_filter(out.d_stats, 0.0, config.conditioning_c);
  const auto away = conditioning_filter(out.d_stats, 1.0, config.conditioning_c);
  const auto near_records = filter_records(out.records, near);
  const auto away_records = filter_records(out.records, away);
  if (!near_records.empty()) {
    out.reports.emplace(
        "near_mean", msfe_report(near_records, config.benchmark, config.methods, "near_mean"));
  }
  if (!away_records.empty()) {
    out.reports.emplace(
        "one_sd", msfe_report(away_records, config.benchmark, config.methods, "one_sd"));
  }

  // DM tests on the aligned records. Short backtests clamp the lag order so
  // the HAC window always fits the series.
  std::map<std::pair<std::string, int>, std::map<long, double>> losses;
  long n_origins = 0;
  for (const auto& r : out.records) {
    const double e = r.actual - r.forecast;
    losses[{r.method, r.unit}][r.origin] = e * e;
  }
  if (!losses.empty()) n_origins = static_cast<long>(losses.begin()->second.size());
  auto clamped_lags = [&](long n_obs) {
    const int requested = config.hac_lags < 0 ? default_hac_lags(n_obs) : config.hac_lags;
    return static_cast<int>(std::min<long>(requested, std::max<long>(n_obs - 2, 0)));
  };
  for (const auto& m : config.methods) {
    if (m == config.benchmark) continue;
    DmResult panel_dm =
        dm_test_panel(out.records, m, config.benchmark, clamped_lags(n_origins));
    out.dm_panel.push_back(panel_dm);
    for (int i = 0; i < n; ++i) {
      const auto& lm = losses.at({m, i});
      const auto& lb = losses.at({config.benchmark, i});
      arma::vec vm(lm.size()), vb(lb.size());
      arma::uword j = 0;
      for (const auto& [origin, v] : lm) {
        vm(j) = v;
        vb(j) = lb.at(origin);
        ++j;
      }
      DmResult r = dm_test_unit(vm, vb, clamped_lags(static_cast<long>(vm.n_elem)));
      r.method = m;
      r.benchmark = config.benchmark;
      r.scope_unit = i;
      out.dm_units.push_back(r);
    }
  }
  return out;
}

}  // namespace panelfc
