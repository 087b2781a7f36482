#include "panelfc/spatial.hpp"

#include <map>
#include <stdexcept>

namespace panelfc {

SpatialResult build_spatial_regressors(const PanelDataset& panel, const SpatialSpec& spec) {
  const int n = panel.n_units();
  const int t = panel.n_periods();
  if (static_cast<int>(spec.adjacency.n_rows) != n ||
      static_cast<int>(spec.adjacency.n_cols) != n) {
    throw std::invalid_argument("build_spatial_regressors: adjacency must be N x N");
  }
  if (spec.include_region_avg && static_cast<int>(spec.region_map.size()) != n) {
    throw std::invalid_argument("build_spatial_regressors: region map incomplete");
  }
  if (t < 2) throw std::invalid_argument("build_spatial_regressors: needs T >= 2");

  // Row-normalized weights; zero-neighbor units are recorded and dropped.
  arma::mat weights(n, n, arma::fill::zeros);
  std::vector<int> kept, dropped;
  for (int i = 0; i < n; ++i) {
    double deg = 0.0;
    for (int k = 0; k < n; ++k) {
      if (k != i && spec.adjacency(i, k) != 0) deg += 1.0;
    }
    if (deg == 0.0) {
      dropped.push_back(i);
      continue;
    }
    kept.push_back(i);
    for (int k = 0; k < n; ++k) {
      if (k != i && spec.adjacency(i, k) != 0) weights(i, k) = 1.0 / deg;
    }
  }
  if (kept.empty()) {
    throw std::invalid_argument("build_spatial_regressors: every unit lacks neighbors");
  }

  const arma::mat& y = panel.outcome_matrix();  // T x N
  const arma::mat y_star = y * weights.t();     // y*_it = sum_k w_ik y_kt

  arma::mat y_region;
  if (spec.include_region_avg) {
    y_region.set_size(t, n);
    std::map<int, std::vector<int>> by_region;
    for (int i = 0; i < n; ++i) by_region[spec.region_map[i]].push_back(i);
    for (const auto& [region, members] : by_region) {
      arma::vec avg(t, arma::fill::zeros);
      for (int m : members) avg += y.col(m);
      avg /= static_cast<double>(members.size());
      for (int m : members) y_region.col(m) = avg;
    }
  }
  const arma::vec y_country = arma::mean(y, 1);

  const int k_in = panel.n_regressors();
  int k_out = k_in + 1;  // y* always appended
  if (spec.include_own_lag) ++k_out;
  if (spec.include_region_avg) ++k_out;
  if (spec.include_country_avg) ++k_out;

  const int t_out = t - 1;
  arma::mat y_out(t_out, kept.size());
  arma::cube x_out(t_out, k_out, kept.size());
  for (std::size_t ii = 0; ii < kept.size(); ++ii) {
    const int i = kept[ii];
    y_out.col(ii) = y.col(i).rows(1, t - 1);
    const arma::mat xi = panel.regressors(i);
    int col = 0;
    for (; col < k_in; ++col) {
      x_out.subcube(0, col, ii, t_out - 1, col, ii) = xi.col(col).rows(1, t - 1);
    }
    auto put_lagged = [&](const arma::vec& series) {
      x_out.subcube(0, col, ii, t_out - 1, col, ii) = series.rows(0, t - 2);
      ++col;
    };
    if (spec.include_own_lag) put_lagged(y.col(i));
    put_lagged(y_star.col(i));
    if (spec.include_region_avg) put_lagged(y_region.col(i));
    if (spec.include_country_avg) put_lagged(y_country);
  }

  std::vector<std::string> unit_labels;
  if (!panel.unit_labels().empty()) {
    for (int i : kept) unit_labels.push_back(panel.unit_labels()[i]);
  }
  std::vector<std::string> period_labels;
  if (!panel.period_labels().empty()) {
    period_labels.assign(panel.period_labels().begin() + 1, panel.period_labels().end());
  }
  SpatialResult out{
      PanelDataset(std::move(y_out), std::move(x_out), std::move(unit_labels),
                   std::move(period_labels)),
      std::move(kept), std::move(dropped)};
  return out;
}

}  // namespace panelfc
