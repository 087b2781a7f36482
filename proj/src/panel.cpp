#include "panelfc/panel.hpp"

#include <sstream>
#include <stdexcept>

namespace panelfc {

PanelDataset::PanelDataset(arma::mat y, arma::cube x,
                           std::vector<std::string> unit_labels,
                           std::vector<std::string> period_labels)
    : y_(std::move(y)), x_(std::move(x)),
      unit_labels_(std::move(unit_labels)),
      period_labels_(std::move(period_labels)) {
  if (x_.n_slices != y_.n_cols || x_.n_rows != y_.n_rows) {
    throw std::invalid_argument("PanelDataset: y and x dimensions disagree");
  }
  if (y_.n_cols == 0 || y_.n_rows == 0) {
    throw std::invalid_argument("PanelDataset: empty panel");
  }
  if (!unit_labels_.empty() && unit_labels_.size() != y_.n_cols) {
    throw std::invalid_argument("PanelDataset: unit label count mismatch");
  }
  if (!period_labels_.empty() && period_labels_.size() != y_.n_rows) {
    throw std::invalid_argument("PanelDataset: period label count mismatch");
  }
}

arma::mat PanelDataset::design(int unit) const {
  arma::mat w(n_periods(), n_coef());
  w.col(0).ones();
  if (n_regressors() > 0) w.cols(1, n_regressors()) = x_.slice(unit);
  return w;
}

PanelDataset PanelDataset::window(int first, int length) const {
  if (first < 0 || length < 1 || first + length > n_periods()) {
    throw std::invalid_argument("PanelDataset::window: range out of bounds");
  }
  arma::mat yw = y_.rows(first, first + length - 1);
  arma::cube xw(length, x_.n_cols, x_.n_slices);
  for (arma::uword i = 0; i < x_.n_slices; ++i) {
    xw.slice(i) = x_.slice(i).rows(first, first + length - 1);
  }
  std::vector<std::string> plabels;
  if (!period_labels_.empty()) {
    plabels.assign(period_labels_.begin() + first,
                   period_labels_.begin() + first + length);
  }
  return PanelDataset(std::move(yw), std::move(xw), unit_labels_, std::move(plabels));
}

ForecastTarget::ForecastTarget(arma::mat w_next) : w_(std::move(w_next)) {
  if (w_.n_rows == 0 || w_.n_cols == 0) {
    throw std::invalid_argument("ForecastTarget: empty");
  }
  if (!w_.is_finite()) {
    throw std::invalid_argument("ForecastTarget: non-finite entries");
  }
  if (arma::any(arma::abs(w_.col(0) - 1.0) > 0.0)) {
    throw std::invalid_argument("ForecastTarget: first column must be ones");
  }
}

ForecastTarget ForecastTarget::from_regressors(const arma::mat& x_next) {
  arma::mat w(x_next.n_rows, x_next.n_cols + 1);
  w.col(0).ones();
  if (x_next.n_cols > 0) w.cols(1, x_next.n_cols) = x_next;
  return ForecastTarget(std::move(w));
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  os << "panel " << n_units << "x" << n_periods << " (K=" << n_coef << "): ";
  if (passed()) {
    os << "ok";
    return os.str();
  }
  if (!t_exceeds_k) os << "[T<=K] ";
  if (!nonfinite_cells.empty()) os << "[" << nonfinite_cells.size() << " non-finite cells] ";
  if (!rank_deficient_units.empty()) {
    os << "[rank-deficient units:";
    for (int u : rank_deficient_units) os << " " << u;
    os << "]";
  }
  return os.str();
}

ValidationReport validate_panel(const PanelDataset& data) {
  ValidationReport rep;
  rep.n_units = data.n_units();
  rep.n_periods = data.n_periods();
  rep.n_coef = data.n_coef();
  rep.t_exceeds_k = data.n_periods() > data.n_coef();

  for (int i = 0; i < data.n_units(); ++i) {
    const arma::mat xi = data.regressors(i);
    for (int t = 0; t < data.n_periods(); ++t) {
      bool ok = std::isfinite(data.y(i, t));
      for (int j = 0; ok && j < data.n_regressors(); ++j) ok = std::isfinite(xi(t, j));
      if (!ok) rep.nonfinite_cells.emplace_back(i, t);
    }
  }
  if (!rep.nonfinite_cells.empty() || !rep.t_exceeds_k) return rep;

  const double t_inv = 1.0 / data.n_periods();
  for (int i = 0; i < data.n_units(); ++i) {
    const arma::mat w = data.design(i);
    if (is_rank_deficient_sym(t_inv * (w.t() * w))) rep.rank_deficient_units.push_back(i);
  }
  return rep;
}

arma::vec within_transform(const arma::vec& series) {
  if (series.n_elem == 0) {
    throw std::invalid_argument("within_transform: empty series");
  }
  return series - arma::mean(series);
}

UnitMoments unit_moments(const PanelDataset& data, int unit) {
  if (unit < 0 || unit >= data.n_units()) {
    throw std::invalid_argument("unit_moments: unit index out of range");
  }
  const int t = data.n_periods();
  const arma::mat w = data.design(unit);

  UnitMoments m;
  m.q = arma::symmatu(w.t() * w / t);
  if (is_rank_deficient_sym(m.q)) {
    throw SingularError("unit_moments: Q_iT rank deficient for unit " + std::to_string(unit));
  }
  const arma::mat x = data.regressors(unit);
  if (data.n_regressors() > 0) {
    m.xbar = arma::mean(x, 0).t();
    const arma::mat xc = x.each_row() - m.xbar.t();
    m.q_beta = arma::symmatu(xc.t() * xc / t);
  } else {
    m.xbar.set_size(0);
    m.q_beta.set_size(0, 0);
  }
  m.ybar = arma::mean(data.outcomes(unit));
  return m;
}

std::vector<UnitMoments> all_unit_moments(const PanelDataset& data) {
  std::vector<UnitMoments> out;
  out.reserve(data.n_units());
  for (int i = 0; i < data.n_units(); ++i) out.push_back(unit_moments(data, i));
  return out;
}

}  // namespace panelfc
