#pragma once

#include <armadillo>
#include <string>
#include <utility>
#include <vector>

#include "panelfc/linalg.hpp"

namespace panelfc {

// Balanced panel of N units observed over T periods with k regressors per
// cell. Storage is unit major: column i of the outcome matrix and slice i of
// the regressor cube hold the T observations of unit i. Immutable after
// construction.
class PanelDataset {
 public:
  // y: T x N outcomes; x: T x k x N regressors (k may be 0). Regressors are
  // assumed known at the forecast origin, i.e. already lagged as needed.
  PanelDataset(arma::mat y, arma::cube x,
               std::vector<std::string> unit_labels = {},
               std::vector<std::string> period_labels = {});

  int n_units() const { return static_cast<int>(y_.n_cols); }
  int n_periods() const { return static_cast<int>(y_.n_rows); }
  int n_regressors() const { return static_cast<int>(x_.n_cols); }
  int n_coef() const { return n_regressors() + 1; }  // K = k + 1 with intercept

  double y(int unit, int period) const { return y_(period, unit); }
  arma::vec outcomes(int unit) const { return y_.col(unit); }
  const arma::mat& outcome_matrix() const { return y_; }
  const arma::cube& regressor_cube() const { return x_; }

  // T x k regressor block of one unit.
  arma::mat regressors(int unit) const { return x_.slice(unit); }

  // T x K design [1, X_i] of one unit.
  arma::mat design(int unit) const;

  // Copy of the sub-panel covering periods [first, first + length).
  PanelDataset window(int first, int length) const;

  const std::vector<std::string>& unit_labels() const { return unit_labels_; }
  const std::vector<std::string>& period_labels() const { return period_labels_; }

 private:
  arma::mat y_;
  arma::cube x_;
  std::vector<std::string> unit_labels_;
  std::vector<std::string> period_labels_;
};

// Conditioning information for the one-step-ahead forecast: row i holds
// w_{i,T+1} = (1, x_{i,T+1}')'.
class ForecastTarget {
 public:
  explicit ForecastTarget(arma::mat w_next);

  // Prepends the intercept column to an N x k matrix of next-period regressors.
  static ForecastTarget from_regressors(const arma::mat& x_next);

  int n_units() const { return static_cast<int>(w_.n_rows); }
  int n_coef() const { return static_cast<int>(w_.n_cols); }
  arma::vec row(int unit) const { return w_.row(unit).t(); }
  const arma::mat& matrix() const { return w_; }

 private:
  arma::mat w_;
};

struct UnitMoments {
  arma::mat q;       // K x K  T^-1 W_i'W_i
  arma::mat q_beta;  // k x k  T^-1 X_i'M_T X_i
  arma::vec xbar;    // k      regressor time means
  double ybar = 0.0;
};

struct ValidationReport {
  int n_units = 0;
  int n_periods = 0;
  int n_coef = 0;
  bool t_exceeds_k = true;
  std::vector<int> rank_deficient_units;
  std::vector<std::pair<int, int>> nonfinite_cells;  // (unit, period)

  bool passed() const {
    return t_exceeds_k && rank_deficient_units.empty() && nonfinite_cells.empty();
  }
  std::string summary() const;
};

// Reporting only; fitters reject invalid panels themselves.
ValidationReport validate_panel(const PanelDataset& data);

// Removes the time mean: M_T v with M_T = I - tau (tau'tau)^-1 tau'.
arma::vec within_transform(const arma::vec& series);

// Sample moments of one unit; throws SingularError when Q_iT is rank
// deficient beyond tolerance.
UnitMoments unit_moments(const PanelDataset& data, int unit);
std::vector<UnitMoments> all_unit_moments(const PanelDataset& data);

}  // namespace panelfc
