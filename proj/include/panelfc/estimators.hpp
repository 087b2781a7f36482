#pragma once

#include <armadillo>
#include <string>
#include <utility>

#include "panelfc/panel.hpp"

namespace panelfc {

// Per-unit coefficient estimates and one-step forecasts. For pooled fits all
// theta columns are equal; for FE they share the slope block but carry unit
// intercepts. forecasts(i) == dot(theta.col(i), w_{i,T+1}) by construction.
struct FitResult {
  std::string method;
  arma::mat theta;      // K x N
  arma::vec sigma2;     // N, residual variances RSS_i/(T-K)
  arma::vec forecasts;  // N
};

// Individual OLS: theta_i = (W_i'W_i)^-1 W_i'y_i, solved by pivoted QR.
FitResult fit_individual(const PanelDataset& data, const ForecastTarget& target);

// Pooled OLS: theta = (sum_i W_i'W_i)^-1 sum_i W_i'y_i.
FitResult fit_pooled(const PanelDataset& data, const ForecastTarget& target);

// Within estimator with per-unit intercepts alpha_i = ybar_i - beta'xbar_i.
FitResult fit_fixed_effects(const PanelDataset& data, const ForecastTarget& target);

struct RandomEffectsFit {
  double alpha = 0.0;       // GLS intercept
  arma::vec beta;           // k GLS slopes
  double sigma_u2 = 0.0;    // within error variance
  double sigma_eta2 = 0.0;  // unit effect variance (floored at 0)
  double rho = 1.0;         // sigma_u2 / (T sigma_eta2 + sigma_u2)
  double unit_shrinkage = 0.0;  // 1 - rho, BLUP weight on the mean residual
  arma::vec eps_bar;        // N mean GLS residuals
};

// Feasible GLS with the Goldberger BLUP correction:
//   yhat_i = alpha + beta'x_{i,T+1} + (1 - rho) epsbar_i.
std::pair<FitResult, RandomEffectsFit> fit_random_effects(const PanelDataset& data,
                                                          const ForecastTarget& target);

// Cross-sectional average of the individual OLS estimates.
arma::vec fit_mean_group(const PanelDataset& data);
arma::vec mean_group(const FitResult& individual);

// Split-sample estimates: theta_a from t = 1..Th, theta_b from t = Th+1..2Th
// with Th = floor(T/2) (last observation dropped when T is odd).
// theta_jk = 2 theta_i - (theta_a + theta_b)/2 and
// bias_proxy = (theta_a + theta_b)/2 - theta_i, so theta_jk = theta_i - bias_proxy.
struct JackknifeFit {
  arma::mat theta_a, theta_b;  // K x N
  arma::mat theta_jk;          // K x N
  arma::mat bias_proxy;        // K x N
};
JackknifeFit fit_half_jackknife(const PanelDataset& data);

// FE analog on demeaned data; all columns identical across units.
struct FeJackknife {
  arma::vec beta_a, beta_b;  // k
  arma::vec beta_jk;         // 2 beta_fe - (beta_a + beta_b)/2
  arma::vec bias_proxy;      // (beta_a + beta_b)/2 - beta_fe
};
FeJackknife fe_half_jackknife(const PanelDataset& data);

arma::vec forecast_errors(const FitResult& fit, const arma::vec& actuals);

}  // namespace panelfc
