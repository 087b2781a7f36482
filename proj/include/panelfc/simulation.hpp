#pragma once

#include <armadillo>
#include <cstdint>
#include <string>
#include <vector>

#include "panelfc/panel.hpp"

namespace panelfc {

enum class KappaRule { Zero, PlusMinusOne };

// ARX(1) design y_it = alpha_i + beta_i y_{i,t-1} + gamma_i x_it + eps_it with
// chi-square errors, AR(1) regressor, and optionally correlated heterogeneity
// in intercepts and slopes. sigma_alpha2 / sigma_gamma2 are the idiosyncratic
// coefficient variances; the correlation loadings phi = rho sqrt(s2)/sqrt(1-rho^2)
// add variance on top, so Var(alpha_i) = sigma_alpha2 / (1 - rho_alpha_x^2).
struct DgpSpec {
  int n_units = 100;
  int n_periods = 20;
  double beta0 = 0.775;
  double a_beta = 0.0;  // slope support width, beta_i ~ U(beta0 - a/2, beta0 + a/2)
  std::vector<double> alpha_groups = {2.0 / 3.0, 4.0 / 3.0};
  double sigma_alpha2 = 0.5;
  std::vector<double> gamma_groups = {0.1};
  double sigma_gamma2 = 0.0;
  double rho_gamma_x = 0.0;
  double rho_alpha_x = 0.0;
  KappaRule kappa_rule = KappaRule::Zero;
  std::uint64_t seed = 1;

  void validate() const;  // throws std::invalid_argument on contract violation
};

// The three heterogeneity settings used throughout the simulation study.
DgpSpec dgp_setting(int which, int n_units, int n_periods, double rho_gamma_x,
                    double rho_alpha_x, KappaRule kappa_rule, std::uint64_t seed);

struct UnitTruth {
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  double sigma2 = 0.0, mu_x = 0.0, rho_x = 0.0, sigma_x2 = 0.0;
  double kappa = 0.0;
  double y_mean = 0.0, y_var = 0.0;  // stationary moments given the unit parameters
};

struct SimulatedPanel {
  PanelDataset data;      // regressors (y_{t-1}, x_t)
  ForecastTarget target;  // w_{i,T+1} = (1, E y + kappa sd(y), mu_x + kappa sd(x))
  std::vector<UnitTruth> truth;
  arma::vec actuals;      // y_{i,T+1} = theta_i'w_{i,T+1} + fresh eps
};

SimulatedPanel generate_panel(const DgpSpec& spec);

// E[1/(1 - beta^2)] for beta ~ U(beta0 - a/2, beta0 + a/2); requires a > 0 and
// a < 2(1 - |beta0|).
double uniform_inverse_moment(double beta0, double a);

// E[eta/(B + eta)] for eta ~ U(-a/2, a/2); requires B^2 > a^2/4.
double ar1_eta_moment(double B, double a);

// Closed-form pooled R-squared implied by the DGP parameters.
double expected_pr2(const DgpSpec& spec);

struct Ar1AnalyticsResult {
  double e_inv = 0.0;     // E 1/(1-beta^2), closed form
  double e_y2eta = 0.0;   // E(y_{t-1}^2 eta), closed form
  double delta_ar = 0.0;  // combines closed forms with simulated moments
  double mc_e_inv = 0.0, mc_e_inv_se = 0.0;
  double mc_e_y2eta = 0.0, mc_e_y2eta_se = 0.0;
  double mc_e_eta2_inv = 0.0, mc_e_eta2_inv_se = 0.0;
  int n_draws = 0;
};

// Heterogeneity penalty of pooling in the pure AR(1) panel with
// beta_i = beta0 + U(-a/2, a/2) and error variance sigma2.
Ar1AnalyticsResult ar1_delta(double beta0, double a, double sigma2, int n_draws,
                             std::uint64_t seed);

// Plug-in combination components at the true unit parameters; psi is not
// identified in closed form for the ARX design and is returned as 0.
struct TrueComboComponents {
  double delta = 0.0;
  double h = 0.0;
  double psi = 0.0;
};
TrueComboComponents true_combo_components(const SimulatedPanel& sim);

}  // namespace panelfc
