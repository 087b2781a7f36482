#pragma once

#include <armadillo>
#include <vector>

#include "panelfc/estimators.hpp"
#include "panelfc/panel.hpp"

namespace panelfc {

// Components of the common individual-vs-pooled combination weight
//   omega = (Delta - psi/T) / (Delta + h/T - 2 psi/T)
// clipped to [0,1]; a degenerate denominator falls back to equal weights.
struct PooledComboComponents {
  double delta_hat = 0.0;
  double h_hat = 0.0;
  double psi_hat = 0.0;
  double omega_raw = 0.0;
  double omega = 0.0;
  bool degenerate_denominator = false;
  bool psi_skipped = false;  // T < 2(K+1): psi forced to 0
};

struct FeComboComponents {
  double delta_fe_hat = 0.0;
  double h_beta_hat = 0.0;
  double psi_fe_hat = 0.0;
  double c_diff_hat = 0.0;  // chat_fe - chat_beta
  double omega_raw = 0.0;
  double omega = 0.0;
  bool degenerate_denominator = false;
  bool psi_skipped = false;
};

struct UnitWeightSet {
  arma::vec omegas;  // N, each in [0,1]
  std::vector<int> zero_heterogeneity_units;  // w'Omega w below tolerance, omega forced to 0
};

// Delta_hat = N^-1 sum_i (w_i'eta_i)^2 with eta_i = theta_pooled - theta_i.
double estimate_delta_hat(const FitResult& individual, const FitResult& pooled,
                          const ForecastTarget& target);

// h_hat = N^-1 sum_i sigma_i^2 w_i'Q_iT^-1 w_i (H_iT = sigma_i^2 Q_iT collapses
// the sandwich).
double estimate_h_hat(const FitResult& individual, const std::vector<UnitMoments>& moments,
                      const ForecastTarget& target);

// Half-jackknife estimate of the weak-exogeneity cross term.
double estimate_psi_hat(const PanelDataset& data, const FitResult& individual,
                        const JackknifeFit& jk, const ForecastTarget& target);

PooledComboComponents pooled_combination_weight(double delta_hat, double h_hat, double psi_hat,
                                                int n_periods);

// All three components plus the weight; psi is skipped below T = 2(K+1).
PooledComboComponents pooled_combo_components(const PanelDataset& data,
                                              const FitResult& individual,
                                              const FitResult& pooled,
                                              const std::vector<UnitMoments>& moments,
                                              const ForecastTarget& target);

FeComboComponents estimate_fe_components(const PanelDataset& data, const FitResult& individual,
                                         const FitResult& fe, const FeJackknife& jk,
                                         const ForecastTarget& target);
// As above but with psi skipped when the half samples are too short.
FeComboComponents fe_combo_components(const PanelDataset& data, const FitResult& individual,
                                      const FitResult& fe, const ForecastTarget& target);

// omega_i = [1 + sigma_i^2 T^-1 (w'Q_iT^-1 w)/(w'Omega w)]^-1.
UnitWeightSet unit_specific_weights(const FitResult& individual, const arma::mat& omega_eta,
                                    const std::vector<UnitMoments>& moments,
                                    const ForecastTarget& target, int n_periods);

arma::vec combine(const arma::vec& f_a, const arma::vec& f_b, double weight);
arma::vec combine(const arma::vec& f_a, const arma::vec& f_b, const arma::vec& weights);
arma::vec equal_weight_combination(const arma::vec& f_a, const arma::vec& f_b);

// Same weight formula evaluated at externally supplied (true) components.
PooledComboComponents oracle_weight(double delta, double h, double psi, int n_periods);

// In-sample optimal weight from realized forecast errors:
//   omega = (B - C)/(A + B - 2C), A = mean(e_a^2), B = mean(e_b^2), C = mean(e_a e_b).
double in_sample_weight(const arma::vec& e_a, const arma::vec& e_b);

}  // namespace panelfc
