#pragma once

#include <armadillo>
#include <cstdint>
#include <vector>

#include "panelfc/estimators.hpp"
#include "panelfc/panel.hpp"
#include "panelfc/rng.hpp"

namespace panelfc {

// Precision-weighted shrinkage of the unit estimates toward the mean group
// estimate:
//   theta_eb_i = (sigma_i^-2 W_i'W_i + Omega^-1)^-1 (sigma_i^-2 W_i'y_i + Omega^-1 thetabar)
// which equals W_iT theta_i + (I - W_iT) thetabar with
//   W_iT = (I + T^-1 sigma_i^2 Q_iT^-1 Omega^-1)^-1.
struct EmpiricalBayesFit {
  arma::mat omega_eta;   // K x K dispersion of the unit estimates (after ridge)
  double ridge_lambda = 0.0;
  arma::mat theta_eb;    // K x N
  std::vector<arma::mat> weight_matrices;  // per unit K x K
  arma::vec forecasts;   // N
};

EmpiricalBayesFit fit_empirical_bayes(const PanelDataset& data, const ForecastTarget& target);

// Variant reusing a precomputed individual fit; omega_override substitutes the
// dispersion matrix (no ridge applied to an override).
EmpiricalBayesFit fit_empirical_bayes(const PanelDataset& data, const ForecastTarget& target,
                                      const FitResult& individual,
                                      const arma::mat* omega_override = nullptr);

struct GibbsConfig {
  int n_iter = 1500;
  int burn_in = 500;
  int prior_setting = 1;  // (S_thetabar, S_Sigma): 1 = (1e6 I, 10 I), 2 = (1e2 I, 1e2 I), 3 = (I, I)
  double nu_sigma = 0.1;
  double s2 = 0.1;
  std::uint64_t seed = 1;
};

struct GibbsTrace {
  arma::cube theta_draws;    // K x N x (n_iter - burn_in)
  arma::vec sigma2_draws;    // retained draws
  arma::mat thetabar_draws;  // K x retained
  arma::vec forecast_mean;   // N, average of theta_r'w over all retained draws
  int jitter_count = 0;
};

// Four-block Gibbs sampler for the hierarchical normal model with
// Wishart/inverse-gamma hyperpriors. Reproducible given config.seed.
GibbsTrace fit_hierarchical_bayes(const PanelDataset& data, const ForecastTarget& target,
                                  const GibbsConfig& config);

// Draw from N(P^-1 rhs, P^-1) given the precision P. Used for every normal
// block of the chain; re-symmetrizes and jitters on Cholesky failure.
arma::vec draw_from_precision(const arma::mat& precision, const arma::vec& rhs, Rng& rng,
                              int* jitter_count = nullptr);

// Wishart(df, scale) via the Bartlett decomposition.
arma::mat draw_wishart(double df, const arma::mat& scale, Rng& rng, int* jitter_count = nullptr);

}  // namespace panelfc
