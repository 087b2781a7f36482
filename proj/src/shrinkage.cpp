#include "panelfc/shrinkage.hpp"

#include <cmath>
#include <stdexcept>

namespace panelfc {

namespace {

arma::mat chol_lower_jittered(arma::mat m, int* jitter_count) {
  m = arma::symmatu(m) * 0.5 + arma::symmatl(m) * 0.5;
  arma::mat l;
  double jitter = 1e-10;
  for (int attempt = 0; attempt < 6; ++attempt) {
    if (arma::chol(l, m, "lower")) return l;
    if (jitter_count) ++(*jitter_count);
    m.diag() += jitter;
    jitter *= 10.0;
  }
  throw std::runtime_error("chol_lower_jittered: matrix not positive definite after jitter");
}

}  // namespace

EmpiricalBayesFit fit_empirical_bayes(const PanelDataset& data, const ForecastTarget& target) {
  return fit_empirical_bayes(data, target, fit_individual(data, target));
}

EmpiricalBayesFit fit_empirical_bayes(const PanelDataset& data, const ForecastTarget& target,
                                      const FitResult& individual,
                                      const arma::mat* omega_override) {
  const int n = data.n_units();
  const int t = data.n_periods();
  const int K = data.n_coef();

  const arma::vec thetabar = arma::mean(individual.theta, 1);

  EmpiricalBayesFit fit;
  if (omega_override) {
    fit.omega_eta = arma::symmatu(*omega_override);
  } else {
    arma::mat omega(K, K, arma::fill::zeros);
    for (int i = 0; i < n; ++i) {
      const arma::vec d = individual.theta.col(i) - thetabar;
      omega += d * d.t();
    }
    omega /= n;
    // Heterogeneity indistinguishable from rounding noise of identical unit
    // estimates: no ridge can make the weights meaningful.
    if (arma::trace(omega) <= 1e-24 * (1.0 + arma::dot(thetabar, thetabar))) {
      throw SingularError(
          "fit_empirical_bayes: degenerate heterogeneity, unit estimates are identical");
    }
    // Finite samples can leave Omega ill conditioned even when N > T; a
    // trace-scaled ridge keeps the inversion defined.
    if (is_rank_deficient_sym(omega)) {
      fit.ridge_lambda = 1e-8 * arma::trace(omega) / K;
      omega.diag() += fit.ridge_lambda;
    }
    if (is_rank_deficient_sym(omega)) {
      throw SingularError("fit_empirical_bayes: heterogeneity matrix not invertible");
    }
    fit.omega_eta = arma::symmatu(omega);
  }
  const arma::mat omega_inv = inv_spd(fit.omega_eta);

  fit.theta_eb.set_size(K, n);
  fit.weight_matrices.resize(n);
  const arma::mat eye = arma::eye(K, K);
  for (int i = 0; i < n; ++i) {
    const arma::mat w = data.design(i);
    const arma::mat wtw = w.t() * w;
    const double s2 = individual.sigma2(i);
    if (s2 < 1e-300) {
      // Noiseless unit: infinite precision on the unit estimate.
      fit.theta_eb.col(i) = individual.theta.col(i);
      fit.weight_matrices[i] = eye;
      continue;
    }
    const arma::mat a = wtw / s2 + omega_inv;
    fit.theta_eb.col(i) =
        arma::solve(a, w.t() * data.outcomes(i) / s2 + omega_inv * thetabar,
                    arma::solve_opts::likely_sympd);
    const arma::mat q_inv = inv_spd(arma::symmatu(wtw / t));
    fit.weight_matrices[i] = arma::inv(eye + (s2 / t) * q_inv * omega_inv);
  }

  fit.forecasts.set_size(n);
  for (int i = 0; i < n; ++i) {
    fit.forecasts(i) = arma::dot(fit.theta_eb.col(i), target.row(i));
  }
  return fit;
}

arma::vec draw_from_precision(const arma::mat& precision, const arma::vec& rhs, Rng& rng,
                              int* jitter_count) {
  const arma::mat l = chol_lower_jittered(precision, jitter_count);
  // mean = P^-1 rhs via the two triangular solves
  arma::vec mean = arma::solve(arma::trimatl(l), rhs);
  mean = arma::solve(arma::trimatu(l.t()), mean);
  std::normal_distribution<double> stdnorm(0.0, 1.0);
  arma::vec z(rhs.n_elem);
  for (arma::uword j = 0; j < z.n_elem; ++j) z(j) = stdnorm(rng);
  // x = mean + L'^-1 z has covariance (L L')^-1 = P^-1
  return mean + arma::solve(arma::trimatu(l.t()), z);
}

arma::mat draw_wishart(double df, const arma::mat& scale, Rng& rng, int* jitter_count) {
  const arma::uword p = scale.n_rows;
  if (df <= static_cast<double>(p) - 1.0) {
    throw std::invalid_argument("draw_wishart: df must exceed dimension - 1");
  }
  const arma::mat l = chol_lower_jittered(scale, jitter_count);
  std::normal_distribution<double> stdnorm(0.0, 1.0);
  arma::mat a(p, p, arma::fill::zeros);
  for (arma::uword i = 0; i < p; ++i) {
    std::chi_squared_distribution<double> chi2(df - static_cast<double>(i));
    a(i, i) = std::sqrt(chi2(rng));
    for (arma::uword j = 0; j < i; ++j) a(i, j) = stdnorm(rng);
  }
  const arma::mat la = l * a;
  return arma::symmatu(la * la.t());
}

GibbsTrace fit_hierarchical_bayes(const PanelDataset& data, const ForecastTarget& target,
                                  const GibbsConfig& config) {
  const int n = data.n_units();
  const int t = data.n_periods();
  const int K = data.n_coef();
  if (n < 2) throw std::invalid_argument("fit_hierarchical_bayes: requires N > 1");
  if (config.burn_in >= config.n_iter || config.burn_in < 0) {
    throw std::invalid_argument("fit_hierarchical_bayes: burn_in must be in [0, n_iter)");
  }

  double s_thetabar = 0.0, s_sigma = 0.0;
  switch (config.prior_setting) {
    case 1: s_thetabar = 1e6; s_sigma = 10.0; break;
    case 2: s_thetabar = 1e2; s_sigma = 1e2; break;
    case 3: s_thetabar = 1.0; s_sigma = 1.0; break;
    default:
      throw std::invalid_argument("fit_hierarchical_bayes: prior_setting must be 1, 2 or 3");
  }
  const double nu_sigma = config.nu_sigma;
  const double s2_prior = config.s2;
  const double nu_wishart = K;  // nu_Sigma = K keeps the Wishart well defined
  const arma::vec prior_d(K, arma::fill::zeros);
  const arma::mat s_thetabar_inv = arma::eye(K, K) / s_thetabar;
  const arma::mat nu_s_sigma = nu_wishart * s_sigma * arma::eye(K, K);

  // Per-unit cross products, fixed across iterations.
  std::vector<arma::mat> wtw(n);
  std::vector<arma::vec> wty(n);
  for (int i = 0; i < n; ++i) {
    const arma::mat w = data.design(i);
    wtw[i] = w.t() * w;
    wty[i] = w.t() * data.outcomes(i);
  }

  // Initial values from the individual least squares fit.
  const FitResult ind = fit_individual(data, target);
  double rss0 = 0.0;
  for (int i = 0; i < n; ++i) {
    const arma::vec r = data.outcomes(i) - data.design(i) * ind.theta.col(i);
    rss0 += arma::dot(r, r);
  }
  double sigma2 = rss0 / (static_cast<double>(n) * t - K);
  arma::vec thetabar = arma::mean(ind.theta, 1);
  arma::mat sigma_theta_inv(K, K, arma::fill::zeros);
  for (int i = 0; i < n; ++i) {
    const arma::vec d = ind.theta.col(i) - thetabar;
    sigma_theta_inv += d * d.t();
  }
  sigma_theta_inv /= n;
  sigma_theta_inv = arma::symmatu(sigma_theta_inv);

  Rng rng = make_rng(config.seed);

  const int keep = config.n_iter - config.burn_in;
  GibbsTrace trace;
  trace.theta_draws.set_size(K, n, keep);
  trace.sigma2_draws.set_size(keep);
  trace.thetabar_draws.set_size(K, keep);
  trace.forecast_mean.zeros(n);

  arma::mat theta(K, n);
  for (int r = 0; r < config.n_iter; ++r) {
    // theta_i | . ~ N(b_i, S_i), S_i = (sigma^-2 W'W + Sigma^-1)^-1
    for (int i = 0; i < n; ++i) {
      theta.col(i) = draw_from_precision(wtw[i] / sigma2 + sigma_theta_inv,
                                         wty[i] / sigma2 + sigma_theta_inv * thetabar, rng,
                                         &trace.jitter_count);
    }
    // sigma^2 | . ~ invGamma([NT + nu]/2, [RSS + nu s^2]/2)
    double rss = 0.0;
    for (int i = 0; i < n; ++i) {
      const arma::vec r_i = data.outcomes(i) - data.design(i) * theta.col(i);
      rss += arma::dot(r_i, r_i);
    }
    {
      const double shape = 0.5 * (static_cast<double>(n) * t + nu_sigma);
      const double rate = 0.5 * (rss + nu_sigma * s2_prior);
      std::gamma_distribution<double> gamma(shape, 1.0 / rate);
      sigma2 = 1.0 / gamma(rng);
    }
    // thetabar | . ~ N(h, S_h)
    thetabar = draw_from_precision(
        n * sigma_theta_inv + s_thetabar_inv,
        sigma_theta_inv * arma::sum(theta, 1) + s_thetabar_inv * prior_d, rng,
        &trace.jitter_count);
    // Sigma^-1 | . ~ Wishart(N + nu, [sum (theta_i - thetabar)(.)' + nu S_Sigma]^-1)
    arma::mat scatter = nu_s_sigma;
    for (int i = 0; i < n; ++i) {
      const arma::vec d = theta.col(i) - thetabar;
      scatter += d * d.t();
    }
    sigma_theta_inv = draw_wishart(n + nu_wishart, inv_spd(arma::symmatu(scatter)), rng,
                                   &trace.jitter_count);

    if (r >= config.burn_in) {
      const int idx = r - config.burn_in;
      trace.theta_draws.slice(idx) = theta;
      trace.sigma2_draws(idx) = sigma2;
      trace.thetabar_draws.col(idx) = thetabar;
      for (int i = 0; i < n; ++i) {
        trace.forecast_mean(i) += arma::dot(theta.col(i), target.row(i));
      }
    }
  }
  trace.forecast_mean /= keep;
  return trace;
}

}  // namespace panelfc
