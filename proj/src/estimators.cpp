#include "panelfc/estimators.hpp"

#include <stdexcept>

namespace panelfc {

namespace {

void require_estimable(const PanelDataset& data, const char* who) {
  if (data.n_periods() <= data.n_coef()) {
    throw std::invalid_argument(std::string(who) + ": requires T > K");
  }
}

void require_target(const PanelDataset& data, const ForecastTarget& target, const char* who) {
  if (target.n_units() != data.n_units() || target.n_coef() != data.n_coef()) {
    throw std::invalid_argument(std::string(who) + ": target shape mismatch");
  }
}

arma::vec forecasts_from_theta(const arma::mat& theta, const ForecastTarget& target) {
  const int n = target.n_units();
  arma::vec f(n);
  for (int i = 0; i < n; ++i) f(i) = arma::dot(theta.col(i), target.row(i));
  return f;
}

// Residual variance per unit at the given coefficients, divisor T - K.
arma::vec residual_variances(const PanelDataset& data, const arma::mat& theta) {
  const int n = data.n_units();
  const int dof = data.n_periods() - data.n_coef();
  arma::vec s2(n);
  for (int i = 0; i < n; ++i) {
    const arma::vec r = data.outcomes(i) - data.design(i) * theta.col(i);
    s2(i) = arma::dot(r, r) / dof;
  }
  return s2;
}

}  // namespace

FitResult fit_individual(const PanelDataset& data, const ForecastTarget& target) {
  require_estimable(data, "fit_individual");
  require_target(data, target, "fit_individual");
  const int n = data.n_units();
  FitResult fit;
  fit.method = "individual";
  fit.theta.set_size(data.n_coef(), n);
  for (int i = 0; i < n; ++i) {
    fit.theta.col(i) = lstsq(data.design(i), data.outcomes(i)).coef;
  }
  fit.sigma2 = residual_variances(data, fit.theta);
  fit.forecasts = forecasts_from_theta(fit.theta, target);
  return fit;
}

FitResult fit_pooled(const PanelDataset& data, const ForecastTarget& target) {
  require_estimable(data, "fit_pooled");
  require_target(data, target, "fit_pooled");
  const int n = data.n_units();
  const int K = data.n_coef();

  arma::mat sww(K, K, arma::fill::zeros);
  arma::vec swy(K, arma::fill::zeros);
  for (int i = 0; i < n; ++i) {
    const arma::mat w = data.design(i);
    sww += w.t() * w;
    swy += w.t() * data.outcomes(i);
  }
  arma::vec theta;
  try {
    theta = solve_spd(sww, swy);
  } catch (const SingularError&) {
    throw SingularError("fit_pooled: pooled design singular");
  }

  FitResult fit;
  fit.method = "pooled";
  fit.theta = arma::repmat(theta, 1, n);
  fit.sigma2 = residual_variances(data, fit.theta);
  fit.forecasts = forecasts_from_theta(fit.theta, target);
  return fit;
}

namespace {

// Within sums sum_i X_i'M_T X_i and sum_i X_i'M_T y_i over a period range.
void within_sums(const PanelDataset& data, arma::mat& sxx, arma::vec& sxy) {
  const int n = data.n_units();
  const int k = data.n_regressors();
  sxx.zeros(k, k);
  sxy.zeros(k);
  for (int i = 0; i < n; ++i) {
    const arma::mat x = data.regressors(i);
    const arma::mat xc = x.each_row() - arma::mean(x, 0);
    sxx += xc.t() * x;  // M_T idempotent: (M X)'(M X) = (M X)'X
    sxy += xc.t() * data.outcomes(i);
  }
}

arma::vec fe_slopes(const PanelDataset& data) {
  arma::mat sxx;
  arma::vec sxy;
  within_sums(data, sxx, sxy);
  try {
    return solve_spd(sxx, sxy);
  } catch (const SingularError&) {
    throw SingularError("fixed effects: within design singular");
  }
}

}  // namespace

FitResult fit_fixed_effects(const PanelDataset& data, const ForecastTarget& target) {
  require_estimable(data, "fit_fixed_effects");
  require_target(data, target, "fit_fixed_effects");
  if (data.n_regressors() < 1) {
    throw std::invalid_argument("fit_fixed_effects: requires k >= 1");
  }
  const int n = data.n_units();
  const arma::vec beta = fe_slopes(data);

  FitResult fit;
  fit.method = "fe";
  fit.theta.set_size(data.n_coef(), n);
  for (int i = 0; i < n; ++i) {
    const double alpha_i =
        arma::mean(data.outcomes(i)) - arma::dot(beta, arma::mean(data.regressors(i), 0).t());
    fit.theta(0, i) = alpha_i;
    fit.theta.submat(1, i, data.n_regressors(), i) = beta;
  }
  fit.sigma2 = residual_variances(data, fit.theta);
  fit.forecasts = forecasts_from_theta(fit.theta, target);
  return fit;
}

std::pair<FitResult, RandomEffectsFit> fit_random_effects(const PanelDataset& data,
                                                          const ForecastTarget& target) {
  require_estimable(data, "fit_random_effects");
  require_target(data, target, "fit_random_effects");
  if (data.n_regressors() < 1) {
    throw std::invalid_argument("fit_random_effects: requires k >= 1");
  }
  const int n = data.n_units();
  const int t = data.n_periods();
  const int k = data.n_regressors();
  const int K = data.n_coef();

  const arma::vec beta_fe = fe_slopes(data);

  // Within variance: residuals of the FE fit, divisor N(T-1) - K.
  double ssw = 0.0;
  arma::vec between(n);  // ybar_i - beta_fe'xbar_i
  arma::mat xbar(k, n);
  arma::vec ybar(n);
  for (int i = 0; i < n; ++i) {
    const arma::mat x = data.regressors(i);
    const arma::vec y = data.outcomes(i);
    xbar.col(i) = arma::mean(x, 0).t();
    ybar(i) = arma::mean(y);
    const arma::vec r = (y - arma::mean(y)) - (x.each_row() - xbar.col(i).t()) * beta_fe;
    ssw += arma::dot(r, r);
    between(i) = ybar(i) - arma::dot(beta_fe, xbar.col(i));
  }
  const double dof_w = static_cast<double>(n) * (t - 1) - K;
  if (dof_w <= 0) throw std::invalid_argument("fit_random_effects: N(T-1)-K must be positive");
  const double sigma_u2 = ssw / dof_w;

  // Between variance from the demeaned between residuals, divisor N - K;
  // negative values are floored at 0 (rho = 1, no BLUP correction).
  const arma::vec bdev = between - arma::mean(between);
  double sigma_eta2 = arma::dot(bdev, bdev) / std::max(n - K, 1) - sigma_u2 / t;
  if (sigma_eta2 < 0.0) sigma_eta2 = 0.0;
  const double denom = t * sigma_eta2 + sigma_u2;
  const double rho = denom > 0.0 ? sigma_u2 / denom : 1.0;  // noiseless: plain GLS

  // GLS slopes: within + rho-weighted between moments.
  arma::mat sxx;
  arma::vec sxy;
  within_sums(data, sxx, sxy);
  const arma::vec xgrand = arma::mean(xbar, 1);
  const double ygrand = arma::mean(ybar);
  arma::mat bxx(k, k, arma::fill::zeros);
  arma::vec bxy(k, arma::fill::zeros);
  for (int i = 0; i < n; ++i) {
    const arma::vec d = xbar.col(i) - xgrand;
    bxx += d * d.t();
    bxy += d * (ybar(i) - ygrand);
  }
  arma::vec beta_re;
  try {
    beta_re = solve_spd(sxx / (n * static_cast<double>(t)) + (rho / n) * bxx,
                        sxy / (n * static_cast<double>(t)) + (rho / n) * bxy);
  } catch (const SingularError&) {
    throw SingularError("fit_random_effects: GLS moment matrix singular");
  }
  const double alpha_re = ygrand - arma::dot(beta_re, xgrand);

  RandomEffectsFit re;
  re.alpha = alpha_re;
  re.beta = beta_re;
  re.sigma_u2 = sigma_u2;
  re.sigma_eta2 = sigma_eta2;
  re.rho = rho;
  re.unit_shrinkage = 1.0 - rho;  // T sigma_eta2 / (T sigma_eta2 + sigma_u2)
  re.eps_bar.set_size(n);
  for (int i = 0; i < n; ++i) {
    re.eps_bar(i) = ybar(i) - alpha_re - arma::dot(beta_re, xbar.col(i));
  }

  FitResult fit;
  fit.method = "re";
  fit.theta.set_size(K, n);
  for (int i = 0; i < n; ++i) {
    // Fold the BLUP term into the unit intercept so that
    // forecast(i) == theta.col(i)'w_{i,T+1} holds exactly.
    fit.theta(0, i) = alpha_re + re.unit_shrinkage * re.eps_bar(i);
    fit.theta.submat(1, i, k, i) = beta_re;
  }
  fit.sigma2 = residual_variances(data, fit.theta);
  fit.forecasts = forecasts_from_theta(fit.theta, target);
  return {std::move(fit), std::move(re)};
}

arma::vec mean_group(const FitResult& individual) {
  return arma::mean(individual.theta, 1);
}

arma::vec fit_mean_group(const PanelDataset& data) {
  ForecastTarget dummy = ForecastTarget::from_regressors(
      arma::mat(data.n_units(), data.n_regressors(), arma::fill::zeros));
  return mean_group(fit_individual(data, dummy));
}

JackknifeFit fit_half_jackknife(const PanelDataset& data) {
  const int t = data.n_periods();
  const int th = t / 2;
  if (th <= data.n_coef()) {
    throw std::invalid_argument("fit_half_jackknife: half sample needs floor(T/2) > K");
  }
  const int n = data.n_units();
  const int K = data.n_coef();

  JackknifeFit jk;
  jk.theta_a.set_size(K, n);
  jk.theta_b.set_size(K, n);
  for (int i = 0; i < n; ++i) {
    const arma::mat w = data.design(i);
    const arma::vec y = data.outcomes(i);
    jk.theta_a.col(i) = lstsq(w.rows(0, th - 1), y.rows(0, th - 1)).coef;
    jk.theta_b.col(i) = lstsq(w.rows(th, 2 * th - 1), y.rows(th, 2 * th - 1)).coef;
  }
  arma::mat theta_full(K, n);
  for (int i = 0; i < n; ++i) {
    theta_full.col(i) = lstsq(data.design(i), data.outcomes(i)).coef;
  }
  jk.bias_proxy = 0.5 * (jk.theta_a + jk.theta_b) - theta_full;
  jk.theta_jk = theta_full - jk.bias_proxy;
  return jk;
}

FeJackknife fe_half_jackknife(const PanelDataset& data) {
  const int t = data.n_periods();
  const int th = t / 2;
  if (th <= data.n_coef()) {
    throw std::invalid_argument("fe_half_jackknife: half sample needs floor(T/2) > K");
  }
  const arma::vec beta_full = fe_slopes(data);
  FeJackknife jk;
  jk.beta_a = fe_slopes(data.window(0, th));
  jk.beta_b = fe_slopes(data.window(th, th));
  jk.bias_proxy = 0.5 * (jk.beta_a + jk.beta_b) - beta_full;
  jk.beta_jk = beta_full - jk.bias_proxy;
  return jk;
}

arma::vec forecast_errors(const FitResult& fit, const arma::vec& actuals) {
  if (actuals.n_elem != fit.forecasts.n_elem) {
    throw std::invalid_argument("forecast_errors: length mismatch");
  }
  return actuals - fit.forecasts;
}

}  // namespace panelfc
