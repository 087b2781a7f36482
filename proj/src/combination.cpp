#include "panelfc/combination.hpp"

#include <cmath>
#include <stdexcept>

namespace panelfc {

namespace {

constexpr double kDenomTol = 1e-14;

double clip01(double x) { return std::min(1.0, std::max(0.0, x)); }

PooledComboComponents weight_from_components(double delta, double h, double psi, int t) {
  if (t <= 0) throw std::invalid_argument("combination weight: T must be positive");
  PooledComboComponents c;
  c.delta_hat = delta;
  c.h_hat = h;
  c.psi_hat = psi;
  const double denom = delta + h / t - 2.0 * psi / t;
  if (std::abs(denom) <= kDenomTol) {
    c.degenerate_denominator = true;
    c.omega_raw = 0.5;
    c.omega = 0.5;
    return c;
  }
  c.omega_raw = (delta - psi / t) / denom;
  c.omega = clip01(c.omega_raw);
  return c;
}

}  // namespace

double estimate_delta_hat(const FitResult& individual, const FitResult& pooled,
                          const ForecastTarget& target) {
  const int n = target.n_units();
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double m = arma::dot(target.row(i), pooled.theta.col(i) - individual.theta.col(i));
    acc += m * m;
  }
  return acc / n;
}

double estimate_h_hat(const FitResult& individual, const std::vector<UnitMoments>& moments,
                      const ForecastTarget& target) {
  const int n = target.n_units();
  if (static_cast<int>(moments.size()) != n) {
    throw std::invalid_argument("estimate_h_hat: moments size mismatch");
  }
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const arma::vec w = target.row(i);
    acc += individual.sigma2(i) * arma::dot(w, solve_spd(moments[i].q, w));
  }
  return acc / n;
}

double estimate_psi_hat(const PanelDataset& data, const FitResult& individual,
                        const JackknifeFit& jk, const ForecastTarget& target) {
  const int n = data.n_units();
  const int t = data.n_periods();
  const int K = data.n_coef();

  const arma::vec thetabar = arma::mean(individual.theta, 1);
  arma::mat qbar(K, K, arma::fill::zeros);  // N^-1 sum Q_iT
  arma::vec qbar_eta(K, arma::fill::zeros); // N^-1 sum Q_iT eta_i
  arma::vec v(K, arma::fill::zeros);        // N^-1 sum (bias_i'w_i) w_i
  double term2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const arma::mat wd = data.design(i);
    const arma::mat q = wd.t() * wd / t;
    const arma::vec eta = individual.theta.col(i) - thetabar;
    const arma::vec w = target.row(i);
    const double bw = arma::dot(jk.bias_proxy.col(i), w);
    qbar += q;
    qbar_eta += q * eta;
    v += bw * w;
    term2 += bw * arma::dot(w, eta);
  }
  qbar /= n;
  qbar_eta /= n;
  v /= n;
  term2 /= n;
  const double term1 = arma::dot(v, solve_spd(arma::symmatu(qbar), qbar_eta));
  return t * (term1 - term2);
}

PooledComboComponents pooled_combination_weight(double delta_hat, double h_hat, double psi_hat,
                                                int n_periods) {
  return weight_from_components(delta_hat, h_hat, psi_hat, n_periods);
}

PooledComboComponents pooled_combo_components(const PanelDataset& data,
                                              const FitResult& individual,
                                              const FitResult& pooled,
                                              const std::vector<UnitMoments>& moments,
                                              const ForecastTarget& target) {
  const double delta = estimate_delta_hat(individual, pooled, target);
  const double h = estimate_h_hat(individual, moments, target);
  double psi = 0.0;
  bool skipped = true;
  if (data.n_periods() >= 2 * (data.n_coef() + 1)) {
    psi = estimate_psi_hat(data, individual, fit_half_jackknife(data), target);
    skipped = false;
  }
  PooledComboComponents c = weight_from_components(delta, h, psi, data.n_periods());
  c.psi_skipped = skipped;
  return c;
}

namespace {

FeComboComponents fe_components_impl(const PanelDataset& data, const FitResult& individual,
                                     const FitResult& fe, const FeJackknife* jk,
                                     const ForecastTarget& target) {
  const int n = data.n_units();
  const int t = data.n_periods();
  const int k = data.n_regressors();
  if (k < 1) throw std::invalid_argument("fe combination: requires k >= 1");

  const arma::mat beta_i = individual.theta.rows(1, k);  // k x N unit slopes
  const arma::vec beta_mg = arma::mean(beta_i, 1);
  const arma::vec beta_fe = fe.theta.submat(1, 0, k, 0);

  arma::mat qbar(k, k, arma::fill::zeros);
  arma::vec qbar_eta(k, arma::fill::zeros);
  arma::vec v(k, arma::fill::zeros);
  double delta1 = 0.0, h_beta = 0.0, psi_term2 = 0.0, c_diff = 0.0;
  const bool with_psi = jk != nullptr;

  for (int i = 0; i < n; ++i) {
    const arma::mat x = data.regressors(i);
    const arma::vec xbar = arma::mean(x, 0).t();
    const arma::mat xc = x.each_row() - xbar.t();
    const arma::mat qb = arma::symmatu(xc.t() * xc / t);
    const arma::vec eta = beta_i.col(i) - beta_mg;
    const arma::vec xdd = target.row(i).subvec(1, k) - xbar;

    const double de = arma::dot(xdd, eta);
    delta1 += de * de;
    qbar += qb;
    qbar_eta += qb * eta;

    const arma::vec qinv_x = solve_spd(qb, xdd);
    const arma::mat h_i = individual.sigma2(i) * qb;  // H_iT,beta = sigma_i^2 Q_iT,beta
    h_beta += arma::dot(qinv_x, h_i * qinv_x);

    if (with_psi) {
      const double bw = arma::dot(jk->bias_proxy, xdd);
      v += bw * xdd;
      psi_term2 += bw * de;
    }

    // mean of the unit OLS residuals (identically ~0 with an intercept)
    const arma::vec resid = data.outcomes(i) - data.design(i) * individual.theta.col(i);
    c_diff += arma::dot(beta_fe - beta_i.col(i), xdd) * arma::mean(resid);
  }
  qbar /= n;
  qbar_eta /= n;
  delta1 /= n;
  h_beta /= n;
  c_diff /= n;

  FeComboComponents c;
  c.delta_fe_hat = delta1 - arma::dot(qbar_eta, solve_spd(arma::symmatu(qbar), qbar_eta));
  c.h_beta_hat = h_beta;
  c.c_diff_hat = c_diff;
  if (with_psi) {
    v /= n;
    psi_term2 /= n;
    const double psi_term1 = arma::dot(v, solve_spd(arma::symmatu(qbar), qbar_eta));
    c.psi_fe_hat = t * (psi_term1 - psi_term2);
  } else {
    c.psi_skipped = true;
  }

  const double denom = c.delta_fe_hat + c.h_beta_hat / t - 2.0 * c.psi_fe_hat / t;
  if (std::abs(denom) <= kDenomTol) {
    c.degenerate_denominator = true;
    c.omega_raw = 0.5;
    c.omega = 0.5;
  } else {
    c.omega_raw = (c.delta_fe_hat - c.psi_fe_hat / t - c.c_diff_hat) / denom;
    c.omega = clip01(c.omega_raw);
  }
  return c;
}

}  // namespace

FeComboComponents estimate_fe_components(const PanelDataset& data, const FitResult& individual,
                                         const FitResult& fe, const FeJackknife& jk,
                                         const ForecastTarget& target) {
  return fe_components_impl(data, individual, fe, &jk, target);
}

FeComboComponents fe_combo_components(const PanelDataset& data, const FitResult& individual,
                                      const FitResult& fe, const ForecastTarget& target) {
  if (data.n_periods() >= 2 * (data.n_coef() + 1)) {
    const FeJackknife jk = fe_half_jackknife(data);
    return fe_components_impl(data, individual, fe, &jk, target);
  }
  return fe_components_impl(data, individual, fe, nullptr, target);
}

UnitWeightSet unit_specific_weights(const FitResult& individual, const arma::mat& omega_eta,
                                    const std::vector<UnitMoments>& moments,
                                    const ForecastTarget& target, int n_periods) {
  const int n = target.n_units();
  if (static_cast<int>(moments.size()) != n) {
    throw std::invalid_argument("unit_specific_weights: moments size mismatch");
  }
  UnitWeightSet set;
  set.omegas.set_size(n);
  for (int i = 0; i < n; ++i) {
    const arma::vec w = target.row(i);
    const double het = arma::dot(w, omega_eta * w);
    if (het <= kDenomTol) {
      set.omegas(i) = 0.0;
      set.zero_heterogeneity_units.push_back(i);
      continue;
    }
    const double noise =
        individual.sigma2(i) / n_periods * arma::dot(w, solve_spd(moments[i].q, w));
    set.omegas(i) = 1.0 / (1.0 + noise / het);
  }
  return set;
}

arma::vec combine(const arma::vec& f_a, const arma::vec& f_b, double weight) {
  if (f_a.n_elem != f_b.n_elem) throw std::invalid_argument("combine: length mismatch");
  if (!std::isfinite(weight)) throw std::invalid_argument("combine: non-finite weight");
  return weight * f_a + (1.0 - weight) * f_b;
}

arma::vec combine(const arma::vec& f_a, const arma::vec& f_b, const arma::vec& weights) {
  if (f_a.n_elem != f_b.n_elem || weights.n_elem != f_a.n_elem) {
    throw std::invalid_argument("combine: length mismatch");
  }
  if (!weights.is_finite()) throw std::invalid_argument("combine: non-finite weights");
  return weights % f_a + (1.0 - weights) % f_b;
}

arma::vec equal_weight_combination(const arma::vec& f_a, const arma::vec& f_b) {
  return combine(f_a, f_b, 0.5);
}

PooledComboComponents oracle_weight(double delta, double h, double psi, int n_periods) {
  return weight_from_components(delta, h, psi, n_periods);
}

double in_sample_weight(const arma::vec& e_a, const arma::vec& e_b) {
  if (e_a.n_elem != e_b.n_elem || e_a.n_elem == 0) {
    throw std::invalid_argument("in_sample_weight: length mismatch");
  }
  const double a = arma::mean(e_a % e_a);
  const double b = arma::mean(e_b % e_b);
  const double c = arma::mean(e_a % e_b);
  const double denom = a + b - 2.0 * c;
  if (std::abs(denom) <= kDenomTol) return 0.5;
  return (b - c) / denom;
}

}  // namespace panelfc
