#include "panelfc/simulation.hpp"

#include <cmath>
#include <stdexcept>

#include "panelfc/rng.hpp"

namespace panelfc {

void DgpSpec::validate() const {
  if (n_units < 1 || n_periods < 1) {
    throw std::invalid_argument("DgpSpec: n_units and n_periods must be positive");
  }
  if (!(std::abs(beta0) < 1.0)) throw std::invalid_argument("DgpSpec: |beta0| < 1 required");
  if (a_beta < 0.0 || a_beta >= 2.0 * (1.0 - std::abs(beta0))) {
    throw std::invalid_argument("DgpSpec: need 0 <= a_beta < 2(1 - |beta0|)");
  }
  if (std::abs(rho_gamma_x) >= 1.0 || std::abs(rho_alpha_x) >= 1.0) {
    throw std::invalid_argument("DgpSpec: correlation parameters must be in (-1, 1)");
  }
  if (sigma_alpha2 < 0.0 || sigma_gamma2 < 0.0) {
    throw std::invalid_argument("DgpSpec: variances must be nonnegative");
  }
  if (alpha_groups.empty() || gamma_groups.empty()) {
    throw std::invalid_argument("DgpSpec: group means must be nonempty");
  }
}

DgpSpec dgp_setting(int which, int n_units, int n_periods, double rho_gamma_x,
                    double rho_alpha_x, KappaRule kappa_rule, std::uint64_t seed) {
  DgpSpec s;
  s.n_units = n_units;
  s.n_periods = n_periods;
  s.rho_gamma_x = rho_gamma_x;
  s.rho_alpha_x = rho_alpha_x;
  s.kappa_rule = kappa_rule;
  s.seed = seed;
  s.alpha_groups = {2.0 / 3.0, 4.0 / 3.0};
  switch (which) {
    case 1:
      s.sigma_alpha2 = 0.5;
      s.gamma_groups = {0.1};
      s.sigma_gamma2 = 0.0;
      s.a_beta = 0.0;
      s.beta0 = 0.775;
      break;
    case 2:
      s.sigma_alpha2 = 0.5;
      s.gamma_groups = {0.2 / 3.0, 0.4 / 3.0};
      s.sigma_gamma2 = 0.1;
      s.a_beta = 0.5;
      s.beta0 = 0.688;
      break;
    case 3:
      s.sigma_alpha2 = 1.0;
      s.gamma_groups = {0.2 / 3.0, 0.4 / 3.0};
      s.sigma_gamma2 = 0.2;
      s.a_beta = 1.0;
      s.beta0 = 0.486;
      break;
    default:
      throw std::invalid_argument("dgp_setting: which must be 1, 2 or 3");
  }
  return s;
}

namespace {

// group index for unit i when means split the cross-section evenly
int group_of(int unit, int n_units, int n_groups) {
  if (n_groups == 1) return 0;
  const int g = static_cast<int>((static_cast<long long>(unit) * n_groups) / n_units);
  return std::min(g, n_groups - 1);
}

double stationary_mean(const UnitTruth& u) {
  return (u.alpha + u.gamma * u.mu_x) / (1.0 - u.beta);
}

double stationary_var(const UnitTruth& u) {
  const double b2 = 1.0 - u.beta * u.beta;
  return u.sigma2 / b2 +
         (u.gamma * u.gamma * u.sigma_x2 / b2) *
             (1.0 + 2.0 * u.beta * u.rho_x / (1.0 - u.beta * u.rho_x));
}

}  // namespace

SimulatedPanel generate_panel(const DgpSpec& spec) {
  spec.validate();
  const int n = spec.n_units;
  const int t = spec.n_periods;

  Rng rng = make_rng(spec.seed);
  std::normal_distribution<double> stdnorm(0.0, 1.0);
  std::uniform_real_distribution<double> unif01(0.0, 1.0);

  const double phi = spec.rho_alpha_x * std::sqrt(spec.sigma_alpha2) /
                     std::sqrt(1.0 - spec.rho_alpha_x * spec.rho_alpha_x);
  const double pi_load = spec.rho_gamma_x * std::sqrt(spec.sigma_gamma2) /
                         std::sqrt(1.0 - spec.rho_gamma_x * spec.rho_gamma_x);
  const double sd_alpha = std::sqrt(spec.sigma_alpha2);
  const double sd_gamma = std::sqrt(spec.sigma_gamma2);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  arma::mat y(t, n);
  arma::cube x(t, 2, n);
  arma::mat w_next(n, 3);
  arma::vec actuals(n);
  std::vector<UnitTruth> truth(n);

  for (int i = 0; i < n; ++i) {
    UnitTruth u;
    const double z_mu = stdnorm(rng);
    u.mu_x = (z_mu * z_mu - 1.0) * inv_sqrt2;
    const double z_s = stdnorm(rng);
    u.sigma2 = 0.5 * (1.0 + z_s * z_s);  // (1 + chi^2_1)/2
    const double z_sx = stdnorm(rng);
    u.sigma_x2 = 0.5 * (1.0 + z_sx * z_sx);
    u.rho_x = 0.95 * unif01(rng);
    u.beta = spec.beta0 + spec.a_beta * (unif01(rng) - 0.5);
    const int ga = group_of(i, n, static_cast<int>(spec.alpha_groups.size()));
    const int gg = group_of(i, n, static_cast<int>(spec.gamma_groups.size()));
    u.alpha = spec.alpha_groups[ga] + phi * u.mu_x + sd_alpha * stdnorm(rng);
    u.gamma = spec.gamma_groups[gg] + pi_load * u.mu_x + sd_gamma * stdnorm(rng);
    u.kappa = spec.kappa_rule == KappaRule::Zero ? 0.0 : (i < n / 2 ? 1.0 : -1.0);
    u.y_mean = stationary_mean(u);
    u.y_var = stationary_var(u);

    const double sig = std::sqrt(u.sigma2);
    const double sig_x = std::sqrt(u.sigma_x2);
    const double x_innov_sd = sig_x * std::sqrt(1.0 - u.rho_x * u.rho_x);

    double xi = 0.0;
    double y_prev = u.y_mean + std::sqrt(u.y_var) * stdnorm(rng);
    for (int s = 0; s < t; ++s) {
      xi = u.rho_x * xi + x_innov_sd * stdnorm(rng);
      const double x_t = u.mu_x + xi;
      const double z = stdnorm(rng);
      const double eps = sig * (z * z - 1.0) * inv_sqrt2;
      const double y_t = u.alpha + u.beta * y_prev + u.gamma * x_t + eps;
      y(s, i) = y_t;
      x(s, 0, i) = y_prev;
      x(s, 1, i) = x_t;
      y_prev = y_t;
    }

    w_next(i, 0) = 1.0;
    w_next(i, 1) = u.y_mean + u.kappa * std::sqrt(u.y_var);
    w_next(i, 2) = u.mu_x + u.kappa * sig_x;

    const double z_next = stdnorm(rng);
    const double eps_next = sig * (z_next * z_next - 1.0) * inv_sqrt2;
    actuals(i) = u.alpha + u.beta * w_next(i, 1) + u.gamma * w_next(i, 2) + eps_next;
    truth[i] = u;
  }

  SimulatedPanel out{PanelDataset(std::move(y), std::move(x)),
                     ForecastTarget(std::move(w_next)), std::move(truth), std::move(actuals)};
  return out;
}

double uniform_inverse_moment(double beta0, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("uniform_inverse_moment: a must be positive");
  if (!(a < 2.0 * (1.0 - std::abs(beta0)))) {
    throw std::invalid_argument("uniform_inverse_moment: support leaves the stationary region");
  }
  // (1/2a)[ln((1+b+a/2)/(1+b-a/2)) - ln((1-b-a/2)/(1-b+a/2))]
  const double l1 = std::log1p(a / (1.0 + beta0 - a / 2.0));
  const double l2 = std::log1p(-a / (1.0 - beta0 + a / 2.0));
  return (l1 - l2) / (2.0 * a);
}

double ar1_eta_moment(double B, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("ar1_eta_moment: a must be positive");
  if (!(B * B > a * a / 4.0)) {
    throw std::invalid_argument("ar1_eta_moment: requires B^2 > a^2/4");
  }
  return 1.0 - (B / a) * std::log1p(a / (B - a / 2.0));
}

double expected_pr2(const DgpSpec& spec) {
  spec.validate();
  const double e_inv = spec.a_beta > 0.0 ? uniform_inverse_moment(spec.beta0, spec.a_beta)
                                         : 1.0 / (1.0 - spec.beta0 * spec.beta0);
  // E(gamma_i^2): group means enter through their mean square, the loading on
  // mu_x and the idiosyncratic part add sigma_gamma2/(1 - rho^2).
  double mean_g2 = 0.0;
  const int ng = static_cast<int>(spec.gamma_groups.size());
  for (int i = 0; i < spec.n_units; ++i) {
    const double g0 = spec.gamma_groups[group_of(i, spec.n_units, ng)];
    mean_g2 += g0 * g0;
  }
  mean_g2 /= spec.n_units;
  const double e_gamma2 =
      mean_g2 + spec.sigma_gamma2 / (1.0 - spec.rho_gamma_x * spec.rho_gamma_x);
  return (e_gamma2 * e_inv + e_inv - 1.0) / (e_gamma2 * e_inv + e_inv);
}

Ar1AnalyticsResult ar1_delta(double beta0, double a, double sigma2, int n_draws,
                             std::uint64_t seed) {
  if (n_draws < 2) throw std::invalid_argument("ar1_delta: n_draws must be >= 2");
  Ar1AnalyticsResult res;
  res.n_draws = n_draws;
  res.e_inv = uniform_inverse_moment(beta0, a);
  // E(y^2 eta) = (s2/2a)[-(1-b) ln((1-b-a/2)/(1-b+a/2)) - (1+b) ln((1+b+a/2)/(1+b-a/2))]
  const double lm = std::log1p(-a / (1.0 - beta0 + a / 2.0));
  const double lp = std::log1p(a / (1.0 + beta0 - a / 2.0));
  res.e_y2eta = (sigma2 / (2.0 * a)) * (-(1.0 - beta0) * lm - (1.0 + beta0) * lp);

  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> unif(-a / 2.0, a / 2.0);
  double s0 = 0, s0_2 = 0, s1 = 0, s1_2 = 0, s2 = 0, s2_2 = 0;
  for (int r = 0; r < n_draws; ++r) {
    const double eta = unif(rng);
    const double beta = beta0 + eta;
    const double inv = 1.0 / (1.0 - beta * beta);
    s0 += inv;
    s0_2 += inv * inv;
    s1 += eta * inv;
    s1_2 += eta * inv * eta * inv;
    s2 += eta * eta * inv;
    s2_2 += eta * eta * inv * eta * eta * inv;
  }
  const double nd = n_draws;
  auto moment = [&](double s, double ss, double& m, double& se) {
    m = s / nd;
    const double var = (ss / nd - m * m) / (nd - 1.0);
    se = std::sqrt(std::max(0.0, var));
  };
  moment(s0, s0_2, res.mc_e_inv, res.mc_e_inv_se);
  double m1, se1, m2, se2;
  moment(s1, s1_2, m1, se1);
  moment(s2, s2_2, m2, se2);
  res.mc_e_y2eta = sigma2 * m1;
  res.mc_e_y2eta_se = sigma2 * se1;
  res.mc_e_eta2_inv = m2;
  res.mc_e_eta2_inv_se = se2;

  // Delta = s2 [E(eta^2/(1-b^2)) E(1/(1-b^2)) - E(eta/(1-b^2))^2] / E(1/(1-b^2))
  res.delta_ar = std::max(0.0, sigma2 * (m2 * res.e_inv - m1 * m1) / res.e_inv);
  return res;
}

TrueComboComponents true_combo_components(const SimulatedPanel& sim) {
  const int n = sim.data.n_units();
  const int t = sim.data.n_periods();
  const int K = sim.data.n_coef();

  arma::mat theta(K, n);
  for (int i = 0; i < n; ++i) {
    theta(0, i) = sim.truth[i].alpha;
    theta(1, i) = sim.truth[i].beta;
    theta(2, i) = sim.truth[i].gamma;
  }
  const arma::vec thetabar = arma::mean(theta, 1);

  TrueComboComponents c;
  arma::mat qbar(K, K, arma::fill::zeros);
  arma::vec qbar_eta(K, arma::fill::zeros);
  for (int i = 0; i < n; ++i) {
    const arma::mat w = sim.data.design(i);
    const arma::mat q = arma::symmatu(w.t() * w / t);
    const arma::vec eta = theta.col(i) - thetabar;
    const arma::vec wn = sim.target.row(i);
    const double m = arma::dot(wn, eta);
    c.delta += m * m;
    c.h += sim.truth[i].sigma2 * arma::dot(wn, solve_spd(q, wn));
    qbar += q;
    qbar_eta += q * eta;
  }
  c.delta /= n;
  c.h /= n;
  qbar /= n;
  qbar_eta /= n;
  c.delta -= arma::dot(qbar_eta, solve_spd(arma::symmatu(qbar), qbar_eta));
  c.psi = 0.0;
  return c;
}

}  // namespace panelfc
