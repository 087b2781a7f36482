#include "panelfc/methods.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

#include "panelfc/combination.hpp"
#include "panelfc/estimators.hpp"

namespace panelfc {

const std::vector<std::string>& known_methods() {
  static const std::vector<std::string> names = {
      "individual", "pooled", "fe", "re", "eb", "hb",
      "combo-pooled", "combo-fe", "combo-unit", "equal", "oracle"};
  return names;
}

bool is_known_method(const std::string& name) {
  const auto& k = known_methods();
  return std::find(k.begin(), k.end(), name) != k.end();
}

std::map<std::string, arma::vec> method_forecasts(const PanelDataset& data,
                                                  const ForecastTarget& target,
                                                  const std::vector<std::string>& methods,
                                                  const MethodOptions& options) {
  for (const auto& m : methods) {
    if (!is_known_method(m)) throw std::invalid_argument("unknown method: " + m);
    if (m == "oracle" && options.truth == nullptr) {
      throw std::invalid_argument("oracle method requires simulated truth");
    }
  }
  auto wants = [&](const std::string& m) {
    return std::find(methods.begin(), methods.end(), m) != methods.end();
  };

  const bool need_pooled = wants("pooled") || wants("combo-pooled") || wants("combo-unit") ||
                           wants("equal") || wants("oracle");
  const bool need_moments = wants("eb") || wants("combo-pooled") || wants("combo-unit");
  const bool need_fe = wants("fe") || wants("combo-fe");
  const bool need_eb = wants("eb") || wants("combo-unit");

  const FitResult individual = fit_individual(data, target);
  std::optional<FitResult> pooled;
  if (need_pooled) pooled = fit_pooled(data, target);
  std::optional<FitResult> fe;
  if (need_fe) fe = fit_fixed_effects(data, target);
  std::vector<UnitMoments> moments;
  if (need_moments) moments = all_unit_moments(data);
  std::optional<EmpiricalBayesFit> eb;
  if (need_eb) eb = fit_empirical_bayes(data, target, individual);

  std::map<std::string, arma::vec> out;
  for (const auto& m : methods) {
    if (m == "individual") {
      out[m] = individual.forecasts;
    } else if (m == "pooled") {
      out[m] = pooled->forecasts;
    } else if (m == "fe") {
      out[m] = fe->forecasts;
    } else if (m == "re") {
      out[m] = fit_random_effects(data, target).first.forecasts;
    } else if (m == "eb") {
      out[m] = eb->forecasts;
    } else if (m == "hb") {
      out[m] = fit_hierarchical_bayes(data, target, options.gibbs).forecast_mean;
    } else if (m == "combo-pooled") {
      const auto c = pooled_combo_components(data, individual, *pooled, moments, target);
      out[m] = combine(individual.forecasts, pooled->forecasts, c.omega);
    } else if (m == "combo-fe") {
      const auto c = fe_combo_components(data, individual, *fe, target);
      out[m] = combine(individual.forecasts, fe->forecasts, c.omega);
    } else if (m == "combo-unit") {
      const auto w =
          unit_specific_weights(individual, eb->omega_eta, moments, target, data.n_periods());
      out[m] = combine(individual.forecasts, pooled->forecasts, w.omegas);
    } else if (m == "equal") {
      out[m] = equal_weight_combination(individual.forecasts, pooled->forecasts);
    } else if (m == "oracle") {
      const auto tc = true_combo_components(*options.truth);
      const auto c = oracle_weight(tc.delta, tc.h, tc.psi, data.n_periods());
      out[m] = combine(individual.forecasts, pooled->forecasts, c.omega);
    }
  }
  return out;
}

}  // namespace panelfc
