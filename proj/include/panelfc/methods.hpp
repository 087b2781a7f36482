#pragma once

#include <map>
#include <string>
#include <vector>

#include "panelfc/panel.hpp"
#include "panelfc/shrinkage.hpp"
#include "panelfc/simulation.hpp"

namespace panelfc {

// Canonical forecasting method names accepted here and on the command line:
// individual, pooled, fe, re, eb, hb, combo-pooled, combo-fe, combo-unit,
// equal, oracle ("oracle" only when truth is available).
const std::vector<std::string>& known_methods();
bool is_known_method(const std::string& name);

struct MethodOptions {
  GibbsConfig gibbs;          // consumed by "hb"
  const SimulatedPanel* truth = nullptr;  // enables "oracle"
};

// One-step forecasts per requested method on a single estimation sample.
// Shared inputs (individual fit, moments, jackknife, EB) are computed once.
std::map<std::string, arma::vec> method_forecasts(const PanelDataset& data,
                                                  const ForecastTarget& target,
                                                  const std::vector<std::string>& methods,
                                                  const MethodOptions& options = {});

}  // namespace panelfc
