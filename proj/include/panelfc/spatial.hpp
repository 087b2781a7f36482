#pragma once

#include <armadillo>
#include <vector>

#include "panelfc/panel.hpp"

namespace panelfc {

// Distance-based neighborhood structure. Weights are the row-normalized
// adjacency indicators; units without neighbors are dropped from the output.
struct SpatialSpec {
  arma::umat adjacency;         // N x N 0/1 indicators, diagonal ignored
  std::vector<int> region_map;  // unit -> region id
  bool include_own_lag = true;
  bool include_region_avg = true;
  bool include_country_avg = true;
};

struct SpatialResult {
  PanelDataset data;
  std::vector<int> kept_units;     // indices into the input panel
  std::vector<int> dropped_units;  // zero-neighbor units
};

// Appends once-lagged spatial regressors to the panel: own lag y_{i,t-1},
// spatial average y*_it = sum_k w_ik y_kt at t-1, region average at t-1, and
// country average at t-1. The first period is consumed by the lag. Averages
// are computed over all input units before any are dropped.
SpatialResult build_spatial_regressors(const PanelDataset& panel, const SpatialSpec& spec);

}  // namespace panelfc
