#pragma once

#include <armadillo>
#include <cstdint>
#include <string>
#include <vector>

#include "panelfc/methods.hpp"
#include "panelfc/simulation.hpp"

namespace panelfc {

struct ExperimentCell {
  std::string name;
  DgpSpec spec;
};

// Per-replication sums of squared forecast errors over units; column order
// follows the method list. Replication seeds derive from (master_seed,
// cell_index, rep), so extending R preserves the leading replications.
struct CellDetail {
  std::string cell;
  std::vector<std::string> methods;
  arma::mat rep_losses;          // reps x methods
  std::vector<int> failed_reps;  // excluded for every method
};

CellDetail run_cell(const ExperimentCell& cell, std::size_t cell_index,
                    const std::vector<std::string>& methods, int n_reps,
                    std::uint64_t master_seed, const MethodOptions& options = {});

struct ExperimentRow {
  std::string cell;
  std::string kappa;  // "0" or "pm1"
  std::string method;
  double rmsfe = 0.0;
  double msfe = 0.0;            // mean squared error over units x reps
  double msfe_benchmark = 0.0;
  long n_reps_used = 0;
  long n_failures = 0;
};

// rMSFE_j = sum_i sum_r e_j^2 / sum_i sum_r e_bench^2 per cell; a cell with
// more than 1% failed replications aborts the run.
std::vector<ExperimentRow> run_experiment(const std::vector<ExperimentCell>& cells,
                                          const std::vector<std::string>& methods,
                                          const std::string& benchmark, int n_reps,
                                          std::uint64_t master_seed,
                                          const MethodOptions& options = {});

}  // namespace panelfc
