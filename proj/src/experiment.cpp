#include "panelfc/experiment.hpp"

#include <algorithm>
#include <stdexcept>

#include "panelfc/rng.hpp"

namespace panelfc {

CellDetail run_cell(const ExperimentCell& cell, std::size_t cell_index,
                    const std::vector<std::string>& methods, int n_reps,
                    std::uint64_t master_seed, const MethodOptions& options) {
  if (n_reps < 1) throw std::invalid_argument("run_cell: n_reps must be positive");
  cell.spec.validate();

  CellDetail detail;
  detail.cell = cell.name;
  detail.methods = methods;
  detail.rep_losses.zeros(n_reps, methods.size());

  for (int r = 0; r < n_reps; ++r) {
    DgpSpec spec = cell.spec;
    spec.seed = derive_seed(master_seed, cell_index, static_cast<std::uint64_t>(r));
    try {
      const SimulatedPanel sim = generate_panel(spec);
      MethodOptions opt = options;
      opt.truth = &sim;
      opt.gibbs.seed = derive_seed(spec.seed, 0x6b1bULL);
      const auto forecasts = method_forecasts(sim.data, sim.target, methods, opt);
      for (std::size_t m = 0; m < methods.size(); ++m) {
        const arma::vec e = sim.actuals - forecasts.at(methods[m]);
        detail.rep_losses(r, m) = arma::dot(e, e);
      }
    } catch (const std::exception&) {
      detail.failed_reps.push_back(r);
    }
  }
  return detail;
}

std::vector<ExperimentRow> run_experiment(const std::vector<ExperimentCell>& cells,
                                          const std::vector<std::string>& methods,
                                          const std::string& benchmark, int n_reps,
                                          std::uint64_t master_seed,
                                          const MethodOptions& options) {
  const auto bench_it = std::find(methods.begin(), methods.end(), benchmark);
  if (bench_it == methods.end()) {
    throw std::invalid_argument("run_experiment: benchmark must be in the method list");
  }
  const std::size_t bench_col = bench_it - methods.begin();

  std::vector<ExperimentRow> rows;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const CellDetail detail = run_cell(cells[c], c, methods, n_reps, master_seed, options);
    if (detail.failed_reps.size() * 100 > static_cast<std::size_t>(n_reps)) {
      throw std::runtime_error("run_experiment: cell " + cells[c].name +
                               " failed in more than 1% of replications");
    }
    arma::uvec ok(n_reps - detail.failed_reps.size());
    {
      arma::uword j = 0;
      std::size_t f = 0;
      for (int r = 0; r < n_reps; ++r) {
        if (f < detail.failed_reps.size() && detail.failed_reps[f] == r) {
          ++f;
          continue;
        }
        ok(j++) = r;
      }
    }
    const double denom = arma::accu(detail.rep_losses.submat(ok, arma::uvec{bench_col}));
    const double cells_n = static_cast<double>(cells[c].spec.n_units) * ok.n_elem;
    for (std::size_t m = 0; m < methods.size(); ++m) {
      ExperimentRow row;
      row.cell = cells[c].name;
      row.kappa = cells[c].spec.kappa_rule == KappaRule::Zero ? "0" : "pm1";
      row.method = methods[m];
      const double num = arma::accu(detail.rep_losses.submat(ok, arma::uvec{m}));
      row.msfe = num / cells_n;
      row.msfe_benchmark = denom / cells_n;
      row.rmsfe = num / denom;
      row.n_reps_used = static_cast<long>(ok.n_elem);
      row.n_failures = static_cast<long>(detail.failed_reps.size());
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace panelfc
