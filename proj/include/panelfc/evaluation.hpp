#pragma once

#include <armadillo>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace panelfc {

struct ForecastRecord {
  int unit = 0;
  long origin = 0;  // forecast origin time index; target is origin + 1
  std::string method;
  double forecast = 0.0;
  double actual = 0.0;
};

struct MethodStats {
  double msfe = 0.0;       // cross-unit mean of the per-unit MSFEs
  double rmsfe = 0.0;      // msfe / benchmark msfe
  double beat_freq = 0.0;  // share of units strictly beating the benchmark
  double best_freq = 0.0;
  double worst_freq = 0.0;
};

struct EvaluationReport {
  std::string benchmark;
  std::string subset = "all";
  std::vector<std::string> methods;  // sorted
  std::vector<int> units;            // sorted units present
  std::map<std::string, std::map<int, double>> unit_msfe;  // method -> unit -> msfe
  std::map<std::string, MethodStats> stats;
  long n_origins = 0;
};

// Per-unit and aggregate accuracy. Records must cover the same (unit, origin)
// pairs for every method; ties in best/worst go to the lexicographically
// first method name.
EvaluationReport msfe_report(const std::vector<ForecastRecord>& records,
                             const std::string& benchmark,
                             const std::vector<std::string>& methods,
                             const std::string& subset_label = "all");

// d statistic of one forecast with the estimation-window location and scale
// it is judged against.
struct ConditioningStat {
  int unit = 0;
  long origin = 0;
  double d = 0.0;
  double mean = 0.0;  // window mean of d_it
  double sd = 0.0;    // window standard deviation of d_it
};

struct ConditioningSubset {
  std::set<std::pair<int, long>> keys;   // included (unit, origin) pairs
  std::vector<int> zero_sd_units;        // excluded entirely, flagged
};

// kappa = 0 keeps |d - mean| < c sd; kappa != 0 keeps the union of the two
// bands around mean +/- kappa sd.
ConditioningSubset conditioning_filter(const std::vector<ConditioningStat>& stats, double kappa,
                                       double c = 0.1);

std::vector<ForecastRecord> filter_records(const std::vector<ForecastRecord>& records,
                                           const ConditioningSubset& subset);

struct DmResult {
  double statistic = 0.0;
  bool degenerate = false;  // zero long-run variance; statistic undefined
  std::string method;
  std::string benchmark;
  int scope_unit = -1;  // -1 = panel
  int hac_lags = 0;
  long n_obs = 0;
};

// floor(4 (n/100)^(2/9)), the usual Newey-West lag rule.
int default_hac_lags(long n);

// DM statistic mean(d)/sqrt(lrv/n) for d_t = loss_method - loss_benchmark,
// Bartlett-kernel long-run variance; negative values favor the method.
DmResult dm_test_unit(const arma::vec& loss_method, const arma::vec& loss_benchmark,
                      int hac_lags);

// Cross-sectional average squared-error difference per origin, then the unit
// DM machinery on that series. hac_lags < 0 applies the default rule.
DmResult dm_test_panel(const std::vector<ForecastRecord>& records, const std::string& method,
                       const std::string& benchmark, int hac_lags = -1);

// Gaussian-kernel density estimate at the grid points; an empty grid selects
// 512 points spanning the data plus four bandwidths on each side.
std::vector<std::pair<double, double>> density_curve(const arma::vec& values,
                                                     double bandwidth = 0.04,
                                                     const arma::vec& grid = arma::vec());

}  // namespace panelfc
