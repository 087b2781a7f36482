#include "panelfc/cli.hpp"

#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "panelfc/config.hpp"
#include "panelfc/csv.hpp"
#include "panelfc/experiment.hpp"
#include "panelfc/report_io.hpp"
#include "panelfc/rolling.hpp"
#include "panelfc/spatial.hpp"

namespace panelfc {

namespace {

namespace fs = std::filesystem;

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> split_doubles(const std::string& csv) {
  std::vector<double> out;
  for (const auto& item : split_list(csv)) out.push_back(std::stod(item));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

DgpSpec spec_from_section(const ConfigSection& s) {
  DgpSpec d;
  if (s.has("preset")) {
    d = dgp_setting(static_cast<int>(s.get_long("preset")),
                    static_cast<int>(s.get_long_or("n_units", 100)),
                    static_cast<int>(s.get_long_or("n_periods", 20)),
                    s.get_double_or("rho_gamma_x", 0.0), s.get_double_or("rho_alpha_x", 0.0),
                    KappaRule::Zero, 1);
  } else {
    d.n_units = static_cast<int>(s.get_long_or("n_units", 100));
    d.n_periods = static_cast<int>(s.get_long_or("n_periods", 20));
    d.rho_gamma_x = s.get_double_or("rho_gamma_x", 0.0);
    d.rho_alpha_x = s.get_double_or("rho_alpha_x", 0.0);
  }
  if (s.has("beta0")) d.beta0 = s.get_double("beta0");
  if (s.has("a_beta")) d.a_beta = s.get_double("a_beta");
  if (s.has("sigma_alpha2")) d.sigma_alpha2 = s.get_double("sigma_alpha2");
  if (s.has("sigma_gamma2")) d.sigma_gamma2 = s.get_double("sigma_gamma2");
  if (s.has("alpha_groups")) d.alpha_groups = split_doubles(s.get("alpha_groups"));
  if (s.has("gamma_groups")) d.gamma_groups = split_doubles(s.get("gamma_groups"));
  const std::string kappa = s.get_or("kappa", "0");
  if (kappa == "0") {
    d.kappa_rule = KappaRule::Zero;
  } else if (kappa == "pm1") {
    d.kappa_rule = KappaRule::PlusMinusOne;
  } else {
    throw std::invalid_argument("config: kappa must be 0 or pm1, got " + kappa);
  }
  return d;
}

struct CommonFlags {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;  // 0: fall back to the config seed, then 1
};

void ensure_out_dir(const std::string& dir) {
  if (!dir.empty() && dir != ".") fs::create_directories(dir);
}

std::string out_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void write_rolling_outputs(const RollingResult& result, const std::string& out_dir) {
  write_text_file(out_path(out_dir, "records.csv"), records_to_csv(result.records));
  write_text_file(out_path(out_dir, "dstats.csv"), dstats_to_csv(result.d_stats));
  for (const auto& [label, report] : result.reports) {
    write_text_file(out_path(out_dir, "report_" + label + ".csv"), report_to_csv(report));
  }
  write_text_file(out_path(out_dir, "dm_panel.csv"), dm_to_csv(result.dm_panel));
  write_text_file(out_path(out_dir, "dm_units.csv"), dm_to_csv(result.dm_units));
}

int cmd_simulate(const CommonFlags& common, const std::string& methods_csv,
                 const std::string& benchmark_flag, long reps_flag,
                 const std::string& kappa_flag) {
  const std::string config_text = read_file(common.config_path);
  const Config cfg = parse_config_text(config_text, common.config_path);

  std::vector<std::string> methods =
      split_list(!methods_csv.empty() ? methods_csv
                                      : cfg.globals.get_or("methods",
                                                           "individual,pooled,eb,combo-pooled"));
  const std::string benchmark =
      !benchmark_flag.empty() ? benchmark_flag : cfg.globals.get_or("benchmark", "individual");
  if (std::find(methods.begin(), methods.end(), benchmark) == methods.end()) {
    methods.insert(methods.begin(), benchmark);
  }
  const long reps = reps_flag > 0 ? reps_flag : cfg.globals.get_long_or("reps", 1000);
  const std::uint64_t seed =
      common.seed != 0 ? common.seed : static_cast<std::uint64_t>(cfg.globals.get_long_or("seed", 1));

  std::vector<ExperimentCell> cells;
  for (const auto& s : cfg.sections) {
    if (s.name != "cell") continue;
    ExperimentCell cell;
    cell.spec = spec_from_section(s);
    cell.name = s.get_or("name", "cell" + std::to_string(cells.size() + 1));
    if (kappa_flag == "0") {
      cell.spec.kappa_rule = KappaRule::Zero;
      cells.push_back(cell);
    } else if (kappa_flag == "pm1") {
      cell.spec.kappa_rule = KappaRule::PlusMinusOne;
      cells.push_back(cell);
    } else if (kappa_flag == "all") {
      ExperimentCell zero = cell, pm = cell;
      zero.spec.kappa_rule = KappaRule::Zero;
      zero.name = cell.name + "-k0";
      pm.spec.kappa_rule = KappaRule::PlusMinusOne;
      pm.name = cell.name + "-kpm1";
      cells.push_back(zero);
      cells.push_back(pm);
    } else {
      cells.push_back(cell);  // keep the cell's own rule
    }
  }
  if (cells.empty()) throw std::invalid_argument("simulate: config defines no [cell] sections");

  MethodOptions options;
  options.gibbs.n_iter = static_cast<int>(cfg.globals.get_long_or("gibbs_iter", 1500));
  options.gibbs.burn_in = static_cast<int>(cfg.globals.get_long_or("gibbs_burn_in", 500));
  options.gibbs.prior_setting =
      static_cast<int>(cfg.globals.get_long_or("gibbs_prior_setting", 1));

  const auto rows =
      run_experiment(cells, methods, benchmark, static_cast<int>(reps), seed, options);

  ensure_out_dir(common.out_dir);
  write_text_file(out_path(common.out_dir, "rmsfe.csv"), experiment_to_csv(rows));
  write_text_file(out_path(common.out_dir, "manifest.json"),
                  manifest_json("simulate", seed, config_text,
                                {{"reps", std::to_string(reps)},
                                 {"methods", !methods_csv.empty() ? methods_csv : ""},
                                 {"kappa", kappa_flag},
                                 {"benchmark", benchmark}}));
  std::cout << experiment_to_csv(rows);
  return 0;
}

SpatialSpec spatial_from_config(const Config& cfg, const PanelDataset& panel) {
  const ConfigSection* sect = nullptr;
  for (const auto& s : cfg.sections) {
    if (s.name == "spatial") sect = &s;
  }
  if (!sect) throw std::invalid_argument("forecast: no [spatial] section");

  const auto& labels = panel.unit_labels();
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < labels.size(); ++i) index[labels[i]] = static_cast<int>(i);
  const int n = panel.n_units();

  SpatialSpec spec;
  spec.adjacency.zeros(n, n);
  for (const auto& line : split_list(sect->get("edges"))) {
    const auto sep = line.find(':');
    if (sep == std::string::npos) {
      throw std::invalid_argument("spatial: edges must be unitA:unitB pairs");
    }
    const auto a = index.find(line.substr(0, sep));
    const auto b = index.find(line.substr(sep + 1));
    if (a == index.end() || b == index.end()) {
      throw std::invalid_argument("spatial: edge names unknown unit: " + line);
    }
    spec.adjacency(a->second, b->second) = 1;
    spec.adjacency(b->second, a->second) = 1;
  }
  spec.include_region_avg = sect->get_long_or("include_region_avg", 1) != 0;
  spec.include_country_avg = sect->get_long_or("include_country_avg", 1) != 0;
  spec.include_own_lag = sect->get_long_or("include_own_lag", 1) != 0;
  if (spec.include_region_avg) {
    spec.region_map.assign(n, 0);
    for (const auto& pair : split_list(sect->get("regions"))) {
      const auto sep = pair.find(':');
      if (sep == std::string::npos) {
        throw std::invalid_argument("spatial: regions must be unit:id pairs");
      }
      const auto it = index.find(pair.substr(0, sep));
      if (it == index.end()) {
        throw std::invalid_argument("spatial: region map names unknown unit: " + pair);
      }
      spec.region_map[it->second] = static_cast<int>(std::stol(pair.substr(sep + 1)));
    }
  }
  return spec;
}

int cmd_forecast(const CommonFlags& common, const std::string& methods_csv,
                 const std::string& benchmark_flag, long window_flag, long hac_flag) {
  const std::string config_text = read_file(common.config_path);
  const Config cfg = parse_config_text(config_text, common.config_path);

  const ConfigSection* data = nullptr;
  for (const auto& s : cfg.sections) {
    if (s.name == "data") data = &s;
  }
  if (!data) throw std::invalid_argument("forecast: config needs a [data] section");

  CsvSchema schema;
  if (data->has("regressors")) {
    for (const auto& item : split_list(data->get("regressors"))) {
      const auto sep = item.find(':');
      ColumnSpec col;
      col.source = sep == std::string::npos ? item : item.substr(0, sep);
      col.lag = sep == std::string::npos ? 0 : static_cast<int>(std::stol(item.substr(sep + 1)));
      schema.regressors.push_back(col);
    }
  }
  PanelDataset panel = ingest_csv(data->get("path"), schema);
  if (cfg.globals.get_long_or("use_spatial", 0) != 0 ||
      std::any_of(cfg.sections.begin(), cfg.sections.end(),
                  [](const ConfigSection& s) { return s.name == "spatial"; })) {
    panel = build_spatial_regressors(panel, spatial_from_config(cfg, panel)).data;
  }

  RollingConfig rc;
  rc.window = static_cast<int>(window_flag > 0 ? window_flag : cfg.globals.get_long_or("window", 60));
  rc.methods = split_list(!methods_csv.empty()
                              ? methods_csv
                              : cfg.globals.get_or("methods", "individual,pooled"));
  rc.benchmark =
      !benchmark_flag.empty() ? benchmark_flag : cfg.globals.get_or("benchmark", "individual");
  if (std::find(rc.methods.begin(), rc.methods.end(), rc.benchmark) == rc.methods.end()) {
    rc.methods.insert(rc.methods.begin(), rc.benchmark);
  }
  rc.hac_lags = static_cast<int>(hac_flag >= 0 ? hac_flag : cfg.globals.get_long_or("hac_lags", -1));
  rc.conditioning_c = cfg.globals.get_double_or("conditioning_c", 0.1);
  rc.seed = common.seed != 0
                ? common.seed
                : static_cast<std::uint64_t>(cfg.globals.get_long_or("seed", 1));

  const RollingResult result = run_rolling(panel, rc);
  ensure_out_dir(common.out_dir);
  write_rolling_outputs(result, common.out_dir);
  write_text_file(out_path(common.out_dir, "manifest.json"),
                  manifest_json("forecast", rc.seed, config_text,
                                {{"window", std::to_string(rc.window)},
                                 {"benchmark", rc.benchmark},
                                 {"hac_lags", std::to_string(rc.hac_lags)}}));
  std::cout << report_to_csv(result.reports.at("all"));
  return 0;
}

int cmd_evaluate(const std::string& records_path, const std::string& dstats_path,
                 const std::string& benchmark, const std::string& out_dir, long hac_flag,
                 double conditioning_c) {
  const auto records = records_from_csv(records_path);
  std::set<std::string> method_set;
  for (const auto& r : records) method_set.insert(r.method);
  const std::vector<std::string> methods(method_set.begin(), method_set.end());
  if (!method_set.count(benchmark)) {
    throw std::invalid_argument("evaluate: benchmark " + benchmark + " absent from records");
  }

  ensure_out_dir(out_dir);
  write_text_file(out_path(out_dir, "report_all.csv"),
                  report_to_csv(msfe_report(records, benchmark, methods, "all")));

  if (!dstats_path.empty()) {
    const auto stats = dstats_from_csv(dstats_path);
    const auto near = conditioning_filter(stats, 0.0, conditioning_c);
    const auto away = conditioning_filter(stats, 1.0, conditioning_c);
    const auto near_records = filter_records(records, near);
    const auto away_records = filter_records(records, away);
    if (!near_records.empty()) {
      write_text_file(out_path(out_dir, "report_near_mean.csv"),
                      report_to_csv(msfe_report(near_records, benchmark, methods, "near_mean")));
    }
    if (!away_records.empty()) {
      write_text_file(out_path(out_dir, "report_one_sd.csv"),
                      report_to_csv(msfe_report(away_records, benchmark, methods, "one_sd")));
    }
  }
  std::set<long> origins;
  for (const auto& r : records) origins.insert(r.origin);
  const long n_origins = static_cast<long>(origins.size());
  const int lags = static_cast<int>(
      std::min<long>(hac_flag < 0 ? default_hac_lags(n_origins) : hac_flag,
                     std::max<long>(n_origins - 2, 0)));
  std::vector<DmResult> dm;
  for (const auto& m : methods) {
    if (m == benchmark) continue;
    dm.push_back(dm_test_panel(records, m, benchmark, lags));
  }
  write_text_file(out_path(out_dir, "dm_panel.csv"), dm_to_csv(dm));
  std::cout << report_to_csv(msfe_report(records, benchmark, methods, "all"));
  return 0;
}

int cmd_ar1_table(std::uint64_t seed, long draws, const std::string& out_file) {
  if (seed == 0) seed = 1;
  std::ostringstream os;
  os << "beta0,e_y2eta,delta_ar,e_inv\n";
  for (const double beta0 : {0.3, 0.45, 0.49, 0.4999}) {
    const auto res = ar1_delta(beta0, 1.0, 1.0, static_cast<int>(draws), seed);
    os << format_double(beta0) << "," << format_double(res.e_y2eta) << ","
       << format_double(res.delta_ar) << "," << format_double(res.e_inv) << "\n";
  }
  if (!out_file.empty()) write_text_file(out_file, os.str());
  std::cout << os.str();
  return 0;
}

int cmd_pr2_table(const std::string& out_file) {
  std::ostringstream os;
  os << "a_beta,beta0,pr2_rho0,pr2_rho05\n";
  const double abetas[] = {0.0, 0.5, 1.0};
  const double beta0s[] = {0.775, 0.688, 0.486};
  for (int row = 0; row < 3; ++row) {
    const int preset = row + 1;
    DgpSpec s0 = dgp_setting(preset, 100, 20, 0.0, 0.0, KappaRule::Zero, 1);
    DgpSpec s5 = dgp_setting(preset, 100, 20, 0.5, 0.0, KappaRule::Zero, 1);
    os << format_double(abetas[row]) << "," << format_double(beta0s[row]) << ","
       << format_double(expected_pr2(s0)) << "," << format_double(expected_pr2(s5)) << "\n";
  }
  if (!out_file.empty()) write_text_file(out_file, os.str());
  std::cout << os.str();
  return 0;
}

int cmd_density(const std::string& records_path, const std::string& benchmark,
                double bandwidth, const std::string& out_dir) {
  const auto records = records_from_csv(records_path);
  std::set<std::string> method_set;
  for (const auto& r : records) method_set.insert(r.method);
  const std::vector<std::string> methods(method_set.begin(), method_set.end());
  const auto report = msfe_report(records, benchmark, methods, "all");

  ensure_out_dir(out_dir);
  for (const auto& m : methods) {
    if (m == benchmark) continue;
    arma::vec ratios(report.units.size());
    for (std::size_t i = 0; i < report.units.size(); ++i) {
      const int u = report.units[i];
      ratios(i) = report.unit_msfe.at(m).at(u) / report.unit_msfe.at(benchmark).at(u);
    }
    const auto curve = density_curve(ratios, bandwidth);
    write_text_file(out_path(out_dir, "density_" + m + ".csv"), density_to_csv(curve));
  }
  std::cout << "densities written for " << methods.size() - 1 << " methods\n";
  return 0;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args) {
  CLI::App app{"panel forecasting toolkit"};
  app.require_subcommand(1);

  CommonFlags common;
  std::string methods_csv, benchmark, kappa = "cell";
  long reps = 0, window = 0, hac_lags = -1, draws = 10000;
  double bandwidth = 0.04, conditioning_c = 0.1;
  std::string records_path, dstats_path, out_file;

  auto* sim = app.add_subcommand("simulate", "run a simulation grid from a config file");
  sim->add_option("--config", common.config_path)->required();
  sim->add_option("--seed", common.seed);
  sim->add_option("--reps", reps);
  sim->add_option("--methods", methods_csv);
  sim->add_option("--benchmark", benchmark);
  sim->add_option("--kappa", kappa)->check(CLI::IsMember({"0", "pm1", "all", "cell"}));
  sim->add_option("--out", common.out_dir);

  auto* fore = app.add_subcommand("forecast", "rolling-window forecasts from a CSV panel");
  fore->add_option("--config", common.config_path)->required();
  fore->add_option("--seed", common.seed);
  fore->add_option("--window", window);
  fore->add_option("--methods", methods_csv);
  fore->add_option("--benchmark", benchmark);
  fore->add_option("--hac-lags", hac_lags);
  fore->add_option("--out", common.out_dir);

  auto* eval = app.add_subcommand("evaluate", "recompute reports from emitted records");
  eval->add_option("--records", records_path)->required();
  eval->add_option("--dstats", dstats_path);
  eval->add_option("--benchmark", benchmark)->required();
  eval->add_option("--hac-lags", hac_lags);
  eval->add_option("--conditioning-c", conditioning_c);
  eval->add_option("--out", common.out_dir);

  auto* ar1 = app.add_subcommand("ar1-table", "heterogeneity penalty for the AR(1) panel");
  ar1->add_option("--seed", common.seed);
  ar1->add_option("--draws", draws);
  ar1->add_option("--out", out_file);

  auto* pr2 = app.add_subcommand("pr2-table", "closed-form fit calibration table");
  pr2->add_option("--out", out_file);

  auto* dens = app.add_subcommand("density", "MSFE-ratio density curves");
  dens->add_option("--records", records_path)->required();
  dens->add_option("--benchmark", benchmark)->required();
  dens->add_option("--bandwidth", bandwidth);
  dens->add_option("--out", common.out_dir);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::stringstream out;
    const int code = app.exit(e, out, out);
    std::cerr << out.str();
    return code == 0 ? 0 : code;
  }

  try {
    if (sim->parsed()) return cmd_simulate(common, methods_csv, benchmark, reps, kappa);
    if (fore->parsed()) return cmd_forecast(common, methods_csv, benchmark, window, hac_lags);
    if (eval->parsed()) {
      return cmd_evaluate(records_path, dstats_path, benchmark, common.out_dir, hac_lags,
                          conditioning_c);
    }
    if (ar1->parsed()) return cmd_ar1_table(common.seed, draws, out_file);
    if (pr2->parsed()) return cmd_pr2_table(out_file);
    if (dens->parsed()) return cmd_density(records_path, benchmark, bandwidth, common.out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << app.help();
  return 2;
}

}  // namespace panelfc
