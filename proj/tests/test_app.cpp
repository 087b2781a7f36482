#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "panelfc/cli.hpp"
#include "panelfc/config.hpp"
#include "panelfc/csv.hpp"
#include "panelfc/report_io.hpp"
#include "panelfc/rolling.hpp"
#include "panelfc/spatial.hpp"
#include "test_helpers.hpp"

using namespace panelfc;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("panelfc_test_" + std::to_string(std::rand()) + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& content) const {
    const std::string p = (path / name).string();
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p;
  }
  std::string read(const std::string& name) const {
    std::ifstream in(path / name, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }
};

// AR(1)-style panel with homogeneous slope, written as long CSV
std::string synthetic_long_csv(int n, int t, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::normal_distribution<double> norm(0.0, 1.0);
  std::ostringstream os;
  os << "unit_id,period,y,x1\n";
  for (int i = 0; i < n; ++i) {
    for (int s = 0; s < t; ++s) {
      char period[8];
      std::snprintf(period, sizeof(period), "p%03d", s);
      const double x = norm(rng);
      const double y = 0.5 + 0.8 * x + 0.3 * norm(rng);
      os << "u" << char('a' + i) << "," << period << "," << format_double(y) << ","
         << format_double(x) << "\n";
    }
  }
  return os.str();
}

}  // namespace

TEST_CASE("ingest_csv round trip") {
  TempDir dir;
  const std::string p = dir.file("toy.csv",
                                 "unit_id,period,y,x1\n"
                                 "a,1,1.0,0.5\n"
                                 "a,2,2.0,0.6\n"
                                 "a,3,3.0,0.7\n"
                                 "b,1,4.0,0.8\n"
                                 "b,2,5.0,0.9\n"
                                 "b,3,6.0,1.0\n");
  const auto panel = ingest_csv(p);
  CHECK(panel.n_units() == 2);
  CHECK(panel.n_periods() == 3);
  CHECK(panel.n_regressors() == 1);
  CHECK(panel.y(0, 1) == doctest::Approx(2.0));
  CHECK(panel.y(1, 2) == doctest::Approx(6.0));
  CHECK(panel.regressors(1)(0, 0) == doctest::Approx(0.8));
  CHECK(panel.unit_labels() == std::vector<std::string>{"a", "b"});
}

TEST_CASE("ingest_csv rejects unbalanced and malformed input") {
  TempDir dir;
  SUBCASE("missing cell names the offending unit") {
    const std::string p = dir.file("bad.csv",
                                   "unit_id,period,y,x1\n"
                                   "a,1,1.0,0.5\n"
                                   "a,2,2.0,0.6\n"
                                   "b,1,4.0,0.8\n");
    CHECK_THROWS_WITH_AS(ingest_csv(p), doctest::Contains("offending units: b"),
                         std::invalid_argument);
  }
  SUBCASE("parse error reports the line number") {
    const std::string p = dir.file("bad2.csv",
                                   "unit_id,period,y,x1\n"
                                   "a,1,1.0,0.5\n"
                                   "a,2,oops,0.6\n");
    CHECK_THROWS_WITH_AS(ingest_csv(p), doctest::Contains("line 3"), std::invalid_argument);
  }
  SUBCASE("duplicate cell is a parse error") {
    const std::string p = dir.file("bad3.csv",
                                   "unit_id,period,y,x1\n"
                                   "a,1,1.0,0.5\n"
                                   "a,1,2.0,0.6\n");
    CHECK_THROWS_AS(ingest_csv(p), std::invalid_argument);
  }
}

TEST_CASE("ingest_csv lag directive shifts the source and drops the first period") {
  TempDir dir;
  const std::string p = dir.file("lag.csv",
                                 "unit_id,period,y,x1\n"
                                 "a,1,1.0,0.5\n"
                                 "a,2,2.0,0.6\n"
                                 "a,3,3.0,0.7\n");
  CsvSchema schema;
  schema.regressors = {{"y", 1}, {"x1", 0}};
  const auto panel = ingest_csv(p, schema);
  CHECK(panel.n_periods() == 2);
  CHECK(panel.n_regressors() == 2);
  // regressor 0 is y shifted by one period
  CHECK(panel.regressors(0)(0, 0) == doctest::Approx(1.0));
  CHECK(panel.regressors(0)(1, 0) == doctest::Approx(2.0));
  CHECK(panel.y(0, 0) == doctest::Approx(2.0));
  CHECK(panel.regressors(0)(0, 1) == doctest::Approx(0.6));
  CHECK(panel.period_labels() == std::vector<std::string>{"2", "3"});
}

TEST_CASE("build_spatial_regressors") {
  // 4 units on a line: a-b-c adjacent pairwise, d isolated
  const int n = 4, t = 5;
  arma::mat y(t, n);
  for (int i = 0; i < n; ++i) {
    for (int s = 0; s < t; ++s) y(s, i) = 10.0 * i + s;
  }
  const PanelDataset panel(y, arma::cube(t, 0, n));

  SUBCASE("mutually adjacent pair swaps outcomes") {
    SpatialSpec spec;
    spec.adjacency.zeros(n, n);
    spec.adjacency(0, 1) = spec.adjacency(1, 0) = 1;
    spec.adjacency(1, 2) = spec.adjacency(2, 1) = 1;
    spec.region_map = {0, 0, 1, 1};
    const auto res = build_spatial_regressors(panel, spec);
    CHECK(res.dropped_units == std::vector<int>{3});
    CHECK(res.kept_units == std::vector<int>{0, 1, 2});
    CHECK(res.data.n_periods() == t - 1);
    // regressors: own lag, y*, region, country; unit 0's y* is unit 1's outcome
    const arma::mat x0 = res.data.regressors(0);
    CHECK(x0(0, 0) == doctest::Approx(y(0, 0)));   // own lag
    CHECK(x0(0, 1) == doctest::Approx(y(0, 1)));   // spatial lag = neighbor
    const arma::mat x1 = res.data.regressors(1);
    CHECK(x1(0, 1) == doctest::Approx(0.5 * (y(0, 0) + y(0, 2))));
    // country average over all four input units
    CHECK(x0(0, 3) == doctest::Approx(arma::mean(y.row(0))));
  }
  SUBCASE("ring of four gives half weights to each neighbor") {
    SpatialSpec spec;
    spec.adjacency.zeros(n, n);
    for (int i = 0; i < n; ++i) {
      spec.adjacency(i, (i + 1) % n) = 1;
      spec.adjacency((i + 1) % n, i) = 1;
    }
    spec.include_region_avg = false;
    spec.include_country_avg = false;
    spec.include_own_lag = false;
    const auto res = build_spatial_regressors(panel, spec);
    CHECK(res.dropped_units.empty());
    for (int i = 0; i < n; ++i) {
      // output row 3 carries the spatial average lagged to original period 3
      const double expected = 0.5 * (y(3, (i + 1) % n) + y(3, (i + 3) % n));
      CHECK(res.data.regressors(i)(3, 0) == doctest::Approx(expected));
    }
  }
  SUBCASE("incomplete region map throws") {
    SpatialSpec spec;
    spec.adjacency.ones(n, n);
    spec.region_map = {0, 1};
    CHECK_THROWS_AS(build_spatial_regressors(panel, spec), std::invalid_argument);
  }
}

TEST_CASE("run_rolling windows and reports") {
  TempDir dir;
  const int n = 4, t = 14, w = 12;
  const std::string csv = synthetic_long_csv(n, t, 404);
  const std::string p = dir.file("panel.csv", csv);
  const auto panel = ingest_csv(p);

  RollingConfig cfg;
  cfg.window = w;
  cfg.methods = {"individual"};
  cfg.benchmark = "individual";

  SUBCASE("T = w + 2 produces exactly two origins") {
    const auto res = run_rolling(panel, cfg);
    std::set<long> origins;
    for (const auto& r : res.records) origins.insert(r.origin);
    CHECK(origins.size() == 2);
    CHECK(res.reports.at("all").stats.at("individual").rmsfe == doctest::Approx(1.0));
  }
  SUBCASE("DM lags clamp when the backtest is very short") {
    RollingConfig two = cfg;
    two.methods = {"individual", "pooled"};
    const auto res = run_rolling(panel, two);
    REQUIRE_FALSE(res.dm_panel.empty());
    CHECK(res.dm_panel[0].hac_lags == 0);  // 2 origins leave no room for lags
  }
  SUBCASE("records are deterministic and sorted") {
    const auto a = run_rolling(panel, cfg);
    const auto b = run_rolling(panel, cfg);
    CHECK(records_to_csv(a.records) == records_to_csv(b.records));
    for (std::size_t i = 1; i < a.records.size(); ++i) {
      const auto& prev = a.records[i - 1];
      const auto& cur = a.records[i];
      CHECK(std::tie(prev.origin, prev.unit, prev.method) <=
            std::tie(cur.origin, cur.unit, cur.method));
    }
  }
}

TEST_CASE("run_rolling pooled beats individual on a homogeneous panel") {
  // homogeneous DGP, short window: pooling reduces estimation error
  const int n = 30, t = 30, w = 12;
  Rng rng = make_rng(405);
  std::normal_distribution<double> norm(0.0, 1.0);
  arma::mat y(t, n);
  arma::cube x(t, 1, n);
  for (int i = 0; i < n; ++i) {
    for (int s = 0; s < t; ++s) {
      x(s, 0, i) = norm(rng);
      y(s, i) = 1.0 + 0.5 * x(s, 0, i) + norm(rng);
    }
  }
  const PanelDataset panel(y, x);
  RollingConfig cfg;
  cfg.window = w;
  cfg.methods = {"individual", "pooled"};
  const auto res = run_rolling(panel, cfg);
  CHECK(res.reports.at("all").stats.at("pooled").rmsfe < 1.0);
}

TEST_CASE("conditioning subsets never exceed the full record count") {
  const int n = 6, t = 40, w = 20;
  Rng rng = make_rng(406);
  std::normal_distribution<double> norm(0.0, 1.0);
  arma::mat y(t, n);
  arma::cube x(t, 1, n);
  for (int i = 0; i < n; ++i) {
    for (int s = 0; s < t; ++s) {
      x(s, 0, i) = norm(rng);
      y(s, i) = 0.3 * i + 0.6 * x(s, 0, i) + norm(rng);
    }
  }
  RollingConfig cfg;
  cfg.window = w;
  cfg.methods = {"individual", "pooled"};
  cfg.conditioning_c = 0.4;
  const auto res = run_rolling(PanelDataset(y, x), cfg);
  const auto near = conditioning_filter(res.d_stats, 0.0, cfg.conditioning_c);
  const auto away = conditioning_filter(res.d_stats, 1.0, cfg.conditioning_c);
  CHECK(near.keys.size() + away.keys.size() <= res.d_stats.size());
}

TEST_CASE("config parser") {
  const auto cfg = parse_config_text(
      "# comment\n"
      "reps = 50\n"
      "methods = individual,pooled\n"
      "[cell]\n"
      "name = one\n"
      "beta0 = 0.5\n"
      "[cell]\n"
      "name = two\n");
  CHECK(cfg.globals.get_long("reps") == 50);
  CHECK(cfg.globals.get("methods") == "individual,pooled");
  REQUIRE(cfg.sections.size() == 2);
  CHECK(cfg.sections[0].get_double("beta0") == doctest::Approx(0.5));
  CHECK(cfg.sections[1].get("name") == "two");
  CHECK(cfg.sections[1].get_or("missing", "dflt") == "dflt");
  CHECK_THROWS_AS(cfg.sections[0].get("absent"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config_text("key value\n"), std::invalid_argument);
}

TEST_CASE("records and d-stat files round trip") {
  TempDir dir;
  std::vector<ForecastRecord> records{{0, 3, "individual", 1.25, 1.5},
                                      {1, 3, "pooled", -0.5, 0.25}};
  const std::string p = dir.file("records.csv", records_to_csv(records));
  const auto back = records_from_csv(p);
  REQUIRE(back.size() == 2);
  CHECK(back[0].method == "individual");
  CHECK(back[1].forecast == doctest::Approx(-0.5));

  std::vector<ConditioningStat> stats{{0, 3, 1.0, 0.9, 0.2}};
  const std::string q = dir.file("dstats.csv", dstats_to_csv(stats));
  const auto sback = dstats_from_csv(q);
  REQUIRE(sback.size() == 1);
  CHECK(sback[0].sd == doctest::Approx(0.2));
}

TEST_CASE("cli dispatch") {
  TempDir dir;
  SUBCASE("unknown subcommand exits nonzero") {
    CHECK(cli_dispatch({"frobnicate"}) != 0);
  }
  SUBCASE("ar1-table runs and prints the delta column") {
    const std::string out = (dir.path / "ar1.csv").string();
    CHECK(cli_dispatch({"ar1-table", "--seed", "1", "--draws", "2000", "--out", out}) == 0);
    const std::string text = dir.read("ar1.csv");
    CHECK(text.find("beta0,e_y2eta,delta_ar") != std::string::npos);
    CHECK(text.find("0.4999") != std::string::npos);
  }
  SUBCASE("pr2-table emits the calibration rows") {
    const std::string out = (dir.path / "pr2.csv").string();
    CHECK(cli_dispatch({"pr2-table", "--out", out}) == 0);
    const std::string text = dir.read("pr2.csv");
    CHECK(text.find("a_beta,beta0,pr2_rho0,pr2_rho05") != std::string::npos);
  }
  SUBCASE("forecast then evaluate round trips the report") {
    const std::string csv = synthetic_long_csv(5, 18, 407);
    dir.file("panel.csv", csv);
    dir.file("run.cfg",
             "window = 12\n"
             "methods = individual,pooled\n"
             "benchmark = individual\n"
             "[data]\n"
             "path = " + (dir.path / "panel.csv").string() + "\n");
    const std::string out1 = (dir.path / "fc").string();
    REQUIRE(cli_dispatch({"forecast", "--config", (dir.path / "run.cfg").string(), "--out",
                          out1}) == 0);
    const std::string out2 = (dir.path / "ev").string();
    REQUIRE(cli_dispatch({"evaluate", "--records", out1 + "/records.csv", "--dstats",
                          out1 + "/dstats.csv", "--benchmark", "individual", "--out",
                          out2}) == 0);
    // records carry 12 significant digits, so the recomputed report agrees to
    // the same precision but not necessarily byte for byte
    const std::string a = dir.read("fc/report_all.csv"), b = dir.read("ev/report_all.csv");
    CHECK_FALSE(a.empty());
    std::istringstream ia(a), ib(b);
    std::string la, lb;
    std::getline(ia, la);
    std::getline(ib, lb);
    CHECK(la == lb);  // identical header
    while (std::getline(ia, la) && std::getline(ib, lb)) {
      std::istringstream fa(la), fb(lb);
      std::string ta, tb;
      std::getline(fa, ta, ',');
      std::getline(fb, tb, ',');
      CHECK(ta == tb);  // subset
      std::getline(fa, ta, ',');
      std::getline(fb, tb, ',');
      CHECK(ta == tb);  // method
      while (std::getline(fa, ta, ',') && std::getline(fb, tb, ',')) {
        CHECK(std::stod(ta) == doctest::Approx(std::stod(tb)).epsilon(1e-9));
      }
    }
  }
  SUBCASE("simulate is byte-identical across reruns") {
    dir.file("grid.cfg",
             "reps = 12\n"
             "methods = individual,pooled\n"
             "[cell]\n"
             "name = tiny\n"
             "preset = 1\n"
             "n_units = 15\n"
             "n_periods = 20\n");
    const std::string o1 = (dir.path / "s1").string(), o2 = (dir.path / "s2").string();
    REQUIRE(cli_dispatch({"simulate", "--config", (dir.path / "grid.cfg").string(), "--seed",
                          "11", "--out", o1}) == 0);
    REQUIRE(cli_dispatch({"simulate", "--config", (dir.path / "grid.cfg").string(), "--seed",
                          "11", "--out", o2}) == 0);
    CHECK(dir.read("s1/rmsfe.csv") == dir.read("s2/rmsfe.csv"));
    CHECK(dir.read("s1/manifest.json") == dir.read("s2/manifest.json"));
    CHECK_FALSE(dir.read("s1/rmsfe.csv").empty());
  }
  SUBCASE("simulate --kappa all doubles the grid with suffixed cells") {
    dir.file("grid2.cfg",
             "reps = 6\n"
             "methods = individual,pooled\n"
             "[cell]\n"
             "name = base\n"
             "preset = 1\n"
             "n_units = 10\n"
             "n_periods = 15\n");
    const std::string out = (dir.path / "ka").string();
    REQUIRE(cli_dispatch({"simulate", "--config", (dir.path / "grid2.cfg").string(),
                          "--seed", "2", "--kappa", "all", "--out", out}) == 0);
    const std::string text = dir.read("ka/rmsfe.csv");
    CHECK(text.find("base-k0,0,") != std::string::npos);
    CHECK(text.find("base-kpm1,pm1,") != std::string::npos);
  }
  SUBCASE("forecast with a spatial section appends the lagged averages") {
    const std::string csv = synthetic_long_csv(4, 17, 409);
    dir.file("sp.csv", csv);
    dir.file("sp.cfg",
             "window = 12\n"
             "methods = individual,pooled\n"
             "[data]\n"
             "path = " + (dir.path / "sp.csv").string() + "\n" +
             "[spatial]\n"
             "edges = ua:ub,ub:uc,uc:ud,ud:ua\n"
             "regions = ua:0,ub:0,uc:1,ud:1\n"
             "include_region_avg = 0\n");
    const std::string out = (dir.path / "sp").string();
    REQUIRE(cli_dispatch({"forecast", "--config", (dir.path / "sp.cfg").string(), "--out",
                          out}) == 0);
    const auto records = records_from_csv(out + "/records.csv");
    CHECK_FALSE(records.empty());
  }
  SUBCASE("density emits grid and density pairs") {
    // reuse a small synthetic records file with two methods
    std::vector<ForecastRecord> records;
    Rng rng = make_rng(408);
    std::normal_distribution<double> norm(0.0, 1.0);
    for (int u = 0; u < 8; ++u) {
      for (long o = 0; o < 6; ++o) {
        const double actual = norm(rng);
        records.push_back({u, o, "individual", actual + norm(rng), actual});
        records.push_back({u, o, "pooled", actual + norm(rng), actual});
      }
    }
    dir.file("records.csv", records_to_csv(records));
    const std::string out = (dir.path / "dens").string();
    REQUIRE(cli_dispatch({"density", "--records", (dir.path / "records.csv").string(),
                          "--benchmark", "individual", "--out", out}) == 0);
    const std::string text = dir.read("dens/density_pooled.csv");
    CHECK(text.find("grid,density") != std::string::npos);
  }
}
