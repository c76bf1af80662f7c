// Command-line front end: fit / risk-curve / simulate / cv / rerun.
// Exit codes: 0 success, 2 usage or validation failure, 3 numeric failure.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "dslasso/csv.hpp"
#include "dslasso/cv.hpp"
#include "dslasso/manifest.hpp"
#include "dslasso/model_core.hpp"
#include "dslasso/parallel.hpp"
#include "dslasso/risk.hpp"
#include "dslasso/shrinkage.hpp"
#include "dslasso/sim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dslasso;

namespace {

struct GlobalOpts {
  std::string out_dir = ".";
  int threads = default_thread_count();
};

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << content;
}

json matrix_to_json(const MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InvalidArgument("matrix JSON must be a nested array");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  MatrixXd m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (j[i].size() != cols) throw InvalidArgument("matrix JSON has ragged rows");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
  }
  return m;
}

json vector_to_json(const VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

VectorXd vector_from_json(const json& j) {
  VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

Restriction restriction_from_json(const json& j) {
  return Restriction::make(matrix_from_json(j.at("H")), vector_from_json(j.at("h")));
}

json restriction_to_json(const Restriction& r) {
  json j;
  j["schema_version"] = 1;
  j["H"] = matrix_to_json(r.H);
  j["h"] = vector_to_json(r.h);
  return j;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  json j;
  in >> j;
  return j;
}

RunManifest make_manifest(const std::string& command, const json& config, std::uint64_t seed,
                          const std::vector<std::string>& input_files) {
  RunManifest m;
  m.command = command;
  m.config = config;
  m.seed = seed;
  m.artifact_version = DSLASSO_VERSION;
  for (const auto& f : input_files) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64_file(f)));
    m.input_digests[f] = buf;
  }
  return m;
}

VarianceSource variance_source_from(const std::string& s) {
  if (s == "ols") return VarianceSource::OlsResidual;
  if (s == "lasso") return VarianceSource::LassoResidual;
  throw InvalidArgument("--variance-source must be 'ols' or 'lasso'");
}

// ---------------------------------------------------------------- fit

int run_fit(const json& cfg, const GlobalOpts& g) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string data_path = cfg.at("data").get<std::string>();
  const std::string response = cfg.at("response").get<std::string>();
  std::vector<std::string> drop;
  if (cfg.contains("drop")) drop = cfg.at("drop").get<std::vector<std::string>>();

  RegressionData data = load_csv(data_path, response, drop);
  if (cfg.value("center", true)) data = center_columns(data, cfg.value("center_response", false));

  const Restriction restr = restriction_from_json(cfg.at("restriction"));
  const double alpha = cfg.value("alpha", 0.05);
  LassoConfig lc;
  lc.seed = cfg.value("seed", std::uint64_t{0});
  if (cfg.contains("lambda") && !cfg.at("lambda").is_null()) {
    lc.lambda = cfg.at("lambda").get<double>();
  } else {
    lc.lambda_grid = lambda_grid_default(data, cfg.value("lambda_grid_len", 20));
  }
  const VarianceSource source = variance_source_from(cfg.value("variance_source", "ols"));

  FitAllResult fit = fit_all(data, restr, lc, alpha, source);
  for (const auto& w : fit.warnings) std::cerr << "warning: " << w << '\n';

  std::ostringstream os;
  os << "estimator,coefficient_index,value,test_stat,decision\n";
  const EstimatorKind order[] = {EstimatorKind::ULE, EstimatorKind::RLE, EstimatorKind::PTLE,
                                 EstimatorKind::SSLE, EstimatorKind::PRSSLE};
  for (EstimatorKind k : order) {
    auto it = fit.estimators.find(k);
    if (it == fit.estimators.end()) continue;
    const EstimatorResult& e = it->second;
    for (Eigen::Index j = 0; j < e.beta.size(); ++j) {
      os << to_string(k) << ',' << j << ',' << format_full(e.beta(j)) << ','
         << (e.test_stat ? format_full(*e.test_stat) : "") << ','
         << (e.decision ? (*e.decision ? "accept" : "reject") : "") << '\n';
    }
  }
  const fs::path out = fs::path(g.out_dir) / "estimates.csv";
  write_text(out, os.str());

  RunManifest m = make_manifest("fit", cfg, lc.seed, {data_path});
  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  m.write((fs::path(g.out_dir) / "fit_manifest.json").string());
  std::cout << "wrote " << out.string() << " (lambda=" << format_full(fit.lambda)
            << ", L_n=" << format_full(fit.test.statistic) << ")\n";
  return 0;
}

// ---------------------------------------------------------------- risk-curve

int run_risk_curve(const json& cfg, const GlobalOpts& g) {
  const auto t0 = std::chrono::steady_clock::now();
  const int p = cfg.at("p").get<int>();
  const int q = cfg.at("q").get<int>();
  const double sigma2 = cfg.value("sigma2", 1.0);
  MatrixXd C = cfg.contains("C") ? matrix_from_json(cfg.at("C")) : MatrixXd::Identity(p, p);
  MatrixXd W = cfg.contains("W") ? matrix_from_json(cfg.at("W")) : MatrixXd::Identity(p, p);
  MatrixXd H = matrix_from_json(cfg.at("H"));
  VectorXd h = vector_from_json(cfg.at("h"));
  VectorXd xi = vector_from_json(cfg.at("xi"));
  const std::vector<double> alphas = cfg.at("alphas").get<std::vector<double>>();
  const std::vector<double> grid = cfg.at("delta2_grid").get<std::vector<double>>();
  if (grid.empty()) throw InvalidArgument("delta2 grid is empty");

  RiskScenario sc = RiskScenario::make(p, q, sigma2, std::move(C), std::move(W), std::move(H),
                                       std::move(h), std::move(xi),
                                       alphas.empty() ? 0.05 : alphas.front());
  sc.weighted_shrink_trace = cfg.value("weighted_shrink_trace", false);
  const RiskTable table = risk_curves(sc, grid, alphas);

  std::ostringstream os;
  os << "delta2,estimator,alpha,adb_norm,adqb,adqr\n";
  json jrows = json::array();
  for (const RiskTableRow& row : table.rows) {
    os << format_full(row.delta2) << ',' << to_string(row.kind) << ','
       << (row.alpha ? format_full(*row.alpha) : "") << ',' << format_full(row.adb_norm) << ','
       << format_full(row.adqb) << ',' << format_full(row.adqr) << '\n';
    json jr;
    jr["delta2"] = row.delta2;
    jr["estimator"] = to_string(row.kind);
    if (row.alpha)
      jr["alpha"] = *row.alpha;
    else
      jr["alpha"] = nullptr;
    jr["adb_norm"] = row.adb_norm;
    jr["adqb"] = row.adqb;
    jr["adqr"] = row.adqr;
    jrows.push_back(jr);
  }
  json jdoc;
  jdoc["schema_version"] = 1;
  jdoc["rows"] = jrows;

  write_text(fs::path(g.out_dir) / "risk_curves.csv", os.str());
  write_text(fs::path(g.out_dir) / "risk_curves.json", jdoc.dump(2) + "\n");

  RunManifest m = make_manifest("risk-curve", cfg, 0, {});
  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  m.write((fs::path(g.out_dir) / "risk_curves_manifest.json").string());
  std::cout << "wrote risk_curves.csv / risk_curves.json (" << table.rows.size() << " rows)\n";
  return 0;
}

// ---------------------------------------------------------------- simulate

SimDesign sim_design_from_json(const json& cfg) {
  SimDesign d;
  d.n = cfg.value("n", 100);
  if (cfg.contains("p_list")) d.p_list = cfg.at("p_list").get<std::vector<int>>();
  d.k_nonzero = cfg.value("k_nonzero", 1);
  if (cfg.contains("r_list")) d.r_list = cfg.at("r_list").get<std::vector<double>>();
  if (cfg.contains("delta2_list"))
    d.delta2_list = cfg.at("delta2_list").get<std::vector<double>>();
  d.reps = cfg.value("reps", 2000);
  d.sigma_eps = cfg.value("sigma_eps", 5.0);
  if (cfg.contains("alpha_list")) d.alpha_list = cfg.at("alpha_list").get<std::vector<double>>();
  d.seed = cfg.value("seed", std::uint64_t{0});
  const std::string mode = cfg.value("lambda_mode", "FIXED_SQRT_N");
  if (mode == "CV")
    d.lambda_mode = LambdaMode::CV;
  else if (mode == "FIXED_SQRT_N")
    d.lambda_mode = LambdaMode::FixedSqrtN;
  else
    throw InvalidArgument("lambda_mode must be CV or FIXED_SQRT_N");
  d.lambda_c = cfg.value("lambda_c", 0.5);
  d.variance_source = variance_source_from(cfg.value("variance_source", "ols"));
  return d;
}

json sim_design_to_json(const SimDesign& d) {
  json cfg;
  cfg["schema_version"] = 1;
  cfg["n"] = d.n;
  cfg["p_list"] = d.p_list;
  cfg["k_nonzero"] = d.k_nonzero;
  cfg["r_list"] = d.r_list;
  cfg["delta2_list"] = d.delta2_list;
  cfg["reps"] = d.reps;
  cfg["sigma_eps"] = d.sigma_eps;
  cfg["alpha_list"] = d.alpha_list;
  cfg["seed"] = d.seed;
  cfg["lambda_mode"] = to_string(d.lambda_mode);
  cfg["lambda_c"] = d.lambda_c;
  cfg["variance_source"] = d.variance_source == VarianceSource::OlsResidual ? "ols" : "lasso";
  return cfg;
}

int run_simulate(const json& cfg, const GlobalOpts& g) {
  const auto t0 = std::chrono::steady_clock::now();
  const SimDesign d = sim_design_from_json(cfg);
  const EfficiencyTable table = run_experiment(d, g.threads);
  write_text(fs::path(g.out_dir) / "efficiency.csv", efficiency_csv(table));
  write_text(fs::path(g.out_dir) / "efficiency_table.txt", efficiency_text(table));
  RunManifest m = make_manifest("simulate", sim_design_to_json(d), d.seed, {});
  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  m.write((fs::path(g.out_dir) / "efficiency_manifest.json").string());
  std::cout << "wrote efficiency.csv / efficiency_table.txt (" << table.cells.size()
            << " cells)\n";
  return 0;
}

// ---------------------------------------------------------------- cv

int run_cv(const json& cfg, const GlobalOpts& g) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string data_path = cfg.at("data").get<std::string>();
  const std::string response = cfg.at("response").get<std::string>();
  std::vector<std::string> drop;
  if (cfg.contains("drop")) drop = cfg.at("drop").get<std::vector<std::string>>();
  RegressionData data = load_csv(data_path, response, drop);

  CvDesign cv;
  cv.folds = cfg.value("folds", 10);
  cv.bootstrap_reps = cfg.value("bootstrap_reps", 1000);
  if (cfg.contains("alpha_list")) cv.alpha_list = cfg.at("alpha_list").get<std::vector<double>>();
  cv.restriction = restriction_from_json(cfg.at("restriction"));
  cv.seed = cfg.value("seed", std::uint64_t{0});
  cv.response_column = response;
  cv.variance_source = variance_source_from(cfg.value("variance_source", "ols"));
  cv.standardize = cfg.value("standardize", false);
  cv.lambda_grid_len = cfg.value("lambda_grid_len", 20);
  cv.nested_cv_folds = cfg.value("nested_cv_folds", 10);

  const PredictionErrorReport report = bootstrap_cv(data, cv, g.threads);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  if (report.failures > 0)
    std::cerr << "note: " << report.failures
              << " bootstrap replicates failed and were excluded\n";

  write_text(fs::path(g.out_dir) / "prediction_error.csv", prediction_error_csv(report));
  write_text(fs::path(g.out_dir) / "prediction_error_table.txt", prediction_error_text(report));
  write_text(fs::path(g.out_dir) / "cv_series.csv", prediction_error_series_csv(report));
  RunManifest m = make_manifest("cv", cfg, cv.seed, {data_path});
  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  m.write((fs::path(g.out_dir) / "cv_manifest.json").string());
  std::cout << "wrote prediction_error.csv / prediction_error_table.txt / cv_series.csv\n";
  return 0;
}

json reference_scenario_json(double sigma2) {
  json cfg;
  cfg["schema_version"] = 1;
  cfg["p"] = 4;
  cfg["q"] = 3;
  cfg["sigma2"] = sigma2;
  cfg["H"] = json::array({json::array({1, -1, 3, 1}), json::array({3, 2, 1, 0}),
                          json::array({4, -2, 0, 5})});
  cfg["h"] = json::array({0, 0, 0});
  cfg["xi"] = json::array({1, 1, 1});
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Restricted and doubly-shrunken LASSO estimation toolkit"};
  app.require_subcommand(1);

  GlobalOpts g;
  std::uint64_t seed = 0;
  app.add_option("--out-dir", g.out_dir, "output directory (created if missing)");
  app.add_option("--threads", g.threads,
                 "worker threads (results are thread-count independent)");
  auto* seed_opt = app.add_option("--seed", seed, "master seed");

  // fit
  auto* fit = app.add_subcommand("fit", "fit all estimators on a CSV dataset");
  std::string fit_data, fit_response, fit_restriction;
  bool fit_reference_restriction = false;
  double fit_alpha = 0.05;
  double fit_lambda = -1.0;
  bool fit_cv = false;
  std::string fit_vs = "ols";
  bool fit_no_center = false;
  bool fit_center_response = false;
  std::vector<std::string> fit_drop;
  fit->add_option("--data", fit_data, "input CSV")->required();
  fit->add_option("--response", fit_response, "response column name")->required();
  auto* fr = fit->add_option("--restriction", fit_restriction, "restriction JSON file (H, h)");
  fit->add_flag("--reference-restriction", fit_reference_restriction,
                "use the built-in 3x8 prostate-study restriction")
      ->excludes(fr);
  fit->add_option("--alpha", fit_alpha, "test level");
  auto* fl = fit->add_option("--lambda", fit_lambda, "fixed LASSO penalty");
  fit->add_flag("--cv", fit_cv, "choose lambda by 10-fold cross-validation (default)")
      ->excludes(fl);
  fit->add_option("--variance-source", fit_vs, "ols | lasso");
  fit->add_flag("--no-center", fit_no_center, "skip predictor centering");
  fit->add_flag("--center-response", fit_center_response, "also center the response");
  fit->add_option("--drop", fit_drop, "column to ignore (repeatable)");

  // risk-curve
  auto* rc = app.add_subcommand("risk-curve", "evaluate asymptotic risk curves");
  std::string rc_scenario;
  bool rc_reference = false;
  double rc_sigma2 = 1.0;
  std::vector<double> rc_alphas;
  double rc_d2_max = 50.0;
  int rc_d2_steps = 101;
  auto* rs = rc->add_option("--scenario", rc_scenario, "scenario JSON file");
  rc->add_flag("--reference-scenario", rc_reference, "built-in p=4, q=3 scenario")->excludes(rs);
  rc->add_option("--sigma2", rc_sigma2, "error variance");
  rc->add_option("--alpha", rc_alphas, "test level (repeatable)");
  rc->add_option("--delta2-max", rc_d2_max, "grid upper end");
  rc->add_option("--delta2-steps", rc_d2_steps, "grid length");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Monte Carlo relative-efficiency experiment");
  std::string sim_design_file;
  bool sim_reference = false;
  int sim_reps = -1;
  std::vector<int> sim_p;
  std::vector<double> sim_r, sim_d2;
  int sim_k = -1;
  std::string sim_lambda_mode;
  auto* sd = sim->add_option("--design", sim_design_file, "design JSON file");
  sim->add_flag("--reference-sim", sim_reference,
                "built-in design (n=100, p in {10,20,30}, r in {0,0.2,0.9})")
      ->excludes(sd);
  sim->add_option("--reps", sim_reps, "replicates per cell");
  sim->add_option("--p", sim_p, "p values (repeatable, overrides design)");
  sim->add_option("--r", sim_r, "equicorrelation values (repeatable)");
  sim->add_option("--delta2", sim_d2, "noncentrality values (repeatable)");
  sim->add_option("--k", sim_k, "number of nonzero coefficients");
  sim->add_option("--lambda-mode", sim_lambda_mode, "CV | FIXED_SQRT_N");

  // cv
  auto* cvc = app.add_subcommand("cv", "bootstrap 10-fold CV prediction-error study");
  std::string cv_data, cv_response, cv_restriction, cv_config;
  bool cv_reference_restriction = false;
  int cv_reps = -1, cv_folds = -1;
  std::vector<double> cv_alphas;
  std::string cv_vs = "ols";
  bool cv_standardize = false;
  std::vector<std::string> cv_drop;
  cvc->add_option("--data", cv_data, "input CSV")->required();
  cvc->add_option("--response", cv_response, "response column name")->required();
  cvc->add_option("--cv-config", cv_config, "CV design JSON file");
  auto* cr = cvc->add_option("--restriction", cv_restriction, "restriction JSON file");
  cvc->add_flag("--reference-restriction", cv_reference_restriction,
                "use the built-in 3x8 prostate-study restriction")
      ->excludes(cr);
  cvc->add_option("--reps", cv_reps, "bootstrap replicates");
  cvc->add_option("--folds", cv_folds, "CV folds");
  cvc->add_option("--alpha", cv_alphas, "PTLE level (repeatable)");
  cvc->add_option("--variance-source", cv_vs, "ols | lasso");
  cvc->add_flag("--standardize", cv_standardize, "scale predictors to unit train variance");
  cvc->add_option("--drop", cv_drop, "column to ignore (repeatable)");

  // rerun
  auto* rr = app.add_subcommand("rerun", "replay a command from its manifest");
  std::string rr_manifest;
  rr->add_option("--manifest", rr_manifest, "manifest JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  const bool seed_given = seed_opt->count() > 0;

  try {
    fs::create_directories(g.out_dir);
    if (fit->parsed()) {
      json cfg;
      cfg["schema_version"] = 1;
      cfg["data"] = fit_data;
      cfg["response"] = fit_response;
      if (fit_reference_restriction)
        cfg["restriction"] = restriction_to_json(prostate_restriction());
      else if (!fit_restriction.empty())
        cfg["restriction"] = load_json_file(fit_restriction);
      else
        throw InvalidArgument("fit needs --restriction or --reference-restriction");
      cfg["alpha"] = fit_alpha;
      if (fl->count() > 0) cfg["lambda"] = fit_lambda;
      cfg["variance_source"] = fit_vs;
      cfg["center"] = !fit_no_center;
      cfg["center_response"] = fit_center_response;
      if (!fit_drop.empty()) cfg["drop"] = fit_drop;
      cfg["seed"] = seed;
      (void)fit_cv;
      return run_fit(cfg, g);
    }
    if (rc->parsed()) {
      json cfg;
      if (rc_reference)
        cfg = reference_scenario_json(rc_sigma2);
      else if (!rc_scenario.empty())
        cfg = load_json_file(rc_scenario);
      else
        throw InvalidArgument("risk-curve needs --scenario or --reference-scenario");
      if (rc->count("--sigma2") > 0) cfg["sigma2"] = rc_sigma2;
      if (!rc_alphas.empty()) cfg["alphas"] = rc_alphas;
      if (!cfg.contains("alphas")) cfg["alphas"] = std::vector<double>{0.15, 0.20, 0.25};
      if (!cfg.contains("delta2_grid")) {
        if (rc_d2_steps < 1) throw InvalidArgument("delta2 grid is empty");
        std::vector<double> grid(rc_d2_steps);
        for (int i = 0; i < rc_d2_steps; ++i)
          grid[i] = rc_d2_max * i / std::max(1, rc_d2_steps - 1);
        cfg["delta2_grid"] = grid;
      }
      return run_risk_curve(cfg, g);
    }
    if (sim->parsed()) {
      json cfg;
      if (!sim_design_file.empty())
        cfg = load_json_file(sim_design_file);
      else
        cfg = sim_design_to_json(SimDesign{});  // reference design
      if (sim_reps > 0) cfg["reps"] = sim_reps;
      if (!sim_p.empty()) cfg["p_list"] = sim_p;
      if (!sim_r.empty()) cfg["r_list"] = sim_r;
      if (!sim_d2.empty()) cfg["delta2_list"] = sim_d2;
      if (sim_k > 0) cfg["k_nonzero"] = sim_k;
      if (!sim_lambda_mode.empty()) cfg["lambda_mode"] = sim_lambda_mode;
      if (seed_given) cfg["seed"] = seed;
      (void)sim_reference;
      return run_simulate(cfg, g);
    }
    if (cvc->parsed()) {
      json cfg;
      if (!cv_config.empty()) cfg = load_json_file(cv_config);
      cfg["schema_version"] = 1;
      cfg["data"] = cv_data;
      cfg["response"] = cv_response;
      if (cv_reference_restriction)
        cfg["restriction"] = restriction_to_json(prostate_restriction());
      else if (!cv_restriction.empty())
        cfg["restriction"] = load_json_file(cv_restriction);
      else if (!cfg.contains("restriction"))
        throw InvalidArgument("cv needs --restriction, --reference-restriction or a cv-config");
      if (cv_reps > 0) cfg["bootstrap_reps"] = cv_reps;
      if (cv_folds > 1) cfg["folds"] = cv_folds;
      if (!cv_alphas.empty()) cfg["alpha_list"] = cv_alphas;
      if (cvc->count("--variance-source") > 0) cfg["variance_source"] = cv_vs;
      if (cv_standardize) cfg["standardize"] = true;
      if (!cv_drop.empty()) cfg["drop"] = cv_drop;
      if (seed_given || !cfg.contains("seed")) cfg["seed"] = seed;
      return run_cv(cfg, g);
    }
    if (rr->parsed()) {
      const RunManifest m = RunManifest::read(rr_manifest);
      if (m.command == "fit") return run_fit(m.config, g);
      if (m.command == "risk-curve") return run_risk_curve(m.config, g);
      if (m.command == "simulate") return run_simulate(m.config, g);
      if (m.command == "cv") return run_cv(m.config, g);
      throw InvalidArgument("manifest has unknown command: " + m.command);
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const EmptyFile& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const MissingColumn& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NonNumericCell& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: bad configuration: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
