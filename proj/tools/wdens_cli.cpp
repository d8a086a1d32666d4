// Command-line surface for simulating contaminated functional data, fitting
// and cross-validating Wiener-density estimators, scoring them against
// oracle densities, classifying curves, and calibrating privacy noise.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "wdens/classify.hpp"
#include "wdens/experiment.hpp"
#include "wdens/io.hpp"
#include "wdens/parallel.hpp"
#include "wdens/privacy.hpp"
#include "wdens/projection.hpp"
#include "wdens/simulate.hpp"

namespace {

using nlohmann::json;
using namespace wdens;

constexpr int kExitValidation = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitNumerical = 4;

void print_record(const json& j) { std::cout << j.dump() << std::endl; }

ExperimentConfig load_config_or_default(const std::string& config_path) {
  if (config_path.empty()) return ExperimentConfig{};
  return config_from_json(load_json(config_path));
}

int run(int argc, char** argv) {
  CLI::App app{"Wiener-density estimation for noise-contaminated functional data"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  std::uint64_t seed = 1;
  int threads = 0;
  app.add_option("--config", config_path, "JSON experiment config file");
  app.add_option("--seed", seed, "master seed")->capture_default_str();
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--threads", threads,
                 "worker threads (0 = WDENS_THREADS or hardware default)")
      ->capture_default_str();

  // ---- privacy ----------------------------------------------------------
  auto* privacy = app.add_subcommand(
      "privacy", "infimum noise scale for an (alpha, beta)-privacy budget");
  PrivacyBudget budget{1.0, 0.05, 1.0};
  privacy->add_option("--alpha", budget.alpha, "privacy parameter alpha > 0")
      ->capture_default_str();
  privacy->add_option("--beta", budget.beta, "privacy parameter beta in (0,2]")
      ->capture_default_str();
  privacy->add_option("--c", budget.c_x1, "derivative-norm bound C_{X,1}")
      ->capture_default_str();

  // ---- simulate ----------------------------------------------------------
  auto* simulate = app.add_subcommand("simulate", "draw a sample from a model setting");
  std::string sim_setting = "i";
  int sim_n = 500, sim_T = 101;
  simulate->add_option("--setting", sim_setting, "model setting: i|ii|iii|iv|v|custom")
      ->capture_default_str();
  simulate->add_option("--n", sim_n, "sample size")->capture_default_str();
  simulate->add_option("--grid-T", sim_T, "grid point count")->capture_default_str();

  // ---- estimate ----------------------------------------------------------
  auto* estimate = app.add_subcommand(
      "estimate", "estimate the basis from a path file and fit the series estimator");
  std::string est_paths;
  double est_sigma = 0.1;
  int est_M = 20, est_m = 3, est_K = 5;
  std::string est_weight = "soft";
  estimate->add_option("--paths", est_paths, "input paths CSV")->required();
  estimate->add_option("--sigma", est_sigma, "noise scale sigma")->capture_default_str();
  estimate->add_option("--basis-M", est_M, "sine expansion size M")->capture_default_str();
  estimate->add_option("--m", est_m, "projection dimension m")->capture_default_str();
  estimate->add_option("--K", est_K, "degree budget K")->capture_default_str();
  estimate->add_option("--weight", est_weight, "weight rule: hard|soft")
      ->capture_default_str();

  // ---- cv ----------------------------------------------------------------
  auto* cv = app.add_subcommand(
      "cv", "cross-validate (m, K), or K for the single-parameter baseline");
  std::string cv_paths_file;
  double cv_sigma = 0.1;
  int cv_M = 20, cv_m_max = 6, cv_K_max = 10;
  std::size_t cv_ref_paths = 10000;
  std::string cv_weight = "soft", cv_fallback = "joint";
  bool cv_dn = false;
  cv->add_option("--paths", cv_paths_file, "input paths CSV")->required();
  cv->add_option("--sigma", cv_sigma, "noise scale sigma")->capture_default_str();
  cv->add_option("--basis-M", cv_M, "sine expansion size M")->capture_default_str();
  cv->add_option("--m-max", cv_m_max, "grid upper bound for m")->capture_default_str();
  cv->add_option("--K-max", cv_K_max, "grid upper bound for K")->capture_default_str();
  cv->add_option("--ref-paths", cv_ref_paths, "Monte-Carlo reference paths")
      ->capture_default_str();
  cv->add_option("--weight", cv_weight, "weight rule: hard|soft")->capture_default_str();
  cv->add_option("--fallback", cv_fallback, "fallback policy: joint|alternate")
      ->capture_default_str();
  cv->add_flag("--dn", cv_dn, "cross-validate the single-parameter baseline instead");

  // ---- evaluate ----------------------------------------------------------
  auto* evaluate = app.add_subcommand(
      "evaluate", "evaluate a saved estimate on paths, optionally against the oracle");
  std::string eval_estimate, eval_paths_file, eval_oracle_setting;
  int eval_R = 100000;
  std::string eval_fallback = "joint";
  evaluate->add_option("--estimate", eval_estimate, "estimate JSON artifact")->required();
  evaluate->add_option("--paths", eval_paths_file, "evaluation paths CSV")->required();
  evaluate
      ->add_option("--oracle-setting", eval_oracle_setting,
                   "score against this model's oracle density: i|ii|iii|iv|v")
      ->capture_default_str();
  evaluate->add_option("--oracle-R", eval_R, "oracle Monte-Carlo draws")
      ->capture_default_str();
  evaluate->add_option("--fallback", eval_fallback, "fallback policy: joint|alternate")
      ->capture_default_str();

  // ---- classify ----------------------------------------------------------
  auto* classify = app.add_subcommand("classify", "two-population Bayes classification");
  auto* train = classify->add_subcommand("train", "fit one density per class");
  std::string train_paths, train_labels;
  double train_sigma = 0.1, train_sigma1 = -1.0;
  int train_M = 20, train_m_max = 6, train_K_max = 10;
  std::size_t train_ref_paths = 10000;
  std::string train_weight = "soft";
  train->add_option("--paths", train_paths, "training paths CSV")->required();
  train->add_option("--labels", train_labels, "training labels CSV")->required();
  train->add_option("--sigma", train_sigma, "common noise scale")->capture_default_str();
  train
      ->add_option("--sigma1", train_sigma1,
                   "class-1 noise scale; must equal --sigma (distinct reference "
                   "measures are not supported)")
      ->capture_default_str();
  train->add_option("--basis-M", train_M, "sine expansion size M")->capture_default_str();
  train->add_option("--m-max", train_m_max, "CV grid bound for m")->capture_default_str();
  train->add_option("--K-max", train_K_max, "CV grid bound for K")->capture_default_str();
  train->add_option("--ref-paths", train_ref_paths, "CV reference paths")
      ->capture_default_str();
  train->add_option("--weight", train_weight, "weight rule: hard|soft")
      ->capture_default_str();
  auto* predict = classify->add_subcommand("predict", "label new curves");
  std::string pred_classifier, pred_paths;
  predict->add_option("--classifier", pred_classifier, "classifier JSON artifact")
      ->required();
  predict->add_option("--paths", pred_paths, "paths CSV to classify")->required();
  classify->require_subcommand(1);

  // ---- reproduce ----------------------------------------------------------
  auto* reproduce = app.add_subcommand(
      "reproduce", "batch protocol: simulate, select, fit, score against the oracle");
  bool rep_write_config = false;
  reproduce->add_flag("--write-config", rep_write_config,
                      "write the resolved config next to the results");

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) set_default_thread_count(threads);
  const RngFactory rng(seed);

  if (privacy->parsed()) {
    const double value = min_privacy_sigma(budget);
    print_record(json{{"command", "privacy"},
                      {"alpha", budget.alpha},
                      {"beta", budget.beta},
                      {"c_x1", budget.c_x1},
                      {"min_sigma", value}});
    std::cout << format_double(value) << std::endl;
    return 0;
  }

  if (simulate->parsed()) {
    ExperimentConfig cfg = load_config_or_default(config_path);
    const Setting setting = setting_from_string(sim_setting);
    const ModelSpec model = cfg.resolve_model(setting);
    const Grid grid(sim_T);
    const Sample sample = simulate_sample(model, sim_n, grid, rng.child(1));
    std::filesystem::create_directories(out_dir);
    write_paths_csv(out_dir + "/ys.csv", sample.y);
    write_paths_csv(out_dir + "/xs.csv", sample.x);
    print_record(json{{"command", "simulate"},
                      {"setting", sim_setting},
                      {"n", sim_n},
                      {"grid_T", sim_T},
                      {"seed", seed},
                      {"ys", out_dir + "/ys.csv"},
                      {"xs", out_dir + "/xs.csv"}});
    return 0;
  }

  if (estimate->parsed()) {
    const auto paths = read_paths_csv(est_paths);
    const auto basis = ProjectionBasis::estimated(estimate_basis(paths, est_M));
    const auto est = fit_dm(paths, basis, est_m, est_K, est_sigma,
                            weight_rule_from_string(est_weight));
    std::filesystem::create_directories(out_dir);
    save_json(out_dir + "/basis.json", basis_to_json(basis));
    save_json(out_dir + "/estimate.json", estimate_to_json(est));
    print_record(json{{"command", "estimate"},
                      {"n", est.n},
                      {"m", est.m},
                      {"K", est.K},
                      {"coefficients", est.coeffs.size()},
                      {"basis", out_dir + "/basis.json"},
                      {"estimate", out_dir + "/estimate.json"}});
    return 0;
  }

  if (cv->parsed()) {
    const auto paths = read_paths_csv(cv_paths_file);
    const auto basis = ProjectionBasis::estimated(estimate_basis(paths, cv_M));
    std::filesystem::create_directories(out_dir);
    if (cv_dn) {
      std::vector<int> K_grid;
      for (int K = 1; K <= cv_K_max; ++K) K_grid.push_back(K);
      const auto report =
          select_dn(paths, basis, K_grid, cv_sigma, cv_ref_paths, rng.child(2));
      write_dn_cv_report_csv(out_dir + "/dn_cv.csv", report);
      print_record(json{{"command", "cv"},
                        {"estimator", "DN"},
                        {"chosen_K", report.chosen_K},
                        {"all_discarded", report.all_discarded},
                        {"report", out_dir + "/dn_cv.csv"}});
    } else {
      const auto report = select(paths, basis, CvGrid::practical(cv_m_max, cv_K_max),
                                 cv_sigma, weight_rule_from_string(cv_weight),
                                 cv_ref_paths, rng.child(2),
                                 fallback_policy_from_string(cv_fallback));
      write_cv_report_csv(out_dir + "/cv.csv", report);
      print_record(json{{"command", "cv"},
                        {"estimator", "DM"},
                        {"chosen_m", report.chosen_m},
                        {"chosen_K", report.chosen_K},
                        {"all_discarded", report.all_discarded},
                        {"report", out_dir + "/cv.csv"}});
    }
    return 0;
  }

  if (evaluate->parsed()) {
    const auto est = estimate_from_json(load_json(eval_estimate));
    const auto paths = read_paths_csv(eval_paths_file);
    const auto values =
        eval_dm_fallback_batch(est, paths, fallback_policy_from_string(eval_fallback));
    std::filesystem::create_directories(out_dir);
    std::ofstream out_csv(out_dir + "/evaluations.csv");
    out_csv << "id,value,used_m,used_K\n";
    for (std::size_t i = 0; i < values.size(); ++i)
      out_csv << i << "," << format_double(values[i].value) << "," << values[i].used_m
              << "," << values[i].used_K << "\n";
    json record{{"command", "evaluate"},
                {"points", values.size()},
                {"evaluations", out_dir + "/evaluations.csv"}};
    if (!eval_oracle_setting.empty()) {
      const ModelSpec model = ModelSpec::builtin(setting_from_string(eval_oracle_setting));
      const KnownSignalLaw law = SimModelLaw{model, paths.front().grid, eval_R};
      const auto truths = true_density_batch(law, paths, model.sigma, rng.child(3));
      std::vector<double> est_vals, truth_vals;
      std::ofstream oracle_csv(out_dir + "/oracle.csv");
      oracle_csv << "id,truth,mc_se\n";
      for (std::size_t i = 0; i < values.size(); ++i) {
        est_vals.push_back(values[i].value);
        truth_vals.push_back(truths[i].value);
        oracle_csv << i << "," << format_double(truths[i].value) << ","
                   << format_double(truths[i].std_error) << "\n";
      }
      const Quartiles q = squared_error_summary(est_vals, truth_vals);
      record["oracle"] = {{"setting", eval_oracle_setting},
                          {"R", eval_R},
                          {"median_se_x1e4", 1e4 * q.median},
                          {"q1_se_x1e4", 1e4 * q.q1},
                          {"q3_se_x1e4", 1e4 * q.q3},
                          {"file", out_dir + "/oracle.csv"}};
    }
    print_record(record);
    return 0;
  }

  if (classify->parsed()) {
    if (train->parsed()) {
      if (train_sigma1 >= 0.0 && train_sigma1 != train_sigma)
        throw invalid_parameter_error(
            "unequal class noise scales define densities against different "
            "reference measures; the comparison is not supported (use --sigma)");
      const auto paths = read_paths_csv(train_paths);
      const auto labels = read_labels_csv(train_labels);
      TrainConfig cfg;
      cfg.basis_M = train_M;
      cfg.grid = CvGrid::practical(train_m_max, train_K_max);
      cfg.weight = weight_rule_from_string(train_weight);
      cfg.cv_paths = train_ref_paths;
      const auto clf = train_classifier(paths, labels, train_sigma, cfg, rng.child(4));
      std::filesystem::create_directories(out_dir);
      save_json(out_dir + "/classifier.json", classifier_to_json(clf));
      print_record(json{{"command", "classify-train"},
                        {"pi0", clf.pi0},
                        {"pi1", clf.pi1},
                        {"class0_mK", {clf.est0.m, clf.est0.K}},
                        {"class1_mK", {clf.est1.m, clf.est1.K}},
                        {"classifier", out_dir + "/classifier.json"}});
    } else {
      const auto clf = classifier_from_json(load_json(pred_classifier));
      const auto paths = read_paths_csv(pred_paths);
      const auto preds = classify_batch(clf, paths);
      std::filesystem::create_directories(out_dir);
      std::ofstream out_csv(out_dir + "/predictions.csv");
      out_csv << "id,label,score\n";
      std::size_t ones = 0;
      for (std::size_t i = 0; i < preds.size(); ++i) {
        out_csv << i << "," << preds[i].label << "," << format_double(preds[i].score)
                << "\n";
        ones += preds[i].label;
      }
      print_record(json{{"command", "classify-predict"},
                        {"points", preds.size()},
                        {"labeled_1", ones},
                        {"predictions", out_dir + "/predictions.csv"}});
    }
    return 0;
  }

  if (reproduce->parsed()) {
    ExperimentConfig cfg = load_config_or_default(config_path);
    if (app.count("--seed") > 0) cfg.seed = seed;
    if (app.count("--out") > 0 || cfg.out_dir.empty()) cfg.out_dir = out_dir;
    if (threads > 0) cfg.threads = threads;
    const ResultTable table = run_reproduce(cfg);
    if (rep_write_config)
      save_json(cfg.out_dir + "/config.json", config_to_json(cfg));
    json rows = json::array();
    for (const auto& r : table.rows)
      rows.push_back(json{{"setting", r.setting},
                          {"method", r.method},
                          {"n", r.n},
                          {"median_se_x1e4", r.median_se_x1e4},
                          {"q1_se_x1e4", r.q1_se_x1e4},
                          {"q3_se_x1e4", r.q3_se_x1e4},
                          {"mean_seconds", r.mean_seconds}});
    print_record(json{{"command", "reproduce"},
                      {"replicates_requested", table.replicates_requested},
                      {"replicates_succeeded", table.replicates_succeeded},
                      {"out_dir", cfg.out_dir},
                      {"rows", rows}});
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const wdens::capacity_error& e) {
    std::cerr << "capacity error: " << e.what() << std::endl;
    return kExitCapacity;
  } catch (const wdens::numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << std::endl;
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << std::endl;
    return kExitValidation;
  } catch (const std::out_of_range& e) {
    std::cerr << "validation error: " << e.what() << std::endl;
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
}
