#include "wdens/experiment.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "wdens/classify.hpp"
#include "wdens/io.hpp"
#include "wdens/parallel.hpp"
#include "wdens/projection.hpp"
#include "wdens/simulate.hpp"

namespace wdens {

void ExperimentConfig::validate() const {
  if (n_values.empty() || settings.empty())
    throw invalid_parameter_error("config: need at least one n and one setting");
  for (int n : n_values)
    if (n < 2) throw invalid_parameter_error("config: n must be >= 2");
  if (B < 1) throw invalid_parameter_error("config: B must be >= 1");
  if (n_eval < 1) throw invalid_parameter_error("config: n_eval must be >= 1");
  if (oracle_R < 1) throw invalid_parameter_error("config: oracle_R must be >= 1");
  if (grid_T < 2) throw invalid_parameter_error("config: grid_T must be >= 2");
  if (basis_M < 1) throw invalid_parameter_error("config: basis_M must be >= 1");
  if (cv_m_max < 1 || cv_K_max < 1)
    throw invalid_parameter_error("config: cv grid bounds must be >= 1");
  if (cv_m_max > basis_M)
    throw invalid_parameter_error("config: cv_m_max cannot exceed basis_M");
  if (cv_paths < 1) throw invalid_parameter_error("config: cv_paths must be >= 1");
  if (dn_K_grid.empty())
    throw invalid_parameter_error("config: dn_K_grid must be non-empty");
  for (int K : dn_K_grid) {
    if (K < 0) throw invalid_parameter_error("config: dn_K_grid entries must be >= 0");
    if (K > basis_M)
      throw invalid_parameter_error("config: dn_K_grid entries cannot exceed basis_M");
  }
  for (Setting s : settings)
    if (s == Setting::Custom) custom_model.validate();
}

ModelSpec ExperimentConfig::resolve_model(Setting s) const {
  return s == Setting::Custom ? custom_model : ModelSpec::builtin(s);
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["format"] = "wdens-config/1";
  j["run"] = {{"n_values", c.n_values}, {"B", c.B},      {"n_eval", c.n_eval},
              {"seed", c.seed},         {"out_dir", c.out_dir}, {"threads", c.threads}};
  std::vector<std::string> names;
  for (Setting s : c.settings) names.push_back(to_string(s));
  j["model"] = {{"settings", names},
                {"grid_T", c.grid_T},
                {"custom",
                 {{"J", c.custom_model.J},
                  {"sigma", c.custom_model.sigma},
                  {"lambda", c.custom_model.lambda},
                  {"phi_family", to_string(c.custom_model.phi_family)}}}};
  j["oracle"] = {{"R", c.oracle_R}};
  j["basis"] = {{"M", c.basis_M}};
  j["cv"] = {{"m_max", c.cv_m_max},
             {"K_max", c.cv_K_max},
             {"paths", c.cv_paths},
             {"dn_K_grid", c.dn_K_grid}};
  j["density"] = {{"weight", to_string(c.weight)},
                  {"fallback", to_string(c.fallback)},
                  {"index_cap", c.index_cap}};
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (j.at("format").get<std::string>() != "wdens-config/1")
    throw invalid_parameter_error("config: unsupported format");
  ExperimentConfig c;
  const auto& run = j.at("run");
  c.n_values = run.at("n_values").get<std::vector<int>>();
  c.B = run.at("B").get<int>();
  c.n_eval = run.at("n_eval").get<int>();
  c.seed = run.at("seed").get<std::uint64_t>();
  c.out_dir = run.at("out_dir").get<std::string>();
  c.threads = run.value("threads", 0);

  const auto& model = j.at("model");
  c.settings.clear();
  for (const auto& name : model.at("settings"))
    c.settings.push_back(setting_from_string(name.get<std::string>()));
  c.grid_T = model.at("grid_T").get<int>();
  if (model.contains("custom")) {
    const auto& cm = model.at("custom");
    c.custom_model.setting = Setting::Custom;
    c.custom_model.J = cm.at("J").get<int>();
    c.custom_model.sigma = cm.at("sigma").get<double>();
    c.custom_model.lambda = cm.at("lambda").get<std::vector<double>>();
    c.custom_model.phi_family = phi_family_from_string(cm.at("phi_family").get<std::string>());
  }

  c.oracle_R = j.at("oracle").at("R").get<int>();
  c.basis_M = j.at("basis").at("M").get<int>();
  const auto& cv = j.at("cv");
  c.cv_m_max = cv.at("m_max").get<int>();
  c.cv_K_max = cv.at("K_max").get<int>();
  c.cv_paths = cv.at("paths").get<std::size_t>();
  c.dn_K_grid = cv.at("dn_K_grid").get<std::vector<int>>();
  const auto& density = j.at("density");
  c.weight = weight_rule_from_string(density.at("weight").get<std::string>());
  c.fallback = fallback_policy_from_string(density.at("fallback").get<std::string>());
  c.index_cap = density.at("index_cap").get<std::uint64_t>();
  return c;
}

namespace {

struct ReplicateOutput {
  bool ok = false;
  std::string error;
  int dm_m = 0, dm_K = 0, dn_K = 0;
  std::vector<double> truths, truth_ses, dm_vals, dn_vals;
  std::vector<int> dm_used_m, dm_used_K, dn_used_K;
  double seconds = 0.0;
};

ReplicateOutput run_replicate(const ExperimentConfig& cfg, const ModelSpec& model, int n,
                              const RngFactory& rep_rng) {
  const auto start = std::chrono::steady_clock::now();
  ReplicateOutput out;

  const Grid grid(cfg.grid_T);
  const Sample sample = simulate_sample(model, n, grid, rep_rng.child(1));
  const ProjectionBasis basis =
      ProjectionBasis::estimated(estimate_basis(sample.y, cfg.basis_M));

  const RngFactory cv_rng = rep_rng.child(2);
  const CvGrid cv_grid = CvGrid::practical(cfg.cv_m_max, cfg.cv_K_max);
  const CvReport dm_report = select(sample.y, basis, cv_grid, model.sigma, cfg.weight,
                                    cfg.cv_paths, cv_rng, cfg.fallback, cfg.index_cap);
  const DnCvReport dn_report = select_dn(sample.y, basis, cfg.dn_K_grid, model.sigma,
                                         cfg.cv_paths, cv_rng, cfg.index_cap);
  out.dm_m = dm_report.chosen_m;
  out.dm_K = dm_report.chosen_K;
  out.dn_K = dn_report.chosen_K;

  const DensityEstimate dm = fit_dm(sample.y, basis, out.dm_m, out.dm_K, model.sigma,
                                    cfg.weight, cfg.index_cap);
  const DnEstimate dn = fit_dn(sample.y, basis, out.dn_K, model.sigma, cfg.index_cap);

  const auto eval_paths =
      draw_reference_paths(grid, model.sigma, cfg.n_eval, rep_rng.child(3));
  const KnownSignalLaw law = SimModelLaw{model, grid, cfg.oracle_R};
  const auto truths = true_density_batch(law, eval_paths, model.sigma, rep_rng.child(4));
  const auto dm_vals = eval_dm_fallback_batch(dm, eval_paths, cfg.fallback);
  const auto dn_vals = eval_dn_fallback_batch(dn, eval_paths);

  out.truths.reserve(eval_paths.size());
  for (std::size_t i = 0; i < eval_paths.size(); ++i) {
    out.truths.push_back(truths[i].value);
    out.truth_ses.push_back(truths[i].std_error);
    out.dm_vals.push_back(dm_vals[i].value);
    out.dm_used_m.push_back(dm_vals[i].used_m);
    out.dm_used_K.push_back(dm_vals[i].used_K);
    out.dn_vals.push_back(dn_vals[i].value);
    out.dn_used_K.push_back(dn_vals[i].used_K);
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.ok = true;
  return out;
}

std::string histogram_string(const std::map<std::string, int>& counts) {
  std::ostringstream s;
  bool first = true;
  for (const auto& [key, count] : counts) {
    if (!first) s << ";";
    s << key << ":" << count;
    first = false;
  }
  return s.str();
}

}  // namespace

ResultTable run_reproduce(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.threads > 0) set_default_thread_count(cfg.threads);
  std::filesystem::create_directories(cfg.out_dir);

  std::ofstream details(cfg.out_dir + "/details.csv");
  details << "setting,n,replicate,point,truth,truth_mc_se,dm,dm_used_m,dm_used_K,dn,dn_used_K\n";
  std::ofstream replicates(cfg.out_dir + "/replicates.csv");
  replicates << "setting,n,replicate,status,dm_m,dm_K,dn_K,error\n";
  std::ofstream timing(cfg.out_dir + "/timing.csv");
  timing << "setting,n,replicate,seconds\n";

  ResultTable table;
  const RngFactory master(cfg.seed);

  for (std::size_t si = 0; si < cfg.settings.size(); ++si) {
    const ModelSpec model = cfg.resolve_model(cfg.settings[si]);
    const std::string sname = to_string(cfg.settings[si]);
    for (std::size_t ni = 0; ni < cfg.n_values.size(); ++ni) {
      const int n = cfg.n_values[ni];
      std::vector<double> dm_se, dn_se;
      std::map<std::string, int> dm_chosen, dn_chosen;
      double seconds_sum = 0.0;
      int succeeded = 0;

      for (int b = 0; b < cfg.B; ++b) {
        table.replicates_requested++;
        const RngFactory rep_rng = master.child(si).child(ni).child(b);
        ReplicateOutput rep;
        try {
          rep = run_replicate(cfg, model, n, rep_rng);
        } catch (const std::exception& e) {
          rep.ok = false;
          rep.error = e.what();
        }
        if (!rep.ok) {
          replicates << sname << "," << n << "," << b << ",failed,,,,\"" << rep.error
                     << "\"\n";
          continue;
        }
        ++succeeded;
        table.replicates_succeeded++;
        seconds_sum += rep.seconds;
        replicates << sname << "," << n << "," << b << ",ok," << rep.dm_m << "," << rep.dm_K
                   << "," << rep.dn_K << ",\n";
        timing << sname << "," << n << "," << b << "," << format_double(rep.seconds) << "\n";
        {
          std::ostringstream key;
          key << "(" << rep.dm_m << "," << rep.dm_K << ")";
          dm_chosen[key.str()]++;
          dn_chosen[std::to_string(rep.dn_K)]++;
        }
        for (std::size_t p = 0; p < rep.truths.size(); ++p) {
          const double dm_d = rep.dm_vals[p] - rep.truths[p];
          const double dn_d = rep.dn_vals[p] - rep.truths[p];
          dm_se.push_back(dm_d * dm_d);
          dn_se.push_back(dn_d * dn_d);
          details << sname << "," << n << "," << b << "," << p << ","
                  << format_double(rep.truths[p]) << "," << format_double(rep.truth_ses[p])
                  << "," << format_double(rep.dm_vals[p]) << "," << rep.dm_used_m[p] << ","
                  << rep.dm_used_K[p] << "," << format_double(rep.dn_vals[p]) << ","
                  << rep.dn_used_K[p] << "\n";
        }
      }

      if (succeeded * 5 < cfg.B * 4) {
        std::ostringstream msg;
        msg << "run_reproduce: only " << succeeded << "/" << cfg.B
            << " replicates succeeded for setting " << sname << ", n=" << n
            << " (at least 80% required)";
        throw std::runtime_error(msg.str());
      }

      const auto make_row = [&](const std::string& method, const std::vector<double>& se,
                                const std::map<std::string, int>& chosen) {
        ResultRow row;
        row.setting = sname;
        row.method = method;
        row.n = n;
        const Quartiles q = {quantile(se, 0.5), quantile(se, 0.25), quantile(se, 0.75)};
        row.median_se_x1e4 = 1e4 * q.median;
        row.q1_se_x1e4 = 1e4 * q.q1;
        row.q3_se_x1e4 = 1e4 * q.q3;
        row.n_se = se.size();
        for (const auto& [key, count] : chosen) row.chosen.emplace_back(key, count);
        row.mean_seconds = succeeded > 0 ? seconds_sum / succeeded : 0.0;
        return row;
      };
      table.rows.push_back(make_row("DM", dm_se, dm_chosen));
      table.rows.push_back(make_row("DN", dn_se, dn_chosen));
    }
  }

  std::ofstream results(cfg.out_dir + "/results.csv");
  results << "setting,method,n,median_se_x1e4,q1_se_x1e4,q3_se_x1e4,n_se,chosen_histogram\n";
  for (const auto& row : table.rows) {
    std::map<std::string, int> chosen(row.chosen.begin(), row.chosen.end());
    results << row.setting << "," << row.method << "," << row.n << ","
            << format_double(row.median_se_x1e4) << "," << format_double(row.q1_se_x1e4)
            << "," << format_double(row.q3_se_x1e4) << "," << row.n_se << ","
            << histogram_string(chosen) << "\n";
  }
  return table;
}

}  // namespace wdens
