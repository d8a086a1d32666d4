#include "wdens/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace wdens {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

[[noreturn]] void file_error(const std::string& file, std::size_t line,
                             const std::string& field, const std::string& what) {
  std::ostringstream msg;
  msg << file << ":" << line << ": field '" << field << "': " << what;
  throw invalid_parameter_error(msg.str());
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& file, std::size_t line, const std::string& field,
                    const std::string& text) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    file_error(file, line, field, "not a number: '" + text + "'");
  }
}

std::ofstream open_out(const std::string& file) {
  std::ofstream out(file);
  if (!out) throw invalid_parameter_error("cannot open for writing: " + file);
  return out;
}

std::ifstream open_in(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw invalid_parameter_error("cannot open for reading: " + file);
  return in;
}

}  // namespace

void write_paths_csv(const std::string& file, const std::vector<GridPath>& paths) {
  auto out = open_out(file);
  if (paths.empty()) throw invalid_parameter_error("write_paths_csv: no paths");
  const Grid g = paths.front().grid;
  out << "id";
  for (int k = 0; k < g.T; ++k) out << ",t" << k;
  out << "\n";
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (!(paths[i].grid == g))
      throw invalid_parameter_error("write_paths_csv: mixed grids");
    out << i;
    for (int k = 0; k < g.T; ++k) out << "," << format_double(paths[i].values[k]);
    out << "\n";
  }
}

std::vector<GridPath> read_paths_csv(const std::string& file) {
  auto in = open_in(file);
  std::string line;
  if (!std::getline(in, line)) file_error(file, 1, "header", "empty file");
  const auto header = split_csv(line);
  if (header.size() < 3 || header[0] != "id" || header[1] != "t0")
    file_error(file, 1, "header", "expected 'id,t0,...,t{T-1}'");
  const int T = static_cast<int>(header.size()) - 1;
  for (int k = 0; k < T; ++k)
    if (header[k + 1] != "t" + std::to_string(k))
      file_error(file, 1, header[k + 1], "unexpected column name");
  const Grid grid(T);

  std::vector<GridPath> paths;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != header.size())
      file_error(file, line_no, "row", "expected " + std::to_string(header.size()) +
                                           " fields, got " + std::to_string(fields.size()));
    std::vector<double> v(T);
    for (int k = 0; k < T; ++k)
      v[k] = parse_double(file, line_no, "t" + std::to_string(k), fields[k + 1]);
    if (v[0] != 0.0) file_error(file, line_no, "t0", "paths must start at exactly 0");
    paths.emplace_back(grid, std::move(v));
  }
  if (paths.empty()) file_error(file, line_no, "row", "no paths in file");
  return paths;
}

void write_labels_csv(const std::string& file, const std::vector<int>& labels) {
  auto out = open_out(file);
  out << "id,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) out << i << "," << labels[i] << "\n";
}

std::vector<int> read_labels_csv(const std::string& file) {
  auto in = open_in(file);
  std::string line;
  if (!std::getline(in, line)) file_error(file, 1, "header", "empty file");
  if (split_csv(line) != std::vector<std::string>{"id", "label"})
    file_error(file, 1, "header", "expected 'id,label'");
  std::vector<int> labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 2) file_error(file, line_no, "row", "expected 2 fields");
    if (fields[1] != "0" && fields[1] != "1")
      file_error(file, line_no, "label", "labels must be 0 or 1");
    labels.push_back(fields[1] == "1" ? 1 : 0);
  }
  return labels;
}

nlohmann::json basis_to_json(const ProjectionBasis& basis) {
  nlohmann::json j;
  if (basis.is_sine()) {
    j["kind"] = "sine";
    j["M"] = basis.size();
    return j;
  }
  const EstimatedBasis* est = basis.estimated_rep();
  j["kind"] = "estimated";
  j["M"] = est->M;
  j["eigenvalues"] = est->eigenvalues;
  std::vector<std::vector<double>> rows(est->M);
  for (int ell = 0; ell < est->M; ++ell) {
    rows[ell].resize(est->M);
    for (int c = 0; c < est->M; ++c) rows[ell][c] = est->coeffs(ell, c);
  }
  j["coeffs"] = rows;
  return j;
}

ProjectionBasis basis_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const int M = j.at("M").get<int>();
  if (kind == "sine") return ProjectionBasis::sine(M);
  if (kind != "estimated")
    throw invalid_parameter_error("basis_from_json: unknown kind '" + kind + "'");
  EstimatedBasis est;
  est.M = M;
  est.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
  const auto rows = j.at("coeffs").get<std::vector<std::vector<double>>>();
  if (static_cast<int>(rows.size()) != M)
    throw invalid_parameter_error("basis_from_json: coefficient row count mismatch");
  est.coeffs.resize(M, M);
  for (int ell = 0; ell < M; ++ell) {
    if (static_cast<int>(rows[ell].size()) != M)
      throw invalid_parameter_error("basis_from_json: coefficient column count mismatch");
    for (int c = 0; c < M; ++c) est.coeffs(ell, c) = rows[ell][c];
  }
  return ProjectionBasis::estimated(std::move(est));
}

nlohmann::json estimate_to_json(const DensityEstimate& est) {
  nlohmann::json j;
  j["format"] = "wdens-estimate/1";
  j["m"] = est.m;
  j["K"] = est.K;
  j["sigma"] = est.sigma;
  j["weight"] = to_string(est.weight);
  j["n"] = est.n;
  j["grid_T"] = est.grid.T;
  j["basis"] = basis_to_json(est.basis);
  j["coeffs"] = est.coeffs;  // graded-lex order
  return j;
}

DensityEstimate estimate_from_json(const nlohmann::json& j) {
  if (j.at("format").get<std::string>() != "wdens-estimate/1")
    throw invalid_parameter_error("estimate_from_json: unsupported format");
  DensityEstimate est;
  est.m = j.at("m").get<int>();
  est.K = j.at("K").get<int>();
  est.sigma = j.at("sigma").get<double>();
  est.weight = weight_rule_from_string(j.at("weight").get<std::string>());
  est.n = j.at("n").get<int>();
  est.grid = Grid(j.at("grid_T").get<int>());
  est.basis = basis_from_json(j.at("basis"));
  est.indices = std::make_shared<IndexSet>(IndexSet::simplex(est.m, est.K));
  est.coeffs = j.at("coeffs").get<std::vector<double>>();
  if (est.coeffs.size() != est.indices->size())
    throw invalid_parameter_error("estimate_from_json: coefficient count mismatch");
  return est;
}

nlohmann::json dn_estimate_to_json(const DnEstimate& est) {
  nlohmann::json j;
  j["format"] = "wdens-dn-estimate/1";
  j["K"] = est.K;
  j["sigma"] = est.sigma;
  j["n"] = est.n;
  j["grid_T"] = est.grid.T;
  j["basis"] = basis_to_json(est.basis);
  j["coeffs"] = est.coeffs;
  return j;
}

DnEstimate dn_estimate_from_json(const nlohmann::json& j) {
  if (j.at("format").get<std::string>() != "wdens-dn-estimate/1")
    throw invalid_parameter_error("dn_estimate_from_json: unsupported format");
  DnEstimate est;
  est.K = j.at("K").get<int>();
  est.sigma = j.at("sigma").get<double>();
  est.n = j.at("n").get<int>();
  est.grid = Grid(j.at("grid_T").get<int>());
  est.basis = basis_from_json(j.at("basis"));
  est.indices = std::make_shared<IndexSet>(IndexSet::dn_box(est.K));
  est.coeffs = j.at("coeffs").get<std::vector<double>>();
  if (est.coeffs.size() != est.indices->size())
    throw invalid_parameter_error("dn_estimate_from_json: coefficient count mismatch");
  return est;
}

nlohmann::json classifier_to_json(const TrainedClassifier& clf) {
  nlohmann::json j;
  j["format"] = "wdens-classifier/1";
  j["pi0"] = clf.pi0;
  j["pi1"] = clf.pi1;
  j["sigma"] = clf.sigma;
  j["est0"] = estimate_to_json(clf.est0);
  j["est1"] = estimate_to_json(clf.est1);
  return j;
}

TrainedClassifier classifier_from_json(const nlohmann::json& j) {
  if (j.at("format").get<std::string>() != "wdens-classifier/1")
    throw invalid_parameter_error("classifier_from_json: unsupported format");
  TrainedClassifier clf;
  clf.pi0 = j.at("pi0").get<double>();
  clf.pi1 = j.at("pi1").get<double>();
  clf.sigma = j.at("sigma").get<double>();
  clf.est0 = estimate_from_json(j.at("est0"));
  clf.est1 = estimate_from_json(j.at("est1"));
  return clf;
}

void save_json(const std::string& file, const nlohmann::json& j) {
  auto out = open_out(file);
  out << j.dump(2) << "\n";
}

nlohmann::json load_json(const std::string& file) {
  auto in = open_in(file);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw invalid_parameter_error(file + ": " + e.what());
  }
}

void write_cv_report_csv(const std::string& file, const CvReport& report) {
  auto out = open_out(file);
  out << "m,K,cv,frac_neg_loo,frac_neg_eval,discarded,local_min,chosen\n";
  for (const auto& p : report.pairs) {
    const bool chosen =
        !report.all_discarded && p.m == report.chosen_m && p.K == report.chosen_K;
    out << p.m << "," << p.K << "," << format_double(p.cv) << ","
        << format_double(p.frac_neg_loo) << "," << format_double(p.frac_neg_eval) << ","
        << (p.discarded ? 1 : 0) << "," << (p.local_min ? 1 : 0) << "," << (chosen ? 1 : 0)
        << "\n";
  }
}

void write_dn_cv_report_csv(const std::string& file, const DnCvReport& report) {
  auto out = open_out(file);
  out << "K,cv,frac_neg_loo,frac_neg_eval,discarded,local_min,chosen\n";
  for (const auto& p : report.pairs) {
    const bool chosen = !report.all_discarded && p.K == report.chosen_K;
    out << p.K << "," << format_double(p.cv) << "," << format_double(p.frac_neg_loo) << ","
        << format_double(p.frac_neg_eval) << "," << (p.discarded ? 1 : 0) << ","
        << (p.local_min ? 1 : 0) << "," << (chosen ? 1 : 0) << "\n";
  }
}

std::string to_string(WeightRule rule) {
  return rule == WeightRule::Hard ? "hard" : "soft";
}

WeightRule weight_rule_from_string(const std::string& name) {
  if (name == "hard") return WeightRule::Hard;
  if (name == "soft") return WeightRule::SoftLinear;
  throw invalid_parameter_error("unknown weight rule: " + name);
}

std::string to_string(FallbackPolicy policy) {
  return policy == FallbackPolicy::JointDecrement ? "joint" : "alternate";
}

FallbackPolicy fallback_policy_from_string(const std::string& name) {
  if (name == "joint") return FallbackPolicy::JointDecrement;
  if (name == "alternate") return FallbackPolicy::AlternateDecrement;
  throw invalid_parameter_error("unknown fallback policy: " + name);
}

}  // namespace wdens
