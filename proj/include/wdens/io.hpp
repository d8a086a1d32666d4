#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "wdens/classify.hpp"
#include "wdens/density.hpp"
#include "wdens/grid.hpp"
#include "wdens/selection.hpp"

namespace wdens {

/// Full-precision (17 significant digits) decimal rendering.
std::string format_double(double v);

/// Path files: header "id,t0,...,t{T-1}", one path per row, t0 values must be 0.
void write_paths_csv(const std::string& file, const std::vector<GridPath>& paths);
std::vector<GridPath> read_paths_csv(const std::string& file);

/// Label files: header "id,label", labels in {0,1}.
void write_labels_csv(const std::string& file, const std::vector<int>& labels);
std::vector<int> read_labels_csv(const std::string& file);

nlohmann::json basis_to_json(const ProjectionBasis& basis);
ProjectionBasis basis_from_json(const nlohmann::json& j);

nlohmann::json estimate_to_json(const DensityEstimate& est);
DensityEstimate estimate_from_json(const nlohmann::json& j);

nlohmann::json dn_estimate_to_json(const DnEstimate& est);
DnEstimate dn_estimate_from_json(const nlohmann::json& j);

nlohmann::json classifier_to_json(const TrainedClassifier& clf);
TrainedClassifier classifier_from_json(const nlohmann::json& j);

void save_json(const std::string& file, const nlohmann::json& j);
nlohmann::json load_json(const std::string& file);

void write_cv_report_csv(const std::string& file, const CvReport& report);
void write_dn_cv_report_csv(const std::string& file, const DnCvReport& report);

std::string to_string(WeightRule rule);
WeightRule weight_rule_from_string(const std::string& name);
std::string to_string(FallbackPolicy policy);
FallbackPolicy fallback_policy_from_string(const std::string& name);

}  // namespace wdens
