#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cfadv/bounds.hpp"
#include "cfadv/counterfactuals.hpp"
#include "cfadv/data.hpp"
#include "cfadv/generative.hpp"
#include "cfadv/models.hpp"

namespace cfadv {

using json = nlohmann::json;

// Schema document: {"columns":[{"name":...,"kind":"numeric"|{"categorical":[...]}}],
//                   "label":..., "positive":...}
json schema_to_json(const FeatureSchema& schema);
FeatureSchema schema_from_json(const json& j);

// Model files carry version "v1", explicit layer shapes and row-major weights.
json model_to_json(const ScoringModel& model);
ScoringModel model_from_json(const json& j);

json autoencoder_to_json(const Autoencoder& ae);
Autoencoder autoencoder_from_json(const json& j);

json result_to_json(const GenerationResult& r);
GenerationResult result_from_json(const json& j);

// JSON-lines: one result object per line.
void write_results_jsonl(const std::vector<GenerationResult>& results, const std::string& path,
                         const std::string& header_comment = "");
std::vector<GenerationResult> read_results_jsonl(const std::string& path);

// records CSV: instance_id,pair,p,empirical,bound,violated,lambda,c,s,L,r_c,r_nae
// (NaN parameters are written as empty fields).
void write_bounds_csv(const std::vector<BoundRecord>& records, const std::string& path,
                      const std::string& header_comment = "");

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace cfadv
