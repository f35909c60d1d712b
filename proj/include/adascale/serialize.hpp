// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "adascale/eval.hpp"
#include "adascale/losses.hpp"
#include "adascale/oracle.hpp"
#include "adascale/packing.hpp"
#include "adascale/pipeline.hpp"
#include "adascale/scene.hpp"

namespace adascale {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1.0";
inline constexpr int kSchemaMajor = 1;

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
void append_text(const std::filesystem::path& path, const std::string& text);

/// Parses and checks schema_version. Syntax errors become InputError with
/// the byte offset; a missing version or an unknown major is InputError.
Json parse_document(const std::string& text, const std::string& source);
Json load_document(const std::filesystem::path& path);

/// Two-space indented, trailing newline.
std::string dump(const Json& j);

Json scene_to_json(const SceneSpec& scene);
SceneSpec scene_from_json(const Json& j, const std::string& source);

struct RunConfig {
  PipelineConfig pipeline;
  OracleConfig oracle;
};

/// Both sections optional; absent fields keep their defaults. Unknown
/// fields and wrong types raise ConfigError naming file and field.
RunConfig config_from_json(const Json& j, const std::string& source);
Json config_to_json(const RunConfig& cfg);

Json detections_to_json(const std::vector<Detection>& dets);
std::vector<Detection> detections_from_json(const Json& j, const std::string& source, std::vector<int>* ids = nullptr);

Json stats_to_json(const PipelineStats& stats);
PipelineStats stats_from_json(const Json& j, const std::string& source);

Json items_to_json(const std::vector<PackItem>& items);
std::vector<PackItem> items_from_json(const Json& j, const std::string& source);
Json layouts_to_json(const std::vector<KnapsackLayout>& layouts, int gutter);
std::vector<KnapsackLayout> layouts_from_json(const Json& j, const std::string& source);

/// `det_ids` / `gt_ids` translate positional match ids into file ids.
Json report_to_json(const EvalReport& report, const std::vector<int>& det_ids, const std::vector<int>& gt_ids);
inline constexpr const char* kCsvHeader = "method,R,P,F,pixels_pass1,pixels_pass2,pixels_total,reduction";
/// One table row: R, P, F as percentages and pixel totals.
std::string report_csv_row(const std::string& method, const EvalReport& report);
/// Header plus one row.
std::string report_csv(const std::string& method, const EvalReport& report);

Json loss_to_json(const LossBreakdown& loss);

}  // namespace adascale
