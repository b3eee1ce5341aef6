#pragma once

// JSON / CSV exports for every result type, and the fitted-model sidecar.
// Every JSON document carries "schema_version": 1.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "embgeo/explain.hpp"
#include "embgeo/ica.hpp"
#include "embgeo/knn.hpp"
#include "embgeo/stability.hpp"
#include "embgeo/stats.hpp"
#include "embgeo/synth.hpp"
#include "embgeo/types.hpp"

namespace embgeo {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

json to_json(const RetentionResult& r);
json to_json(const PeakProfile& p);
json to_json(const CorrelationResult& c);
json to_json(const StabilityReport& s);
json to_json(const WordExplanation& e);
json to_json(const UnmixingRow& u);
json to_json(const GroundTruth& g);
json to_json(const RunManifest& m);

/// Parses a manifest document; FormatError when required fields are absent.
RunManifest manifest_from_json(const json& j);

/// `dim,mean_abs_diff,std_abs_diff` rows.
std::string profile_csv(const PeakProfile& p);
/// `emb_dim,weight` rows.
std::string unmixing_csv(const UnmixingRow& u);

/// Writes `<stem>.json` (metadata) and `<stem>.embp` (f64 rows: mean, then
/// the projection rows, then the unmixing rows zero-padded to width d).
void save_model(const std::filesystem::path& stem, const IcaModel& model);
IcaModel load_model(const std::filesystem::path& stem);

/// Serialises with two-space indentation and a trailing newline.
std::string dump(const json& j);

}  // namespace embgeo
