#pragma once

// Results directory layout: <root>/<dataset>/<model>/<probe>-<params>.json.
// Dataset and model names are percent-encoded so that any label (including
// ones containing '/') maps to exactly one path component.

#include <filesystem>
#include <string>
#include <vector>

#include "embgeo/serialize.hpp"
#include "embgeo/types.hpp"

namespace embgeo::cli {

std::string encode_component(const std::string& name);
std::string decode_component(const std::string& component);

std::filesystem::path run_directory(const std::filesystem::path& root, const PairLabels& labels);

struct StoredRun {
  std::filesystem::path path;
  std::string dataset;  // derived from the path
  std::string model;    // derived from the path
  RunManifest manifest;
  json summary;
};

/// Every run manifest below `root`, in lexicographic path order. Other JSON
/// documents (profiles, model metadata, payloads) are skipped.
std::vector<StoredRun> scan_runs(const std::filesystem::path& root);

/// Writes the manifest (with its summary block) for one probe run.
void write_manifest(const std::filesystem::path& path, const RunManifest& manifest, const json& summary);

std::int64_t now_utc_seconds();

}  // namespace embgeo::cli
