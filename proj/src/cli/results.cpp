#include "cli/results.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>

#include "embgeo/embp.hpp"
#include "embgeo/error.hpp"

namespace embgeo::cli {

namespace fs = std::filesystem;

std::string encode_component(const std::string& name) {
  if (name.empty()) return "%00";
  std::string out;
  for (unsigned char c : name) {
    const bool safe = std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == ':' || c == '+' ||
                      c == '@' || c >= 0x80;
    if (safe && !(out.empty() && c == '.')) {
      out.push_back(static_cast<char>(c));
    } else {
      char buf[4];
      std::snprintf(buf, sizeof buf, "%%%02X", c);
      out += buf;
    }
  }
  return out;
}

std::string decode_component(const std::string& component) {
  if (component == "%00") return "";
  std::string out;
  for (std::size_t i = 0; i < component.size(); ++i) {
    if (component[i] == '%' && i + 2 < component.size()) {
      out.push_back(static_cast<char>(std::stoi(component.substr(i + 1, 2), nullptr, 16)));
      i += 2;
    } else {
      out.push_back(component[i]);
    }
  }
  return out;
}

fs::path run_directory(const fs::path& root, const PairLabels& labels) {
  return root / encode_component(labels.dataset_name) / encode_component(labels.model_name);
}

std::vector<StoredRun> scan_runs(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw Error(ErrorCode::FileNotFound, "results directory not found: " + root.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json" &&
        entry.path().filename().string().front() != '.') {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::vector<StoredRun> runs;
  for (const auto& file : files) {
    json j;
    try {
      j = json::parse(read_file(file));
    } catch (const json::exception&) {
      continue;
    }
    if (!j.is_object() || j.value("record", "") != "run_manifest") continue;
    const auto rel = fs::relative(file, root);
    std::vector<std::string> parts;
    for (const auto& part : rel) parts.push_back(part.string());
    if (parts.size() != 3) {
      throw Error(ErrorCode::FormatError,
                  "manifest outside the <dataset>/<model>/ layout: " + file.string());
    }
    StoredRun run;
    run.path = file;
    run.dataset = decode_component(parts[0]);
    run.model = decode_component(parts[1]);
    run.manifest = manifest_from_json(j);
    run.summary = j.value("summary", json::object());
    runs.push_back(std::move(run));
  }
  return runs;
}

void write_manifest(const fs::path& path, const RunManifest& manifest, const json& summary) {
  json j = to_json(manifest);
  j["summary"] = summary;
  atomic_write(path, dump(j));
}

std::int64_t now_utc_seconds() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace embgeo::cli
