#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "embgeo/types.hpp"

namespace embgeo {

enum class EmbeddingFormat { Binary, Csv };

/// Picks Csv for a ".csv" extension, Binary otherwise.
EmbeddingFormat format_for_path(const std::filesystem::path& path);

/// Loads an EMBP file or an `id,v0,v1,...` CSV. CSV cells are parsed to f32
/// before widening so both formats agree on identical logical content.
EmbeddingMatrix load_embeddings(const std::filesystem::path& path, EmbeddingFormat format);
EmbeddingMatrix load_embeddings(const std::filesystem::path& path);

/// Parses CSV text directly (the loader is a thin wrapper around this).
EmbeddingMatrix parse_embeddings_csv(std::string_view text);

void write_embeddings(const std::filesystem::path& path, const EmbeddingMatrix& m);

struct ScoreEntry {
  std::string model;
  std::string dataset;
  double score = 0.0;
};

/// Benchmark scores keyed by (model, dataset). Values are kept as given;
/// both [0,1] and [0,100] scales are accepted.
class ScoreTable {
 public:
  void add(ScoreEntry entry);  // DuplicateKey on a repeated (model, dataset)
  std::optional<double> find(const std::string& model, const std::string& dataset) const;
  const std::vector<ScoreEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::vector<ScoreEntry> entries_;
};

/// CSV with header `model,dataset,score`.
ScoreTable load_scores(const std::filesystem::path& path);
ScoreTable parse_scores_csv(std::string_view text);

struct Vocabulary {
  std::vector<std::string> words;
  std::size_t size() const noexcept { return words.size(); }
};

/// One word per line; rejects blank lines (EmptyLine) and invalid UTF-8.
Vocabulary load_vocabulary(const std::filesystem::path& path);
Vocabulary parse_vocabulary(std::string_view text);

bool is_valid_utf8(std::string_view s);

}  // namespace embgeo
