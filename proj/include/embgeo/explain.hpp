#pragma once

#include <string>
#include <utility>
#include <vector>

#include "embgeo/ica.hpp"
#include "embgeo/ingest.hpp"
#include "embgeo/types.hpp"

namespace embgeo {

struct WordExplanation {
  std::size_t dim = 0;
  std::vector<std::pair<std::string, double>> top;     // descending value
  std::vector<std::pair<std::string, double>> bottom;  // ascending value
};

/// Projects every word through the model and returns the `n_top` words with
/// the highest and lowest values on component `dim`. Ties go to the lower
/// vocabulary index. Errors: DimensionMismatch, IndexOutOfRange.
WordExplanation rank_words(const IcaModel& model, const EmbeddingMatrix& words,
                           const Vocabulary& vocab, std::size_t dim, std::size_t n_top = 10);

/// Two-column plain-text rendering: top words left, bottom words right.
std::string render_explanation(const WordExplanation& e);

struct UnmixingRow {
  std::size_t dim = 0;
  std::vector<double> weights;          // composed row C[dim], one per embedding dim
  std::vector<std::size_t> ranked_dims;  // embedding dims by descending |weight|
};

/// Errors: IndexOutOfRange.
UnmixingRow unmixing_row(const IcaModel& model, std::size_t dim);

}  // namespace embgeo
