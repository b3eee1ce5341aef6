#include "embgeo/explain.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "embgeo/error.hpp"

namespace embgeo {

namespace {

void check_dim(const IcaModel& model, std::size_t dim) {
  if (dim >= model.d_ica) {
    throw Error(ErrorCode::IndexOutOfRange, "component " + std::to_string(dim) +
                                                " out of range for d_ica=" +
                                                std::to_string(model.d_ica));
  }
}

}  // namespace

WordExplanation rank_words(const IcaModel& model, const EmbeddingMatrix& words,
                           const Vocabulary& vocab, std::size_t dim, std::size_t n_top) {
  if (vocab.size() != words.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "vocabulary has " + std::to_string(vocab.size()) +
                                                  " words but the word matrix has " +
                                                  std::to_string(words.rows()) + " rows");
  }
  check_dim(model, dim);
  const RowMatrix projected = transform(model, words.data());
  const Eigen::VectorXd value = projected.col(static_cast<Eigen::Index>(dim));

  const std::size_t n = vocab.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto at = [&](std::size_t i) { return value(static_cast<Eigen::Index>(i)); };
  const std::size_t take = std::min(n_top, n);

  WordExplanation e;
  e.dim = dim;
  auto desc = order;
  std::partial_sort(desc.begin(), desc.begin() + static_cast<std::ptrdiff_t>(take), desc.end(),
                    [&](std::size_t a, std::size_t b) { return at(a) != at(b) ? at(a) > at(b) : a < b; });
  for (std::size_t i = 0; i < take; ++i) e.top.emplace_back(vocab.words[desc[i]], at(desc[i]));

  auto asc = order;
  std::partial_sort(asc.begin(), asc.begin() + static_cast<std::ptrdiff_t>(take), asc.end(),
                    [&](std::size_t a, std::size_t b) { return at(a) != at(b) ? at(a) < at(b) : a < b; });
  for (std::size_t i = 0; i < take; ++i) e.bottom.emplace_back(vocab.words[asc[i]], at(asc[i]));
  return e;
}

std::string render_explanation(const WordExplanation& e) {
  std::size_t width = 3;
  for (const auto& [w, v] : e.top) width = std::max(width, w.size());
  std::ostringstream out;
  out << "component " << e.dim << "\n";
  out << std::left << std::setw(static_cast<int>(width + 12)) << "top" << "bottom\n";
  const std::size_t rows = std::max(e.top.size(), e.bottom.size());
  for (std::size_t i = 0; i < rows; ++i) {
    std::ostringstream left;
    if (i < e.top.size()) {
      left << std::left << std::setw(static_cast<int>(width)) << e.top[i].first << " " << std::fixed
           << std::setprecision(4) << std::setw(10) << std::right << e.top[i].second;
    }
    out << std::left << std::setw(static_cast<int>(width + 12)) << left.str();
    if (i < e.bottom.size()) {
      out << e.bottom[i].first << " " << std::fixed << std::setprecision(4) << e.bottom[i].second;
    }
    out << "\n";
  }
  return out.str();
}

UnmixingRow unmixing_row(const IcaModel& model, std::size_t dim) {
  check_dim(model, dim);
  UnmixingRow row;
  row.dim = dim;
  const auto c = model.composed.row(static_cast<Eigen::Index>(dim));
  row.weights.assign(c.data(), c.data() + c.size());
  row.ranked_dims.resize(row.weights.size());
  std::iota(row.ranked_dims.begin(), row.ranked_dims.end(), std::size_t{0});
  std::stable_sort(row.ranked_dims.begin(), row.ranked_dims.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(row.weights[a]) > std::abs(row.weights[b]);
  });
  return row;
}

}  // namespace embgeo
