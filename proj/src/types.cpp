#include "embgeo/types.hpp"

#include <cmath>
#include <unordered_set>

#include "embgeo/error.hpp"

namespace embgeo {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::PairCountMismatch: return "PairCountMismatch";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::ZeroNormRow: return "ZeroNormRow";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateKey: return "DuplicateKey";
    case ErrorCode::EmptyLine: return "EmptyLine";
    case ErrorCode::Utf8Error: return "Utf8Error";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::DegenerateProfile: return "DegenerateProfile";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::ZeroMean: return "ZeroMean";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ConstantInput: return "ConstantInput";
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::JoinError: return "JoinError";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
  }
  return "Unknown";
}

EmbeddingMatrix::EmbeddingMatrix(RowMatrix data, std::vector<std::string> ids)
    : data_(std::move(data)), ids_(std::move(ids)) {
  const auto n = static_cast<std::size_t>(data_.rows());
  if (n < 1) throw Error(ErrorCode::InvalidParameter, "embedding matrix needs at least one row");
  if (data_.cols() < 2) throw Error(ErrorCode::InvalidParameter, "embedding matrix needs at least 2 dims");

  for (Eigen::Index i = 0; i < data_.rows(); ++i) {
    double sq = 0.0;
    for (Eigen::Index j = 0; j < data_.cols(); ++j) {
      const double v = data_(i, j);
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::NonFiniteValue,
                    "non-finite value at row " + std::to_string(i) + ", col " + std::to_string(j),
                    static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      }
      sq += v * v;
    }
    if (sq == 0.0) {
      throw Error(ErrorCode::ZeroNormRow, "zero-norm row " + std::to_string(i),
                  static_cast<std::size_t>(i));
    }
  }

  if (ids_.empty()) {
    ids_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) ids_.push_back(std::to_string(i));
  } else if (ids_.size() != n) {
    throw Error(ErrorCode::LengthMismatch, "got " + std::to_string(ids_.size()) + " ids for " +
                                               std::to_string(n) + " rows");
  }
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!seen.insert(ids_[i]).second) {
      throw Error(ErrorCode::DuplicateId, "duplicate id '" + ids_[i] + "'", i);
    }
  }
}

PairedEmbeddings PairedEmbeddings::swapped() const {
  return PairedEmbeddings(targets_, queries_, labels_);
}

PairedEmbeddings validate_paired(EmbeddingMatrix queries, EmbeddingMatrix targets,
                                 PairLabels labels) {
  if (queries.dims() != targets.dims()) {
    throw Error(ErrorCode::DimensionMismatch, "query dims " + std::to_string(queries.dims()) +
                                                  " != target dims " +
                                                  std::to_string(targets.dims()));
  }
  if (queries.rows() != targets.rows()) {
    throw Error(ErrorCode::PairCountMismatch, "query rows " + std::to_string(queries.rows()) +
                                                  " != target rows " +
                                                  std::to_string(targets.rows()));
  }
  return PairedEmbeddings(std::move(queries), std::move(targets), std::move(labels));
}

PairedEmbeddings validate_paired(const RowMatrix& queries, const RowMatrix& targets,
                                 PairLabels labels) {
  return validate_paired(EmbeddingMatrix(queries), EmbeddingMatrix(targets), std::move(labels));
}

std::string to_string(ProbeKind kind) {
  switch (kind) {
    case ProbeKind::Retention: return "retention";
    case ProbeKind::Ica: return "ica";
    case ProbeKind::Shuffle: return "shuffle";
    case ProbeKind::Stability: return "stability";
  }
  return "unknown";
}

ProbeKind probe_kind_from_string(const std::string& s) {
  if (s == "retention") return ProbeKind::Retention;
  if (s == "ica") return ProbeKind::Ica;
  if (s == "shuffle") return ProbeKind::Shuffle;
  if (s == "stability") return ProbeKind::Stability;
  throw Error(ErrorCode::InvalidParameter, "unknown probe kind '" + s + "'");
}

void RunManifest::validate() const {
  std::vector<std::string> required;
  switch (probe) {
    case ProbeKind::Retention: required = {"k", "metric"}; break;
    case ProbeKind::Ica: required = {"d_ica", "seed"}; break;
    case ProbeKind::Shuffle: required = {"d_ica", "seed", "shuffle_seed"}; break;
    case ProbeKind::Stability: required = {"d_ica", "seed", "restarts"}; break;
  }
  for (const auto& key : required) {
    if (!parameters.count(key)) {
      throw Error(ErrorCode::InvalidParameter,
                  "manifest for probe '" + to_string(probe) + "' is missing parameter '" + key + "'");
    }
  }
}

}  // namespace embgeo
