#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace embgeo {

/// Dense row-major double matrix; one row per observation.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// N x d embedding rows with their text identifiers.
///
/// Construction validates: N >= 1, d >= 2, every value finite, no zero-norm
/// row, ids unique with one id per row. Instances are immutable afterwards.
class EmbeddingMatrix {
 public:
  /// Throws embgeo::Error on any violated invariant. Empty `ids` generates
  /// "0", "1", ... so callers with anonymous rows need not invent names.
  EmbeddingMatrix(RowMatrix data, std::vector<std::string> ids = {});

  std::size_t rows() const noexcept { return static_cast<std::size_t>(data_.rows()); }
  std::size_t dims() const noexcept { return static_cast<std::size_t>(data_.cols()); }
  const RowMatrix& data() const noexcept { return data_; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }

 private:
  RowMatrix data_;
  std::vector<std::string> ids_;
};

struct PairLabels {
  std::string dataset_name;
  std::string model_name;
  bool prompted = false;
};

/// Row i of `queries` is paired with row i of `targets`.
class PairedEmbeddings {
 public:
  const EmbeddingMatrix& queries() const noexcept { return queries_; }
  const EmbeddingMatrix& targets() const noexcept { return targets_; }
  const PairLabels& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return queries_.rows(); }
  std::size_t dims() const noexcept { return queries_.dims(); }

  /// Same pairs with the two sides exchanged.
  PairedEmbeddings swapped() const;

 private:
  PairedEmbeddings(EmbeddingMatrix q, EmbeddingMatrix t, PairLabels labels)
      : queries_(std::move(q)), targets_(std::move(t)), labels_(std::move(labels)) {}

  friend PairedEmbeddings validate_paired(EmbeddingMatrix, EmbeddingMatrix, PairLabels);

  EmbeddingMatrix queries_;
  EmbeddingMatrix targets_;
  PairLabels labels_;
};

/// Checks that the two sides can be paired row-by-row.
/// Errors: DimensionMismatch, PairCountMismatch.
PairedEmbeddings validate_paired(EmbeddingMatrix queries, EmbeddingMatrix targets,
                                 PairLabels labels = {});

/// Builds both matrices from raw data and pairs them. Reports NonFiniteValue
/// and ZeroNormRow with their coordinates before any pairing checks.
PairedEmbeddings validate_paired(const RowMatrix& queries, const RowMatrix& targets,
                                 PairLabels labels = {});

enum class ProbeKind { Retention, Ica, Shuffle, Stability };

std::string to_string(ProbeKind kind);
ProbeKind probe_kind_from_string(const std::string& s);

/// Metadata written next to every probe result.
struct RunManifest {
  PairLabels labels;
  ProbeKind probe = ProbeKind::Retention;
  std::map<std::string, std::string> parameters;
  std::string result_file;
  std::int64_t created_utc = 0;

  /// Throws InvalidParameter when a parameter required by `probe` is absent.
  void validate() const;
};

}  // namespace embgeo
