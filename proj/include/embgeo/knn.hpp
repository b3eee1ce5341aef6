#pragma once

#include <string>
#include <vector>

#include "embgeo/kernels.hpp"
#include "embgeo/types.hpp"

namespace embgeo {

std::string to_string(Metric metric);
Metric metric_from_string(const std::string& s);

/// Exact k nearest neighbors of every row of one matrix among its other
/// rows. Row i lists indices by descending similarity, ties by ascending
/// index, and never contains i itself.
struct NeighborTable {
  std::size_t k = 0;
  std::size_t rows = 0;
  std::vector<std::uint32_t> indices;  // rows x k, row-major

  std::uint32_t at(std::size_t i, std::size_t j) const { return indices[i * k + j]; }
  /// First `k_prefix` neighbors of row i; the k' <= k neighborhood.
  std::vector<std::uint32_t> row(std::size_t i, std::size_t k_prefix) const;
};

struct RetentionResult {
  std::size_t k = 0;
  Metric metric = Metric::Cosine;
  std::vector<double> per_pair_overlap;  // |kNN_Q(i) ∩ kNN_T(i)| / k
  std::vector<double> per_pair_jaccard;  // |∩| / (2k - |∩|)
  double mean_retention = 0.0;
  double mean_jaccard = 0.0;
};

/// Throws KTooLarge unless 1 <= k <= N-1.
NeighborTable knn_indices(const EmbeddingMatrix& m, std::size_t k, Metric metric = Metric::Cosine);

/// Neighborhood retention between the two sides of each pair. Neighbors are
/// searched within each side separately and compared through pair indices.
RetentionResult retention(const PairedEmbeddings& p, std::size_t k, Metric metric = Metric::Cosine);

/// One result per entry of `ks` (in the given order), from a single neighbor
/// search per side at max(ks).
std::vector<RetentionResult> retention_grid(const PairedEmbeddings& p,
                                            const std::vector<std::size_t>& ks,
                                            Metric metric = Metric::Cosine);

/// {5, 10, 20, 50} ∪ {0.01N, 0.02N, 0.05N, 0.1N, 0.2N}, rounded to the
/// nearest integer (at least 1), deduplicated, sorted ascending, and
/// restricted to k <= N-1.
std::vector<std::size_t> default_k_grid(std::size_t n);

/// Overlap statistics of two neighbor tables of equal shape, using the
/// first `k` columns of each.
RetentionResult compare_neighborhoods(const NeighborTable& a, const NeighborTable& b,
                                      std::size_t k, Metric metric);

}  // namespace embgeo
