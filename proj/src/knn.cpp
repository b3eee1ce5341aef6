#include "embgeo/knn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "embgeo/error.hpp"

namespace embgeo {

std::string to_string(Metric metric) {
  return metric == Metric::Cosine ? "cosine" : "euclidean";
}

Metric metric_from_string(const std::string& s) {
  if (s == "cosine") return Metric::Cosine;
  if (s == "euclidean") return Metric::Euclidean;
  throw Error(ErrorCode::InvalidParameter, "unknown metric '" + s + "' (cosine|euclidean)");
}

std::vector<std::uint32_t> NeighborTable::row(std::size_t i, std::size_t k_prefix) const {
  const auto first = indices.begin() + static_cast<std::ptrdiff_t>(i * k);
  return {first, first + static_cast<std::ptrdiff_t>(std::min(k_prefix, k))};
}

namespace {

void check_k(std::size_t n, std::size_t k) {
  if (k < 1 || k + 1 > n) {
    throw Error(ErrorCode::KTooLarge,
                "k=" + std::to_string(k) + " must lie in [1, N-1] for N=" + std::to_string(n));
  }
}

}  // namespace

NeighborTable knn_indices(const EmbeddingMatrix& m, std::size_t k, Metric metric) {
  check_k(m.rows(), k);
  auto found = kernels::omp::top_k_neighbors(kernels::prepare_rows(m.data(), metric), k, metric);
  return NeighborTable{k, found.rows, std::move(found.index)};
}

RetentionResult compare_neighborhoods(const NeighborTable& a, const NeighborTable& b,
                                      std::size_t k, Metric metric) {
  if (a.rows != b.rows) {
    throw Error(ErrorCode::PairCountMismatch, "neighbor tables cover different row counts");
  }
  if (k < 1 || k > a.k || k > b.k) {
    throw Error(ErrorCode::KTooLarge, "k=" + std::to_string(k) + " exceeds the searched neighbors");
  }
  RetentionResult r;
  r.k = k;
  r.metric = metric;
  r.per_pair_overlap.resize(a.rows);
  r.per_pair_jaccard.resize(a.rows);
  std::vector<std::uint32_t> lhs(k), rhs(k), common;
  common.reserve(k);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      lhs[j] = a.at(i, j);
      rhs[j] = b.at(i, j);
    }
    std::sort(lhs.begin(), lhs.end());
    std::sort(rhs.begin(), rhs.end());
    common.clear();
    std::set_intersection(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(), std::back_inserter(common));
    const auto shared = static_cast<double>(common.size());
    const auto kk = static_cast<double>(k);
    r.per_pair_overlap[i] = shared / kk;
    r.per_pair_jaccard[i] = shared / (2.0 * kk - shared);
  }
  const auto n = static_cast<double>(a.rows);
  r.mean_retention = std::accumulate(r.per_pair_overlap.begin(), r.per_pair_overlap.end(), 0.0) / n;
  r.mean_jaccard = std::accumulate(r.per_pair_jaccard.begin(), r.per_pair_jaccard.end(), 0.0) / n;
  return r;
}

RetentionResult retention(const PairedEmbeddings& p, std::size_t k, Metric metric) {
  check_k(p.size(), k);
  const auto q = knn_indices(p.queries(), k, metric);
  const auto t = knn_indices(p.targets(), k, metric);
  return compare_neighborhoods(q, t, k, metric);
}

std::vector<RetentionResult> retention_grid(const PairedEmbeddings& p,
                                            const std::vector<std::size_t>& ks, Metric metric) {
  if (ks.empty()) return {};
  for (auto k : ks) check_k(p.size(), k);
  const auto k_max = *std::max_element(ks.begin(), ks.end());
  // The top-k' prefix of a k_max search is exactly the k'-neighborhood.
  const auto q = knn_indices(p.queries(), k_max, metric);
  const auto t = knn_indices(p.targets(), k_max, metric);
  std::vector<RetentionResult> out;
  out.reserve(ks.size());
  for (auto k : ks) out.push_back(compare_neighborhoods(q, t, k, metric));
  return out;
}

std::vector<std::size_t> default_k_grid(std::size_t n) {
  std::vector<std::size_t> ks = {5, 10, 20, 50};
  for (double frac : {0.01, 0.02, 0.05, 0.1, 0.2}) {
    ks.push_back(std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(frac * static_cast<double>(n)))));
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  std::erase_if(ks, [n](std::size_t k) { return k + 1 > n; });
  return ks;
}

}  // namespace embgeo
