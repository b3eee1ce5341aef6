#pragma once

// Hot inner loops, each in two flavours:
//   serial::  plain loops, kept as the reference the tests compare against;
//   omp::     OpenMP-parallel versions used by the library.
//
// The neighbor kernels compute every pair score with the same scalar routine,
// so the parallel result is bit-identical to the serial one. The FastICA
// moment kernel reduces over fixed-size sample chunks in chunk order, so its
// output does not depend on the thread count (it differs from the serial
// reference only by summation order).

#include <cstdint>
#include <vector>

#include "embgeo/types.hpp"

namespace embgeo {

enum class Metric { Cosine, Euclidean };

namespace kernels {

/// Row-major N x k table of neighbor indices.
struct NeighborIndices {
  std::size_t rows = 0;
  std::size_t k = 0;
  std::vector<std::uint32_t> index;

  std::uint32_t at(std::size_t i, std::size_t j) const { return index[i * k + j]; }
};

/// Rows prepared for scoring: unit-normalised for cosine, unchanged for
/// euclidean. Both kernel flavours take prepared rows.
RowMatrix prepare_rows(const RowMatrix& x, Metric metric);

/// Similarity of two prepared rows: dot product (cosine) or negated squared
/// distance (euclidean). Higher is closer.
double pair_score(const double* a, const double* b, std::size_t d, Metric metric);

struct FasticaMoments {
  Eigen::MatrixXd g_zt;     // (1/n) * g(W Z) Z^T, m x m
  Eigen::VectorXd gp_mean;  // (1/n) * sum_samples g'(W Z), length m
};

namespace serial {

/// Exact k nearest neighbors of every row among the other rows, sorted by
/// descending score with ties broken by ascending index.
NeighborIndices top_k_neighbors(const RowMatrix& prepared, std::size_t k, Metric metric);

/// logcosh contrast moments for whitened samples `z` (m x n, one sample per
/// column).
FasticaMoments fastica_moments(const Eigen::MatrixXd& w, const Eigen::MatrixXd& z);

}  // namespace serial

namespace omp {

NeighborIndices top_k_neighbors(const RowMatrix& prepared, std::size_t k, Metric metric);
FasticaMoments fastica_moments(const Eigen::MatrixXd& w, const Eigen::MatrixXd& z);

}  // namespace omp

}  // namespace kernels
}  // namespace embgeo
