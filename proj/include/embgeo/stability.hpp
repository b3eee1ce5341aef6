#pragma once

#include <cstdint>
#include <vector>

#include "embgeo/ica.hpp"
#include "embgeo/types.hpp"

namespace embgeo {

/// sigma_ij = |cov(a_i, b_j)| / (rms(a_i) * rms(b_j)), with the covariance
/// taken over the d entries of each row (centered within the row, 1/d) and
/// the RMS uncentered. Errors: DimensionMismatch.
Eigen::MatrixXd component_similarity(const RowMatrix& rows_a, const RowMatrix& rows_b);

/// Greedy assignment on a non-negative square matrix: repeatedly pair the
/// largest remaining entry's row and column (ties: lower row, then lower
/// column). Returns match[row] = column. Errors: NonSquare.
std::vector<std::size_t> greedy_match(const Eigen::MatrixXd& sigma);

struct StabilityOptions {
  std::size_t d_ica = 32;
  std::size_t restarts = 8;
  std::uint64_t base_seed = 0;
  std::size_t max_iter = 10000;
  double tol = 1e-4;
  double gini_cv_threshold = 0.01;
  double peak_sigma_threshold = 0.95;
};

struct RunPairMatch {
  std::size_t run_a = 0;
  std::size_t run_b = 0;
  std::vector<std::size_t> matching;  // component of run_a -> component of run_b
  bool peak_matched = false;          // matching[peak_a] == peak_b
};

struct StabilityReport {
  std::size_t restarts = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<double> gini_values;
  std::vector<std::size_t> peak_dims;
  std::vector<bool> converged;
  double gini_cv = 0.0;
  bool gini_stable = false;
  /// R x R; entry (a, b) is sigma between run a's peak row and the row of
  /// run b that greedy matching assigns to it. Symmetrised, unit diagonal.
  Eigen::MatrixXd peak_sigma;
  std::size_t peak_agreement_count = 0;  // run pairs with sigma above threshold
  std::vector<RunPairMatch> matchings;
  double gini_cv_threshold = 0.0;
  double peak_sigma_threshold = 0.0;
};

/// Fits `restarts` models with seeds base_seed, base_seed+1, ... on the
/// stacked pairs and compares their peak directions. Errors: InvalidParameter
/// when restarts < 2, plus any fitting error.
StabilityReport stability_report(const PairedEmbeddings& p, const StabilityOptions& options);

/// Assembles a report from already fitted models and their paired profiles.
StabilityReport assemble_stability(const std::vector<IcaModel>& models,
                                   const std::vector<PeakProfile>& profiles,
                                   double gini_cv_threshold, double peak_sigma_threshold);

}  // namespace embgeo
