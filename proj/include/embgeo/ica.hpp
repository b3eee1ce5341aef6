#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "embgeo/types.hpp"

namespace embgeo {

/// Centering plus a projection onto the leading principal directions,
/// scaled so the projected fit data has identity covariance (1/n
/// normalisation).
struct Whitener {
  Vector mean;            // length d
  RowMatrix projection;   // d_ica x d
  Vector singular_values; // of the centered fit data, kept directions only

  std::size_t kept_dims() const noexcept { return static_cast<std::size_t>(projection.rows()); }
  std::size_t input_dims() const noexcept { return static_cast<std::size_t>(mean.size()); }

  /// (x - mean) * projection^T, one output row per input row.
  RowMatrix apply(const RowMatrix& x) const;
};

/// Errors: InvalidParameter (d_ica == 0 or d_ica > d), TooFewRows
/// (fewer rows than d_ica), RankDeficient (a kept singular value below
/// 1e-10 of the largest).
Whitener fit_whitener(const RowMatrix& x, std::size_t d_ica);

struct IcaOptions {
  std::size_t d_ica = 32;
  std::uint64_t seed = 0;
  std::size_t max_iter = 10000;
  double tol = 1e-4;
  /// Called after every fixed-point update with the new unmixing matrix.
  std::function<void(std::size_t iteration, const Eigen::MatrixXd& unmixing)> on_iteration;
};

struct IcaModel {
  Whitener whitener;
  Eigen::MatrixXd unmixing;  // W, d_ica x d_ica, acts on whitened data
  RowMatrix composed;        // C = W * projection, d_ica x d
  std::size_t d_ica = 0;
  std::uint64_t seed = 0;
  std::size_t max_iter = 0;
  double tol = 0.0;
  std::size_t iterations_used = 0;
  bool converged = false;
};

/// Symmetric FastICA with the logcosh contrast on the rows of `x`.
/// Running out of iterations is not an error: `converged` is left false.
IcaModel fit_ica(const RowMatrix& x, const IcaOptions& options);

/// Same, reusing an already fitted whitener for `x` (restarts share it).
IcaModel fit_ica(const Whitener& whitener, const RowMatrix& x, const IcaOptions& options);

/// Fits on the stacked queries and targets (2N rows).
IcaModel fit_ica(const PairedEmbeddings& p, const IcaOptions& options);

/// Stacks queries over targets.
RowMatrix stack_pairs(const PairedEmbeddings& p);

/// C (x - mean) for every row. DimensionMismatch on a width mismatch.
RowMatrix transform(const IcaModel& model, const RowMatrix& x);

/// Rebuilds `composed` from the whitener and unmixing matrix.
void recompose(IcaModel& model);

/// W <- (W W^T)^{-1/2} W.
Eigen::MatrixXd symmetric_decorrelation(const Eigen::MatrixXd& w);

struct PeakProfile {
  std::vector<double> mean_abs_diff;  // per ICA dimension, over pairs
  std::vector<double> std_abs_diff;   // population std over pairs
  double gini = 0.0;
  std::size_t peak_dim = 0;
  bool shuffled = false;
};

/// Per-dimension statistics of |transform(q_i) - transform(t_i)|.
/// Errors: DimensionMismatch, DegenerateProfile (all differences zero).
PeakProfile peak_profile(const IcaModel& model, const PairedEmbeddings& p);

/// peak_profile after permuting the targets with a seeded Fisher-Yates
/// shuffle. Errors: InvalidParameter when N < 2, otherwise as peak_profile.
PeakProfile shuffled_profile(const IcaModel& model, const PairedEmbeddings& p, std::uint64_t seed);

/// Profile of an explicit difference matrix (rows are q_i - t_i).
PeakProfile profile_of_differences(const IcaModel& model, const RowMatrix& differences, bool shuffled);

}  // namespace embgeo
