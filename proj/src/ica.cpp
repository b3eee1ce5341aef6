#include "embgeo/ica.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "embgeo/error.hpp"
#include "embgeo/kernels.hpp"
#include "embgeo/rng.hpp"
#include "embgeo/stats.hpp"

namespace embgeo {

namespace {

constexpr double kRankTolerance = 1e-10;

// Sign convention: the largest-magnitude entry of each direction is positive.
void fix_sign(Eigen::Ref<Vector> u) {
  Eigen::Index arg = 0;
  u.cwiseAbs().maxCoeff(&arg);
  if (u(arg) < 0.0) u = -u;
}

}  // namespace

RowMatrix Whitener::apply(const RowMatrix& x) const {
  if (static_cast<std::size_t>(x.cols()) != input_dims()) {
    throw Error(ErrorCode::DimensionMismatch, "whitener expects " + std::to_string(input_dims()) +
                                                  " dims, got " + std::to_string(x.cols()));
  }
  return (x.rowwise() - mean.transpose()) * projection.transpose();
}

Whitener fit_whitener(const RowMatrix& x, std::size_t d_ica) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  if (d_ica == 0) throw Error(ErrorCode::InvalidParameter, "d_ica must be at least 1");
  if (static_cast<Eigen::Index>(d_ica) > d) {
    throw Error(ErrorCode::InvalidParameter, "d_ica=" + std::to_string(d_ica) +
                                                 " exceeds the embedding dimension " +
                                                 std::to_string(d));
  }
  if (n < static_cast<Eigen::Index>(d_ica) || n < 2) {
    throw Error(ErrorCode::TooFewRows, "fitting " + std::to_string(d_ica) +
                                           " components needs at least that many rows, got " +
                                           std::to_string(n));
  }
  const auto m = static_cast<Eigen::Index>(d_ica);

  Whitener w;
  w.mean = x.colwise().mean().transpose();
  const RowMatrix xc = x.rowwise() - w.mean.transpose();

  // Leading right singular directions of xc, from whichever Gram matrix is
  // smaller.
  Eigen::MatrixXd dirs(d, m);
  if (n >= d) {
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
    cov.selfadjointView<Eigen::Lower>().rankUpdate(xc.transpose());
    cov = cov.selfadjointView<Eigen::Lower>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    for (Eigen::Index j = 0; j < m; ++j) dirs.col(j) = es.eigenvectors().col(d - 1 - j);
  } else {
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(xc);
    gram = gram.selfadjointView<Eigen::Lower>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    for (Eigen::Index j = 0; j < m; ++j) {
      Vector u = xc.transpose() * es.eigenvectors().col(n - 1 - j);
      const double norm = u.norm();
      dirs.col(j) = norm > 0.0 ? Vector(u / norm) : u;
    }
  }

  // Singular values measured directly on the data are accurate far below
  // the eigenvalue noise floor, which is what the rank test needs.
  w.singular_values.resize(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    fix_sign(dirs.col(j));
    w.singular_values(j) = (xc * dirs.col(j)).norm();
  }
  const double s_max = w.singular_values.maxCoeff();
  for (Eigen::Index j = 0; j < m; ++j) {
    if (!(w.singular_values(j) > kRankTolerance * s_max)) {
      throw Error(ErrorCode::RankDeficient,
                  "fit data has rank below d_ica=" + std::to_string(d_ica) + " (component " +
                      std::to_string(j) + " singular value " +
                      std::to_string(w.singular_values(j)) + ")");
    }
  }

  const double sqrt_n = std::sqrt(static_cast<double>(n));
  w.projection.resize(m, d);
  for (Eigen::Index j = 0; j < m; ++j) {
    w.projection.row(j) = dirs.col(j).transpose() * (sqrt_n / w.singular_values(j));
  }
  return w;
}

Eigen::MatrixXd symmetric_decorrelation(const Eigen::MatrixXd& w) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w * w.transpose());
  const Eigen::VectorXd inv_sqrt = es.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose() * w;
}

void recompose(IcaModel& model) {
  model.composed = model.unmixing * model.whitener.projection;
}

IcaModel fit_ica(const Whitener& whitener, const RowMatrix& x, const IcaOptions& options) {
  if (options.d_ica != whitener.kept_dims()) {
    throw Error(ErrorCode::InvalidParameter, "whitener keeps " +
                                                 std::to_string(whitener.kept_dims()) +
                                                 " dims but d_ica=" + std::to_string(options.d_ica));
  }
  if (options.max_iter == 0) throw Error(ErrorCode::InvalidParameter, "max_iter must be positive");
  if (!(options.tol > 0.0)) throw Error(ErrorCode::InvalidParameter, "tol must be positive");

  const auto m = static_cast<Eigen::Index>(options.d_ica);
  // One whitened sample per column.
  const Eigen::MatrixXd z = whitener.apply(x).transpose();

  Rng rng(options.seed);
  Eigen::MatrixXd w(m, m);
  for (Eigen::Index r = 0; r < m; ++r) {
    for (Eigen::Index c = 0; c < m; ++c) w(r, c) = rng.normal();
  }
  w = symmetric_decorrelation(w);

  IcaModel model;
  model.whitener = whitener;
  model.d_ica = options.d_ica;
  model.seed = options.seed;
  model.max_iter = options.max_iter;
  model.tol = options.tol;

  for (std::size_t it = 1; it <= options.max_iter; ++it) {
    const auto mom = kernels::omp::fastica_moments(w, z);
    Eigen::MatrixXd w_new = mom.g_zt - mom.gp_mean.asDiagonal() * w;
    w_new = symmetric_decorrelation(w_new);
    const double lim = ((w_new.cwiseProduct(w)).rowwise().sum().cwiseAbs().array() - 1.0).abs().maxCoeff();
    w = std::move(w_new);
    model.iterations_used = it;
    if (options.on_iteration) options.on_iteration(it, w);
    if (lim < options.tol) {
      model.converged = true;
      break;
    }
  }
  model.unmixing = std::move(w);
  recompose(model);
  return model;
}

IcaModel fit_ica(const RowMatrix& x, const IcaOptions& options) {
  return fit_ica(fit_whitener(x, options.d_ica), x, options);
}

RowMatrix stack_pairs(const PairedEmbeddings& p) {
  RowMatrix x(static_cast<Eigen::Index>(2 * p.size()), static_cast<Eigen::Index>(p.dims()));
  x.topRows(static_cast<Eigen::Index>(p.size())) = p.queries().data();
  x.bottomRows(static_cast<Eigen::Index>(p.size())) = p.targets().data();
  return x;
}

IcaModel fit_ica(const PairedEmbeddings& p, const IcaOptions& options) {
  if (options.d_ica > 2 * p.size()) {
    throw Error(ErrorCode::TooFewRows, "d_ica=" + std::to_string(options.d_ica) + " exceeds 2N=" +
                                           std::to_string(2 * p.size()) + " fit rows");
  }
  return fit_ica(stack_pairs(p), options);
}

RowMatrix transform(const IcaModel& model, const RowMatrix& x) {
  if (static_cast<std::size_t>(x.cols()) != model.whitener.input_dims()) {
    throw Error(ErrorCode::DimensionMismatch, "model expects " +
                                                  std::to_string(model.whitener.input_dims()) +
                                                  " dims, got " + std::to_string(x.cols()));
  }
  return (x.rowwise() - model.whitener.mean.transpose()) * model.composed.transpose();
}

PeakProfile profile_of_differences(const IcaModel& model, const RowMatrix& differences, bool shuffled) {
  if (static_cast<std::size_t>(differences.cols()) != model.whitener.input_dims()) {
    throw Error(ErrorCode::DimensionMismatch, "model expects " +
                                                  std::to_string(model.whitener.input_dims()) +
                                                  " dims, got " + std::to_string(differences.cols()));
  }
  // transform(q) - transform(t) = C (q - t); the centering cancels.
  const Eigen::ArrayXXd abs_delta = (differences * model.composed.transpose()).array().abs();
  const auto n = static_cast<double>(abs_delta.rows());
  const Eigen::Index m = abs_delta.cols();

  PeakProfile prof;
  prof.shuffled = shuffled;
  prof.mean_abs_diff.resize(static_cast<std::size_t>(m));
  prof.std_abs_diff.resize(static_cast<std::size_t>(m));
  for (Eigen::Index j = 0; j < m; ++j) {
    const double mean = abs_delta.col(j).sum() / n;
    const double var = (abs_delta.col(j) - mean).square().sum() / n;
    prof.mean_abs_diff[static_cast<std::size_t>(j)] = mean;
    prof.std_abs_diff[static_cast<std::size_t>(j)] = std::sqrt(var);
  }
  const auto& v = prof.mean_abs_diff;
  prof.peak_dim = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
  try {
    prof.gini = gini(v);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ZeroMean) {
      throw Error(ErrorCode::DegenerateProfile,
                  "all paired differences are zero in ICA space; gini is undefined");
    }
    throw;
  }
  return prof;
}

PeakProfile peak_profile(const IcaModel& model, const PairedEmbeddings& p) {
  return profile_of_differences(model, p.queries().data() - p.targets().data(), false);
}

PeakProfile shuffled_profile(const IcaModel& model, const PairedEmbeddings& p, std::uint64_t seed) {
  const std::size_t n = p.size();
  if (n < 2) throw Error(ErrorCode::InvalidParameter, "shuffling needs at least 2 pairs");
  const auto perm = Rng(seed).permutation(n);
  const RowMatrix& q = p.queries().data();
  const RowMatrix& t = p.targets().data();
  RowMatrix diff(q.rows(), q.cols());
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    diff.row(r) = q.row(r) - t.row(static_cast<Eigen::Index>(perm[i]));
  }
  return profile_of_differences(model, diff, true);
}

}  // namespace embgeo
