#include "embgeo/stability.hpp"

#include <cmath>
#include <exception>

#include "embgeo/error.hpp"
#include "embgeo/stats.hpp"

namespace embgeo {

Eigen::MatrixXd component_similarity(const RowMatrix& rows_a, const RowMatrix& rows_b) {
  if (rows_a.cols() != rows_b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "component rows have widths " +
                                                  std::to_string(rows_a.cols()) + " and " +
                                                  std::to_string(rows_b.cols()));
  }
  const auto d = static_cast<double>(rows_a.cols());
  const RowMatrix ca = rows_a.colwise() - rows_a.rowwise().mean();
  const RowMatrix cb = rows_b.colwise() - rows_b.rowwise().mean();
  const Vector rms_a = (rows_a.rowwise().squaredNorm() / d).cwiseSqrt();
  const Vector rms_b = (rows_b.rowwise().squaredNorm() / d).cwiseSqrt();
  Eigen::MatrixXd cov = (ca * cb.transpose()) / d;
  for (Eigen::Index i = 0; i < cov.rows(); ++i) {
    for (Eigen::Index j = 0; j < cov.cols(); ++j) {
      cov(i, j) = std::abs(cov(i, j) / (rms_a(i) * rms_b(j)));
    }
  }
  return cov;
}

std::vector<std::size_t> greedy_match(const Eigen::MatrixXd& sigma) {
  if (sigma.rows() != sigma.cols()) {
    throw Error(ErrorCode::NonSquare, "greedy matching needs a square matrix, got " +
                                          std::to_string(sigma.rows()) + "x" +
                                          std::to_string(sigma.cols()));
  }
  const auto n = static_cast<std::size_t>(sigma.rows());
  std::vector<std::size_t> match(n, n);
  std::vector<bool> row_used(n, false), col_used(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t bi = n, bj = n;
    double best = 0.0;
    // Row-major scan with a strict '>' keeps the lowest (i, j) among ties.
    for (std::size_t i = 0; i < n; ++i) {
      if (row_used[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (col_used[j]) continue;
        const double v = sigma(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (bi == n || v > best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    }
    match[bi] = bj;
    row_used[bi] = true;
    col_used[bj] = true;
  }
  return match;
}

StabilityReport assemble_stability(const std::vector<IcaModel>& models,
                                   const std::vector<PeakProfile>& profiles,
                                   double gini_cv_threshold, double peak_sigma_threshold) {
  const std::size_t r = models.size();
  if (r < 2) throw Error(ErrorCode::InvalidParameter, "stability needs at least 2 restarts");
  if (profiles.size() != r) throw Error(ErrorCode::LengthMismatch, "one profile per model required");

  StabilityReport rep;
  rep.restarts = r;
  rep.gini_cv_threshold = gini_cv_threshold;
  rep.peak_sigma_threshold = peak_sigma_threshold;
  for (std::size_t i = 0; i < r; ++i) {
    rep.seeds.push_back(models[i].seed);
    rep.gini_values.push_back(profiles[i].gini);
    rep.peak_dims.push_back(profiles[i].peak_dim);
    rep.converged.push_back(models[i].converged);
  }
  rep.gini_cv = coefficient_of_variation(rep.gini_values);
  rep.gini_stable = rep.gini_cv < gini_cv_threshold;

  rep.peak_sigma = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t b = a + 1; b < r; ++b) {
      const auto sigma = component_similarity(models[a].composed, models[b].composed);
      RunPairMatch pm{a, b, greedy_match(sigma), false};
      const auto pa = static_cast<Eigen::Index>(rep.peak_dims[a]);
      const auto pb = static_cast<Eigen::Index>(rep.peak_dims[b]);
      pm.peak_matched = pm.matching[rep.peak_dims[a]] == rep.peak_dims[b];

      // a's peak against its partner in b, and b's peak against its partner in a
      const auto partner_of_a = static_cast<Eigen::Index>(pm.matching[rep.peak_dims[a]]);
      Eigen::Index partner_of_b = 0;
      for (std::size_t i = 0; i < pm.matching.size(); ++i) {
        if (pm.matching[i] == rep.peak_dims[b]) partner_of_b = static_cast<Eigen::Index>(i);
      }
      const double s = 0.5 * (sigma(pa, partner_of_a) + sigma(partner_of_b, pb));
      rep.peak_sigma(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = s;
      rep.peak_sigma(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = s;
      if (s > peak_sigma_threshold) ++rep.peak_agreement_count;
      rep.matchings.push_back(std::move(pm));
    }
  }
  return rep;
}

StabilityReport stability_report(const PairedEmbeddings& p, const StabilityOptions& options) {
  if (options.restarts < 2) {
    throw Error(ErrorCode::InvalidParameter, "stability needs at least 2 restarts, got " +
                                                 std::to_string(options.restarts));
  }
  if (options.d_ica > 2 * p.size()) {
    throw Error(ErrorCode::TooFewRows, "d_ica=" + std::to_string(options.d_ica) + " exceeds 2N=" +
                                           std::to_string(2 * p.size()) + " fit rows");
  }
  const RowMatrix x = stack_pairs(p);
  // Whitening is deterministic, so every restart shares one.
  const Whitener whitener = fit_whitener(x, options.d_ica);

  const auto r = static_cast<std::ptrdiff_t>(options.restarts);
  std::vector<IcaModel> models(options.restarts);
  std::vector<PeakProfile> profiles(options.restarts);
  std::vector<std::exception_ptr> failures(options.restarts);

#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < r; ++i) {
    try {
      IcaOptions io;
      io.d_ica = options.d_ica;
      io.seed = options.base_seed + static_cast<std::uint64_t>(i);
      io.max_iter = options.max_iter;
      io.tol = options.tol;
      models[static_cast<std::size_t>(i)] = fit_ica(whitener, x, io);
      profiles[static_cast<std::size_t>(i)] = peak_profile(models[static_cast<std::size_t>(i)], p);
    } catch (...) {
      failures[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return assemble_stability(models, profiles, options.gini_cv_threshold, options.peak_sigma_threshold);
}

}  // namespace embgeo
