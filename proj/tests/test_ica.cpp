#include <doctest.h>

#include <cmath>

#include "embgeo/ica.hpp"
#include "embgeo/kernels.hpp"
#include "embgeo/rng.hpp"
#include "embgeo/serialize.hpp"
#include "embgeo/synth.hpp"
#include "helpers.hpp"

using namespace embgeo;
using testutil::error_code;

namespace {

// Two independent uniform sources mixed by a fixed 2x2 matrix, embedded in 3 dims.
struct Mixture {
  RowMatrix sources;
  RowMatrix observed;
};

Mixture mixed_uniforms(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Mixture m{RowMatrix(static_cast<Eigen::Index>(n), 2), RowMatrix(static_cast<Eigen::Index>(n), 3)};
  Eigen::Matrix<double, 2, 3> a;
  a << 1.0, 0.6, 0.2, 0.4, 1.0, -0.3;
  for (Eigen::Index i = 0; i < m.sources.rows(); ++i) {
    m.sources(i, 0) = rng.uniform(-1, 1);
    m.sources(i, 1) = rng.uniform(-1, 1);
  }
  m.observed = m.sources * a;
  m.observed.col(2).array() += 5.0;  // nonzero mean, keeps rows away from zero norm
  return m;
}

double abs_pearson(const Vector& a, const Vector& b) {
  const Vector ac = a.array() - a.mean();
  const Vector bc = b.array() - b.mean();
  return std::abs(ac.dot(bc) / (ac.norm() * bc.norm()));
}

}  // namespace

TEST_CASE("whitening gives zero mean and identity covariance") {
  for (auto [n, d] : {std::pair<std::size_t, std::size_t>{300, 10}, {8, 20}}) {
    RowMatrix x = testutil::gaussian(n, d, 7);
    x.col(0) *= 5.0;
    const std::size_t m = std::min<std::size_t>(6, n - 1);
    const auto w = fit_whitener(x, m);
    const RowMatrix z = w.apply(x);
    CHECK(z.rows() == static_cast<Eigen::Index>(n));
    CHECK(z.cols() == static_cast<Eigen::Index>(m));
    CHECK(z.colwise().mean().cwiseAbs().maxCoeff() < 1e-12);
    const Eigen::MatrixXd cov = z.transpose() * z / static_cast<double>(n);
    CHECK((cov - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff() < 1e-10);
    for (Eigen::Index j = 1; j < w.singular_values.size(); ++j) {
      CHECK(w.singular_values(j) <= w.singular_values(j - 1) * (1 + 1e-12));
    }
  }
}

TEST_CASE("whitening errors") {
  const RowMatrix x = testutil::gaussian(10, 5, 1);
  CHECK(error_code([&] { fit_whitener(x, 0); }) == ErrorCode::InvalidParameter);
  CHECK(error_code([&] { fit_whitener(x, 6); }) == ErrorCode::InvalidParameter);
  CHECK(error_code([&] { fit_whitener(x.topRows(3), 4); }) == ErrorCode::TooFewRows);

  RowMatrix low = testutil::gaussian(50, 2, 1) * testutil::gaussian(2, 6, 2);  // rank 2
  CHECK(error_code([&] { fit_whitener(low, 3); }) == ErrorCode::RankDeficient);
  CHECK_NOTHROW(fit_whitener(low, 2));
}

TEST_CASE("symmetric decorrelation yields an orthogonal matrix") {
  const Eigen::MatrixXd w = testutil::gaussian(6, 6, 3);
  const Eigen::MatrixXd o = symmetric_decorrelation(w);
  CHECK((o * o.transpose() - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-12);
  // Already orthogonal input is a fixed point.
  CHECK((symmetric_decorrelation(o) - o).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("serial and parallel fastica moments agree") {
  const Eigen::MatrixXd w = symmetric_decorrelation(testutil::gaussian(5, 5, 8));
  const Eigen::MatrixXd z = testutil::gaussian(5, 1500, 9);
  const auto a = kernels::serial::fastica_moments(w, z);
  const auto b = kernels::omp::fastica_moments(w, z);
  CHECK((a.g_zt - b.g_zt).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((a.gp_mean - b.gp_mean).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("FastICA separates mixed uniform sources") {
  const auto mix = mixed_uniforms(5000, 1);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    IcaOptions opts;
    opts.d_ica = 2;
    opts.seed = seed;
    const auto model = fit_ica(mix.observed, opts);
    CHECK(model.converged);
    const RowMatrix s = transform(model, mix.observed);
    const double r00 = abs_pearson(s.col(0), mix.sources.col(0));
    const double r01 = abs_pearson(s.col(0), mix.sources.col(1));
    const double best0 = std::max(r00, r01);
    const double best1 = r00 > r01 ? abs_pearson(s.col(1), mix.sources.col(1)) : abs_pearson(s.col(1), mix.sources.col(0));
    CHECK(best0 > 0.99);
    CHECK(best1 > 0.99);
  }
}

TEST_CASE("fits are deterministic in the seed") {
  const auto mix = mixed_uniforms(800, 2);
  IcaOptions opts;
  opts.d_ica = 2;
  opts.seed = 11;
  const auto a = fit_ica(mix.observed, opts);
  const auto b = fit_ica(mix.observed, opts);
  CHECK(a.unmixing == b.unmixing);
  CHECK(a.iterations_used == b.iterations_used);

  std::size_t calls = 0;
  opts.on_iteration = [&](std::size_t, const Eigen::MatrixXd& w) {
    ++calls;
    CHECK((w * w.transpose() - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
  };
  const auto c = fit_ica(mix.observed, opts);
  CHECK(calls == c.iterations_used);
}

TEST_CASE("iteration budget and option checks") {
  const auto mix = mixed_uniforms(500, 3);
  IcaOptions opts;
  opts.d_ica = 2;
  opts.max_iter = 1;
  opts.tol = 1e-15;
  const auto m = fit_ica(mix.observed, opts);
  CHECK_FALSE(m.converged);
  CHECK(m.iterations_used == 1);
  opts.max_iter = 0;
  CHECK(error_code([&] { fit_ica(mix.observed, opts); }) == ErrorCode::InvalidParameter);
  opts.max_iter = 10;
  opts.tol = 0;
  CHECK(error_code([&] { fit_ica(mix.observed, opts); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("profile arithmetic") {
  const auto p = validate_paired(testutil::gaussian(40, 6, 1), testutil::gaussian(40, 6, 2));
  IcaOptions opts;
  opts.d_ica = 4;
  const auto model = fit_ica(p, opts);
  CHECK((model.composed - model.unmixing * model.whitener.projection).cwiseAbs().maxCoeff() == 0.0);

  const auto prof = peak_profile(model, p);
  const RowMatrix delta = transform(model, p.queries().data()) - transform(model, p.targets().data());
  for (std::size_t j = 0; j < 4; ++j) {
    const auto col = delta.col(static_cast<Eigen::Index>(j)).cwiseAbs();
    const double mean = col.mean();
    CHECK(prof.mean_abs_diff[j] == doctest::Approx(mean).epsilon(1e-12));
    const double var = (col.array() - mean).square().mean();
    CHECK(prof.std_abs_diff[j] == doctest::Approx(std::sqrt(var)).epsilon(1e-10));
    CHECK(prof.mean_abs_diff[j] <= prof.mean_abs_diff[prof.peak_dim]);
  }
  CHECK_FALSE(prof.shuffled);

  const auto s1 = shuffled_profile(model, p, 5);
  const auto s2 = shuffled_profile(model, p, 5);
  CHECK(s1.shuffled);
  CHECK(s1.mean_abs_diff == s2.mean_abs_diff);

  // Identical sides give an all-zero profile.
  const auto same = validate_paired(p.queries().data(), p.queries().data());
  CHECK(error_code([&] { peak_profile(model, same); }) == ErrorCode::DegenerateProfile);
  CHECK(error_code([&] { transform(model, RowMatrix::Ones(2, 5)); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("paired fit needs enough rows") {
  const auto p = validate_paired(testutil::gaussian(3, 10, 1), testutil::gaussian(3, 10, 2));
  IcaOptions opts;
  opts.d_ica = 7;
  CHECK(error_code([&] { fit_ica(p, opts); }) == ErrorCode::TooFewRows);
}

TEST_CASE("planted offset shows up as a peak") {
  SynthSpec spec;
  spec.n = 600;
  spec.d = 24;
  spec.seed = 3;
  const auto s = generate(spec);
  IcaOptions opts;
  opts.d_ica = 8;
  const auto model = fit_ica(s.pairs, opts);
  const auto paired = peak_profile(model, s.pairs);
  const auto shuffled = shuffled_profile(model, s.pairs, 1);
  CHECK(paired.gini > shuffled.gini + 0.1);
  const Vector v = Eigen::Map<const Vector>(s.truth.offset.data(), static_cast<Eigen::Index>(s.truth.offset.size()));
  const Vector row = model.composed.row(static_cast<Eigen::Index>(paired.peak_dim)).transpose();
  CHECK(std::abs(row.dot(v)) / (row.norm() * v.norm()) > 0.9);
}

TEST_CASE("model save and load") {
  testutil::TempDir dir;
  const auto p = validate_paired(testutil::gaussian(50, 7, 1), testutil::gaussian(50, 7, 2));
  IcaOptions opts;
  opts.d_ica = 3;
  opts.seed = 4;
  const auto model = fit_ica(p, opts);
  save_model(dir / "m", model);
  CHECK(std::filesystem::exists(dir / "m.json"));
  CHECK(std::filesystem::exists(dir / "m.embp"));
  const auto back = load_model(dir / "m");
  CHECK(back.unmixing == model.unmixing);
  CHECK(back.whitener.projection == model.whitener.projection);
  CHECK(back.whitener.mean == model.whitener.mean);
  CHECK(back.composed == model.composed);
  CHECK(back.seed == 4);
  CHECK(back.d_ica == 3);
  CHECK(back.converged == model.converged);
  CHECK(back.iterations_used == model.iterations_used);
  CHECK(error_code([&] { load_model(dir / "absent"); }) == ErrorCode::FileNotFound);
}
