#include "embgeo/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace embgeo::kernels {

namespace {

inline double dot(const double* a, const double* b, std::size_t d) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t j = 0;
  for (; j + 4 <= d; j += 4) {
    s0 += a[j] * b[j];
    s1 += a[j + 1] * b[j + 1];
    s2 += a[j + 2] * b[j + 2];
    s3 += a[j + 3] * b[j + 3];
  }
  for (; j < d; ++j) s0 += a[j] * b[j];
  return (s0 + s1) + (s2 + s3);
}

inline double neg_sq_dist(const double* a, const double* b, std::size_t d) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t j = 0;
  for (; j + 4 <= d; j += 4) {
    const double e0 = a[j] - b[j], e1 = a[j + 1] - b[j + 1];
    const double e2 = a[j + 2] - b[j + 2], e3 = a[j + 3] - b[j + 3];
    s0 += e0 * e0;
    s1 += e1 * e1;
    s2 += e2 * e2;
    s3 += e3 * e3;
  }
  for (; j < d; ++j) {
    const double e = a[j] - b[j];
    s0 += e * e;
  }
  return -((s0 + s1) + (s2 + s3));
}

inline double score(const double* a, const double* b, std::size_t d, Metric metric) {
  return metric == Metric::Cosine ? dot(a, b, d) : neg_sq_dist(a, b, d);
}

// Strict total order: higher score first, then lower index.
struct CloserFirst {
  const double* scores;
  bool operator()(std::uint32_t a, std::uint32_t b) const {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  }
};

void check_k(std::size_t n, std::size_t k) {
  // callers validate; this guards the kernels when used directly
  if (k == 0 || k >= n) throw std::invalid_argument("k must be in [1, N-1]");
}

}  // namespace

RowMatrix prepare_rows(const RowMatrix& x, Metric metric) {
  if (metric == Metric::Euclidean) return x;
  RowMatrix out = x;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    out.row(i) /= norm;
  }
  return out;
}

double pair_score(const double* a, const double* b, std::size_t d, Metric metric) {
  return score(a, b, d, metric);
}

namespace serial {

NeighborIndices top_k_neighbors(const RowMatrix& prepared, std::size_t k, Metric metric) {
  const auto n = static_cast<std::size_t>(prepared.rows());
  const auto d = static_cast<std::size_t>(prepared.cols());
  check_k(n, k);
  NeighborIndices out{n, k, std::vector<std::uint32_t>(n * k)};
  std::vector<std::pair<double, std::uint32_t>> cand;
  cand.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    cand.clear();
    const double* a = prepared.data() + i * d;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      cand.emplace_back(score(a, prepared.data() + j * d, d, metric), static_cast<std::uint32_t>(j));
    }
    std::sort(cand.begin(), cand.end(), [](const auto& x, const auto& y) {
      if (x.first != y.first) return x.first > y.first;
      return x.second < y.second;
    });
    for (std::size_t j = 0; j < k; ++j) out.index[i * k + j] = cand[j].second;
  }
  return out;
}

FasticaMoments fastica_moments(const Eigen::MatrixXd& w, const Eigen::MatrixXd& z) {
  const Eigen::Index m = w.rows();
  const Eigen::Index n = z.cols();
  FasticaMoments out{Eigen::MatrixXd::Zero(m, m), Eigen::VectorXd::Zero(m)};
  std::vector<double> g(static_cast<std::size_t>(m));
  for (Eigen::Index s = 0; s < n; ++s) {
    for (Eigen::Index r = 0; r < m; ++r) {
      double y = 0.0;
      for (Eigen::Index c = 0; c < m; ++c) y += w(r, c) * z(c, s);
      const double t = std::tanh(y);
      g[static_cast<std::size_t>(r)] = t;
      out.gp_mean(r) += 1.0 - t * t;
    }
    for (Eigen::Index r = 0; r < m; ++r) {
      for (Eigen::Index c = 0; c < m; ++c) out.g_zt(r, c) += g[static_cast<std::size_t>(r)] * z(c, s);
    }
  }
  out.g_zt /= static_cast<double>(n);
  out.gp_mean /= static_cast<double>(n);
  return out;
}

}  // namespace serial

namespace omp {

NeighborIndices top_k_neighbors(const RowMatrix& prepared, std::size_t k, Metric metric) {
  const auto n = static_cast<std::size_t>(prepared.rows());
  const auto d = static_cast<std::size_t>(prepared.cols());
  check_k(n, k);
  NeighborIndices out{n, k, std::vector<std::uint32_t>(n * k)};

  // A tile of query rows is scored against each candidate row while that
  // candidate is hot in cache.
  constexpr std::size_t kTile = 16;
  const auto tiles = static_cast<std::ptrdiff_t>((n + kTile - 1) / kTile);
  const double* base = prepared.data();

#pragma omp parallel
  {
    std::vector<double> scores(kTile * n);
    std::vector<std::uint32_t> order;
    order.reserve(n);

#pragma omp for schedule(dynamic, 1)
    for (std::ptrdiff_t t = 0; t < tiles; ++t) {
      const std::size_t i0 = static_cast<std::size_t>(t) * kTile;
      const std::size_t i1 = std::min(n, i0 + kTile);
      for (std::size_t j = 0; j < n; ++j) {
        const double* b = base + j * d;
        for (std::size_t i = i0; i < i1; ++i) {
          scores[(i - i0) * n + j] = score(base + i * d, b, d, metric);
        }
      }
      for (std::size_t i = i0; i < i1; ++i) {
        const double* row_scores = scores.data() + (i - i0) * n;
        order.clear();
        for (std::size_t j = 0; j < n; ++j) {
          if (j != i) order.push_back(static_cast<std::uint32_t>(j));
        }
        const auto kth = order.begin() + static_cast<std::ptrdiff_t>(k);
        std::partial_sort(order.begin(), kth, order.end(), CloserFirst{row_scores});
        std::copy(order.begin(), kth, out.index.begin() + static_cast<std::ptrdiff_t>(i * k));
      }
    }
  }
  return out;
}

FasticaMoments fastica_moments(const Eigen::MatrixXd& w, const Eigen::MatrixXd& z) {
  const Eigen::Index m = w.rows();
  const Eigen::Index n = z.cols();
  constexpr Eigen::Index kChunk = 512;
  const Eigen::Index chunks = (n + kChunk - 1) / kChunk;

  std::vector<Eigen::MatrixXd> part_gzt(static_cast<std::size_t>(chunks));
  std::vector<Eigen::VectorXd> part_gp(static_cast<std::size_t>(chunks));

#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < chunks; ++c) {
    const Eigen::Index c0 = c * kChunk;
    const Eigen::Index len = std::min(kChunk, n - c0);
    const auto zc = z.middleCols(c0, len);
    Eigen::MatrixXd y = w * zc;
    // tanh through the vectorised exp: sign(x) * (1 - e) / (1 + e), e = exp(-2|x|).
    const Eigen::ArrayXXd e = (-2.0 * y.array().abs()).exp();
    y = y.array().sign() * (1.0 - e) / (1.0 + e);
    part_gp[static_cast<std::size_t>(c)] = (1.0 - y.array().square()).rowwise().sum();
    part_gzt[static_cast<std::size_t>(c)].noalias() = y * zc.transpose();
  }

  FasticaMoments out{Eigen::MatrixXd::Zero(m, m), Eigen::VectorXd::Zero(m)};
  for (Eigen::Index c = 0; c < chunks; ++c) {
    out.g_zt += part_gzt[static_cast<std::size_t>(c)];
    out.gp_mean += part_gp[static_cast<std::size_t>(c)];
  }
  out.g_zt /= static_cast<double>(n);
  out.gp_mean /= static_cast<double>(n);
  return out;
}

}  // namespace omp

}  // namespace embgeo::kernels
