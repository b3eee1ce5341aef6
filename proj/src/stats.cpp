#include "embgeo/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "embgeo/error.hpp"

namespace embgeo {

double gini(std::span<const double> v) {
  const std::size_t n = v.size();
  if (n < 2) throw Error(ErrorCode::TooShort, "gini needs at least 2 values");
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] < 0.0) {
      throw Error(ErrorCode::NegativeEntry, "gini: negative entry at index " + std::to_string(i), i);
    }
  }
  const double sum = std::accumulate(v.begin(), v.end(), 0.0);
  if (sum == 0.0) {
    throw Error(ErrorCode::ZeroMean, "gini undefined for an all-zero profile (DegenerateProfile)");
  }
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  // sum_ij |v_i - v_j| = 2 * sum_{i < n/2} (n - 1 - 2i) (s[n-1-i] - s[i]) over
  // the sorted values; pairing the extremes keeps a constant vector exactly 0.
  double acc = 0.0;
  for (std::size_t i = 0; i < n / 2; ++i) {
    acc += static_cast<double>(n - 1 - 2 * i) * (s[n - 1 - i] - s[i]);
  }
  const double mean = sum / static_cast<double>(n);
  return acc / (static_cast<double>(n) * static_cast<double>(n) * mean);
}

double coefficient_of_variation(std::span<const double> v) {
  const std::size_t n = v.size();
  if (n < 2) throw Error(ErrorCode::TooShort, "coefficient of variation needs at least 2 values");
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
  if (mean == 0.0) throw Error(ErrorCode::ZeroMean, "coefficient of variation undefined at zero mean");
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(n - 1)) / std::abs(mean);
}

std::vector<double> mid_ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && v[order[j]] == v[order[i]]) ++j;
    // positions i..j-1 hold ranks i+1..j
    const double r = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) ranks[order[t]] = r;
    i = j;
  }
  return ranks;
}

std::string significance_marker(double p) {
  if (p < 0.001) return "‡";
  if (p < 0.01) return "†";
  if (p < 0.05) return "*";
  return "";
}

std::string significance_marker_ascii(double p) {
  if (p < 0.001) return "dd";
  if (p < 0.01) return "d";
  if (p < 0.05) return "s";
  return "";
}

namespace {

struct Centered {
  std::vector<double> values;
  double ss = 0.0;
};

Centered center(const std::vector<double>& r) {
  const double mean = std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(r.size());
  Centered c;
  c.values.reserve(r.size());
  for (double x : r) {
    c.values.push_back(x - mean);
    c.ss += (x - mean) * (x - mean);
  }
  return c;
}

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

double exact_permutation_pvalue(const Centered& cx, const Centered& cy, double rho) {
  const std::size_t n = cx.values.size();
  const double denom = std::sqrt(cx.ss * cy.ss);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  const double threshold = std::abs(rho) - 1e-12;
  std::uint64_t extreme = 0;
  std::uint64_t total = 0;
  do {
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) sxy += cx.values[i] * cy.values[perm[i]];
    if (std::abs(sxy / denom) >= threshold) ++extreme;
    ++total;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(extreme) / static_cast<double>(total);
}

}  // namespace

double spearman_t_pvalue(double rho, std::size_t n) {
  if (n < 3) throw Error(ErrorCode::TooShort, "t approximation needs n >= 3");
  if (std::abs(rho) >= 1.0) return 0.0;
  const double dof = static_cast<double>(n - 2);
  const double t = rho * std::sqrt(dof / ((1.0 - rho) * (1.0 + rho)));
  boost::math::students_t_distribution<double> dist(dof);
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
}

CorrelationResult spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::LengthMismatch, "spearman: lengths " + std::to_string(x.size()) +
                                               " and " + std::to_string(y.size()) + " differ");
  }
  const std::size_t n = x.size();
  if (n < 3) throw Error(ErrorCode::TooShort, "spearman needs at least 3 samples");
  for (double v : x) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue, "spearman: non-finite input");
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue, "spearman: non-finite input");
  }
  const auto cx = center(mid_ranks(x));
  const auto cy = center(mid_ranks(y));
  if (cx.ss == 0.0 || cy.ss == 0.0) {
    throw Error(ErrorCode::ConstantInput, "spearman undefined for a constant input vector");
  }
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) sxy += cx.values[i] * cy.values[i];

  CorrelationResult r;
  r.n = n;
  r.rho = clamp_unit(sxy / std::sqrt(cx.ss * cy.ss));
  if (n <= 9) {
    r.method = PValueMethod::ExactPermutation;
    r.p_value = exact_permutation_pvalue(cx, cy, r.rho);
  } else {
    r.method = PValueMethod::StudentT;
    r.p_value = spearman_t_pvalue(r.rho, n);
  }
  r.marker = significance_marker(r.p_value);
  return r;
}

}  // namespace embgeo
