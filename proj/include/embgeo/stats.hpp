#pragma once

#include <span>
#include <string>
#include <vector>

namespace embgeo {

/// Gini coefficient, sum_ij |v_i - v_j| / (2 n^2 mean(v)); lies in
/// [0, (n-1)/n]. Errors: TooShort (n < 2), NegativeEntry, ZeroMean.
double gini(std::span<const double> v);

/// Sample standard deviation (ddof = 1) over |mean|.
/// Errors: TooShort (n < 2), ZeroMean.
double coefficient_of_variation(std::span<const double> v);

/// Fractional ranks starting at 1; tied values share the mean of their ranks.
std::vector<double> mid_ranks(std::span<const double> v);

enum class PValueMethod { ExactPermutation, StudentT };

struct CorrelationResult {
  double rho = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  std::string marker;  // "", "*", "†", "‡"
  PValueMethod method = PValueMethod::StudentT;
};

/// Significance marker for a p-value: ‡ below 0.001, † below 0.01, * below 0.05.
std::string significance_marker(double p);
/// ASCII spelling of the same marker: "dd", "d", "s" or "".
std::string significance_marker_ascii(double p);

/// Spearman rank correlation with a two-sided p-value: exact permutation
/// distribution for n <= 9, Student t with n-2 degrees of freedom otherwise.
/// Errors: LengthMismatch, TooShort (n < 3), ConstantInput.
CorrelationResult spearman(std::span<const double> x, std::span<const double> y);

/// Two-sided p-value of a Spearman rho under the t approximation.
double spearman_t_pvalue(double rho, std::size_t n);

}  // namespace embgeo
