#pragma once

#include <cstddef>
#include <span>

namespace percomp {

/// Two-sided 95% normal quantile.
inline constexpr double kZ95 = 1.959963984540054;

struct MeanCI {
  double mean = 0.0;
  double half_width = 0.0;  // kZ95 * s / sqrt(n); zero when n < 2
  std::size_t n = 0;
};

MeanCI mean_ci(std::span<const double> xs);

/// Normal-approximation interval for a Bernoulli frequency k / n.
MeanCI proportion_ci(std::size_t successes, std::size_t trials);

/// Ordinary least squares y = intercept + slope * x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;  // residual-based; zero when fewer than 3 points
};

LineFit least_squares(std::span<const double> x, std::span<const double> y);

/// Type-7 (linear interpolation) sample quantile; q in [0, 1]. xs non-empty.
double quantile(std::span<const double> xs, double q);

}  // namespace percomp
