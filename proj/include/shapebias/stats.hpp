#pragma once

#include <cstddef>
#include <span>

namespace shapebias::stats {

// Sample Pearson correlation (two-pass, mean-centred). Throws
// Error(Input) for length mismatch or n < 3, Error(DegenerateSeries) when
// either series is constant.
double pearson(std::span<const double> x, std::span<const double> y);

struct PValue {
  double p = 1.0;
  bool clamped = false;  // true p was below kMinPValue
};

inline constexpr double kMinPValue = 1e-300;

// Two-sided p for H0: rho = 0, from Student's t with n - 2 degrees of freedom.
// Uses P(|T| > t) = I_{1-r^2}((n-2)/2, 1/2).
PValue pearson_p_value_detail(double r, std::size_t n);
double pearson_p_value(double r, std::size_t n);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Least squares y = slope * x + intercept. Throws Error(DegenerateSeries)
// when x is constant.
LinearFit ols_fit(std::span<const double> x, std::span<const double> y);

// Regularized incomplete beta I_x(a, b), continued fraction via modified
// Lentz with relative tolerance 1e-12 (and the symmetry I_x(a,b) =
// 1 - I_{1-x}(b,a) past the mean).
double incomplete_beta(double a, double b, double x);

// log I_x(a, b) for x below the symmetry point; stays finite deep in the tail.
double log_incomplete_beta_lower(double a, double b, double x);

}  // namespace shapebias::stats
