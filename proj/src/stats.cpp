#include "shapebias/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "shapebias/error.hpp"

namespace shapebias::stats {

namespace {

constexpr double kBetaTolerance = 1e-12;
constexpr int kBetaMaxIterations = 10000;

void check_series(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::Input, "series lengths differ (" + std::to_string(x.size()) + " vs " +
                                      std::to_string(y.size()) + ")");
  }
  if (x.size() < 3) {
    throw Error(ErrorKind::Input, "need at least 3 observations, got " + std::to_string(x.size()));
  }
}

struct Moments {
  double mean_x = 0.0, mean_y = 0.0;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
};

Moments centred_moments(std::span<const double> x, std::span<const double> y) {
  Moments m;
  const auto n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    m.mean_x += x[i];
    m.mean_y += y[i];
  }
  m.mean_x /= n;
  m.mean_y /= n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - m.mean_x;
    const double dy = y[i] - m.mean_y;
    m.sxx += dx * dx;
    m.syy += dy * dy;
    m.sxy += dx * dy;
  }
  return m;
}

// Continued fraction for I_x(a,b) (without the front factor).
double beta_continued_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kBetaMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kBetaTolerance) return h;
  }
  throw Error(ErrorKind::Data, "incomplete beta continued fraction did not converge");
}

double log_front_factor(double a, double b, double x) {
  return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
         b * std::log1p(-x) - std::log(a);
}

}  // namespace

double log_incomplete_beta_lower(double a, double b, double x) {
  if (x <= 0.0) return -std::numeric_limits<double>::infinity();
  return log_front_factor(a, b, x) + std::log(beta_continued_fraction(a, b, x));
}

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0) || !(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorKind::Input, "incomplete beta arguments out of domain");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  if (x < (a + 1.0) / (a + b + 2.0)) return std::exp(log_incomplete_beta_lower(a, b, x));
  return 1.0 - std::exp(log_incomplete_beta_lower(b, a, 1.0 - x));
}

double pearson(std::span<const double> x, std::span<const double> y) {
  check_series(x, y);
  const auto m = centred_moments(x, y);
  if (!(m.sxx > 0.0) || !(m.syy > 0.0)) {
    throw Error(ErrorKind::DegenerateSeries, "series has zero variance");
  }
  return std::clamp(m.sxy / std::sqrt(m.sxx * m.syy), -1.0, 1.0);
}

PValue pearson_p_value_detail(double r, std::size_t n) {
  if (n < 3) throw Error(ErrorKind::Input, "p-value needs n >= 3, got " + std::to_string(n));
  if (!std::isfinite(r) || std::abs(r) > 1.0) {
    throw Error(ErrorKind::Input, "correlation " + std::to_string(r) + " outside [-1,1]");
  }
  const double abs_r = std::abs(r);
  if (abs_r == 1.0) return {0.0, false};
  if (abs_r == 0.0) return {1.0, false};

  const double a = 0.5 * static_cast<double>(n - 2);
  const double b = 0.5;
  const double x = (1.0 - abs_r) * (1.0 + abs_r);  // df / (df + t^2)
  if (x >= (a + 1.0) / (a + b + 2.0)) {
    const double p = 1.0 - std::exp(log_incomplete_beta_lower(b, a, 1.0 - x));
    return {std::clamp(p, 0.0, 1.0), false};
  }
  const double log_p = log_incomplete_beta_lower(a, b, x);
  if (log_p < std::log(kMinPValue)) return {kMinPValue, true};
  return {std::clamp(std::exp(log_p), 0.0, 1.0), false};
}

double pearson_p_value(double r, std::size_t n) { return pearson_p_value_detail(r, n).p; }

LinearFit ols_fit(std::span<const double> x, std::span<const double> y) {
  check_series(x, y);
  const auto m = centred_moments(x, y);
  if (!(m.sxx > 0.0)) throw Error(ErrorKind::DegenerateSeries, "x series has zero variance");
  const double slope = m.sxy / m.sxx;
  return {slope, m.mean_y - slope * m.mean_x};
}

}  // namespace shapebias::stats
