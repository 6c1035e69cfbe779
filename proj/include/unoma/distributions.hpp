#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace unoma {

/// Factorial in double precision. Fine up to n ~ 20 (exact to 2^53 until 18!,
/// representable far beyond); the library documents M <= 20 users.
inline double factorial_d(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline double binomial_d(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

/// CDF of a unit-scale Erlang(shape) variable: 1 - e^{-y} sum_{i<K} y^i/i!.
/// For small y the direct form cancels catastrophically, so the complementary
/// series e^{-y} sum_{i>=K} y^i/i! is used; it keeps full relative precision
/// down to subnormal results (needed by high-SNR tail evaluations).
inline double erlang_cdf(double y, int shape) {
  if (shape < 1) throw std::domain_error("erlang_cdf: shape must be >= 1");
  if (!(y >= 0.0)) throw std::domain_error("erlang_cdf: negative argument");
  if (y == 0.0) return 0.0;
  if (y < shape + 1.0) {
    double term = std::pow(y, shape) / factorial_d(shape);
    double sum = term;
    for (int j = 1; j < 500; ++j) {
      term *= y / (shape + j);
      sum += term;
      if (term <= sum * 1e-17) break;
    }
    return std::exp(-y) * sum;
  }
  double partial = 0.0;
  double term = 1.0;
  for (int i = 0; i < shape; ++i) {
    partial += term;
    term *= y / (i + 1);
  }
  return std::min(1.0, 1.0 - std::exp(-y) * partial);
}

/// Density of an Erlang(shape, scale) variable: y^{K-1} e^{-y/w} / ((K-1)! w^K).
inline double erlang_pdf(double y, int shape, double scale) {
  if (shape < 1) throw std::domain_error("erlang_pdf: shape must be >= 1");
  if (!(scale > 0.0)) throw std::domain_error("erlang_pdf: scale must be positive");
  if (!(y >= 0.0)) throw std::domain_error("erlang_pdf: negative argument");
  if (y == 0.0) return shape == 1 ? 1.0 / scale : 0.0;
  double t = y / scale;
  return std::pow(t, shape - 1) * std::exp(-t) / (factorial_d(shape - 1) * scale);
}

/// Order-statistics transform: probability that the rank-th smallest of
/// `population` i.i.d. draws lies below a point whose marginal CDF value is t.
/// Equals the regularized incomplete beta I_t(rank, population-rank+1),
/// written as the finite alternating sum
///   phi * sum_p C(pop-rank, p) (-1)^p t^{rank+p} / (rank+p),
/// phi = pop!/((pop-rank)!(rank-1)!).
/// t is clamped into [0,1] first: quadrature approximations of the marginal
/// CDF can overshoot 1 slightly, and the polynomial is only monotone on [0,1].
inline double order_stat_transform(double t, int rank, int population) {
  if (rank < 1 || rank > population)
    throw std::domain_error("order_stat_transform: rank out of range");
  t = std::clamp(t, 0.0, 1.0);
  double phi = factorial_d(population) /
               (factorial_d(population - rank) * factorial_d(rank - 1));
  double tp = std::pow(t, rank);
  double sum = 0.0;
  double sign = 1.0;
  for (int p = 0; p <= population - rank; ++p) {
    sum += sign * binomial_d(population - rank, p) * tp / (rank + p);
    tp *= t;
    sign = -sign;
  }
  return std::clamp(phi * sum, 0.0, 1.0);
}

/// CDF of the rank-th order statistic given the unsorted marginal CDF.
template <typename Cdf>
double order_stat_cdf(Cdf&& unsorted_cdf, double z, int rank, int population) {
  return order_stat_transform(std::forward<Cdf>(unsorted_cdf)(z), rank, population);
}

}  // namespace unoma
