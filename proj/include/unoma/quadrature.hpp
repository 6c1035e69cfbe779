#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "unoma/distributions.hpp"

namespace unoma {

/// Gauss-Chebyshev discretization of the uniform-disk distance integral.
/// Node u carries a weight and the bounded path-loss factor 1 + r_u^alpha at
/// the mapped radius r_u = R_D (theta_u + 1) / 2.
struct ChebyshevTable {
  std::vector<double> theta;            // cos((2u-1)pi/(2U)), decreasing
  std::vector<double> weight;           // (pi/2U) sqrt(1-theta^2) (theta+1), positive
  std::vector<double> distance_factor;  // 1 + (R_D (theta+1)/2)^alpha, >= 1
  int nodes = 0;
};

inline ChebyshevTable build_chebyshev_table(int nodes, double disk_radius,
                                            double path_loss_exp) {
  if (nodes < 1) throw std::domain_error("build_chebyshev_table: need at least one node");
  ChebyshevTable t;
  t.nodes = nodes;
  t.theta.reserve(nodes);
  t.weight.reserve(nodes);
  t.distance_factor.reserve(nodes);
  const double pi = std::numbers::pi;
  for (int u = 1; u <= nodes; ++u) {
    double th = std::cos((2.0 * u - 1.0) / (2.0 * nodes) * pi);
    t.theta.push_back(th);
    t.weight.push_back(pi / (2.0 * nodes) * std::sqrt(1.0 - th * th) * (th + 1.0));
    t.distance_factor.push_back(
        1.0 + std::pow(disk_radius * (th + 1.0) / 2.0, path_loss_exp));
  }
  return t;
}

/// Gauss-Laguerre rule for integrals against e^{-t} on [0, inf).
/// Nodes by Newton iteration on the three-term recurrence; exact for
/// polynomials of degree <= 2*nodes - 1.
struct GaussLaguerreRule {
  std::vector<double> node;
  std::vector<double> weight;
  int nodes = 0;
};

inline GaussLaguerreRule build_gauss_laguerre(int nodes) {
  if (nodes < 1) throw std::domain_error("build_gauss_laguerre: need at least one node");
  GaussLaguerreRule rule;
  rule.nodes = nodes;
  rule.node.resize(nodes);
  rule.weight.resize(nodes);
  const int n = nodes;
  for (int i = 0; i < n; ++i) {
    double z;
    if (i == 0)
      z = 3.0 / (1.0 + 2.4 * n);
    else if (i == 1)
      z = rule.node[0] + 15.0 / (1.0 + 2.5 * n);
    else
      z = rule.node[i - 1] +
          (rule.node[i - 1] - rule.node[i - 2]) * (1.0 + 2.55 * (i - 1)) / (1.9 * (i - 1));
    double p1 = 1.0, p2 = 0.0;
    for (int it = 0; it < 100; ++it) {
      p1 = 1.0;
      p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0 - z) * p2 - (j - 1.0) * p3) / j;
      }
      double dp = n * (p1 - p2) / z;
      double z1 = z;
      z = z1 - p1 / dp;
      if (std::abs(z - z1) <= 1e-15 * std::abs(z)) break;
    }
    rule.node[i] = z;
    double dp = n * (p1 - p2) / z;
    rule.weight[i] = -1.0 / (dp * n * p2);
  }
  return rule;
}

/// Approximates \int_0^inf y^{K-1} e^{-y/omega} f(y) dy with the substitution
/// t = y/omega; with f == 1 this is Gamma(K) omega^K up to rule exactness.
template <typename F>
double integrate_semi_infinite(F&& f, int shape, double omega,
                               const GaussLaguerreRule& rule) {
  if (shape < 1) throw std::domain_error("integrate_semi_infinite: shape must be >= 1");
  if (!(omega > 0.0)) throw std::domain_error("integrate_semi_infinite: omega must be positive");
  double sum = 0.0;
  for (int i = 0; i < rule.nodes; ++i) {
    double t = rule.node[i];
    sum += rule.weight[i] * std::pow(t, shape - 1) * f(omega * t);
  }
  return std::pow(omega, shape) * sum;
}

/// E[f(Y)] for Y ~ Erlang(shape, omega); the normalized companion of
/// integrate_semi_infinite (the omega^K Gamma(K) factor cancels).
template <typename F>
double erlang_expectation(F&& f, int shape, double omega, const GaussLaguerreRule& rule) {
  if (shape < 1) throw std::domain_error("erlang_expectation: shape must be >= 1");
  if (!(omega > 0.0)) throw std::domain_error("erlang_expectation: omega must be positive");
  double sum = 0.0;
  for (int i = 0; i < rule.nodes; ++i) {
    double t = rule.node[i];
    sum += rule.weight[i] * std::pow(t, shape - 1) * f(omega * t);
  }
  return sum / factorial_d(shape - 1);
}

}  // namespace unoma
