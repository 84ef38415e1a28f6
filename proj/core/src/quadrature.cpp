#include "fockpart/quadrature.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "fockpart/errors.hpp"

namespace fockpart::quadrature {

namespace {

// Newton iteration on the Legendre recurrence; nodes are symmetric so only
// half of them are solved for.
Rule build_rule(int n) {
  Rule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 1; i <= half; ++i) {
    double z = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
    double z_prev;
    double deriv = 0.0;
    do {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      deriv = n * (z * p1 - p2) / (z * z - 1.0);
      z_prev = z;
      z -= p1 / deriv;
    } while (std::abs(z - z_prev) > 1e-15);
    rule.nodes[static_cast<std::size_t>(i - 1)] = -z;
    rule.nodes[static_cast<std::size_t>(n - i)] = z;
    const double w = 2.0 / ((1.0 - z * z) * deriv * deriv);
    rule.weights[static_cast<std::size_t>(i - 1)] = w;
    rule.weights[static_cast<std::size_t>(n - i)] = w;
  }
  return rule;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  detail::require(n >= 1, "gauss_legendre: need at least one node");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<Rule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Rule>(build_rule(n));
  return *slot;
}

double integrate(const std::function<double(double)>& f, double a, double b, int n) {
  const Rule& rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double halfw = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * f(mid + halfw * rule.nodes[i]);
  }
  return acc * halfw;
}

double integrate_log_scaled(const std::function<double(double)>& log_f, double a,
                            double b, int n) {
  const Rule& rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double halfw = 0.5 * (b - a);
  std::vector<double> logs(rule.nodes.size());
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    logs[i] = log_f(mid + halfw * rule.nodes[i]);
    peak = std::max(peak, logs[i]);
  }
  if (!std::isfinite(peak)) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * std::exp(logs[i] - peak);
  }
  return acc * halfw * std::exp(peak);
}

}  // namespace fockpart::quadrature
