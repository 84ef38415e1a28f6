#ifndef FOCKPART_QUADRATURE_HPP
#define FOCKPART_QUADRATURE_HPP

#include <functional>
#include <span>
#include <vector>

namespace fockpart::quadrature {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Returns the n-point Gauss-Legendre rule. Tables are computed once by
/// Newton iteration and shared read-only afterwards.
const Rule& gauss_legendre(int n);

/// Integrates f over [a, b] with the n-point rule.
double integrate(const std::function<double(double)>& f, double a, double b, int n);

/// Integrates exp(log_f(u)) over [a, b] with the n-point rule, rescaling by
/// the largest log so sharply peaked positive integrands neither overflow
/// nor underflow. log_f may return -inf where the integrand vanishes.
double integrate_log_scaled(const std::function<double(double)>& log_f, double a,
                            double b, int n);

}  // namespace fockpart::quadrature

#endif  // FOCKPART_QUADRATURE_HPP
