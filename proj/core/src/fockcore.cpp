#include "fockpart/fockcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fockpart/quadrature.hpp"

namespace fockpart::fock {

namespace {

using specfun::log_factorial;

constexpr std::complex<double> kI{0.0, 1.0};

double sqrt_falling_factorial(int n, int s) {
  // sqrt(n!/(n-s)!); falls back to log space once the product overflows.
  double prod = 1.0;
  for (int i = n - s + 1; i <= n; ++i) {
    prod *= i;
    if (std::isinf(prod)) {
      const double half_log = 0.5 * (log_factorial(n) - log_factorial(n - s));
      detail::require(half_log < 700.0, "ladder matrix element overflows double range");
      return std::exp(half_log);
    }
  }
  return std::sqrt(prod);
}

// One entry of the band of sum_l lam^l/l! a^{l+n} a+^{l+m}:
// <k+m-n| . |k> = sum_l lam^l/l! (k+l+m)! / sqrt(k! (k+m-n)!).
// The ladder truncates when a term drops below tol of the accumulator; the
// level budget mirrors what a cutoff-D matrix product could represent.
double shifted_antinormal_band_entry(int k, int m, int n, double lam, int dim) {
  const int j = k + m - n;
  if (j < 0) return 0.0;
  double term = std::exp(log_factorial(k + m) - 0.5 * log_factorial(k) -
                         0.5 * log_factorial(j));
  double acc = term;
  const int l_budget = dim - 1 - m - k;
  int small_streak = 0;
  for (int l = 0;; ++l) {
    if (l >= l_budget) {
      throw CutoffError(
          "shifted_antinormal_matrix_residual: series not converged within the "
          "cutoff headroom; increase dim",
          2 * (dim + m + n));
    }
    term *= lam * (k + l + m + 1) / (l + 1.0);
    acc += term;
    small_streak = (std::abs(term) < 1e-15 * std::abs(acc)) ? small_streak + 1 : 0;
    if (small_streak >= 2 && std::abs(lam) * (k + l + m + 2) / (l + 2.0) < 1.0) break;
  }
  return acc;
}

// <k+p-q| :e^{c a+a} a+^p a^q: |k> = sum_t c^t/t! sqrt(j!k!)/(k-q-t)!.
double normal_exp_monomial_entry(int k, double c, int p, int q) {
  const int j = k + p - q;
  if (j < 0 || k - q < 0) return 0.0;
  const double half_logs = 0.5 * (log_factorial(j) + log_factorial(k));
  double acc = 0.0;
  double ct = 1.0;  // c^t / t!
  for (int t = 0; t <= k - q; ++t) {
    acc += ct * std::exp(half_logs - log_factorial(k - q - t));
    ct *= c / (t + 1.0);
  }
  return acc;
}

struct DiskQuadResult {
  std::complex<double> value;
  int radial_nodes;
};

// (1/pi) int d2b f(b) with f given in polar form, radial Gauss-Legendre on
// [0, radius] and a uniform angular trapezoid (exact for the finite Fourier
// content of these integrands). Radial nodes grow by 16 until the value
// moves by less than step_tol.
template <typename PolarF>
DiskQuadResult disk_integral(const PolarF& f, double radius, int angular_nodes,
                             double step_tol) {
  const double dtheta = 2.0 * std::numbers::pi / angular_nodes;
  auto eval = [&](int nr) {
    const auto& rule = quadrature::gauss_legendre(nr);
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double r = 0.5 * radius * (rule.nodes[i] + 1.0);
      std::complex<double> ring{0.0, 0.0};
      for (int a = 0; a < angular_nodes; ++a) {
        ring += f(r, a * dtheta);
      }
      acc += rule.weights[i] * 0.5 * radius * r * ring * dtheta;
    }
    return acc / std::numbers::pi;
  };

  int nr = 48;
  std::complex<double> prev = eval(nr);
  while (nr < 512) {
    nr += 16;
    const std::complex<double> cur = eval(nr);
    if (std::abs(cur - prev) < step_tol) return {cur, nr};
    prev = cur;
  }
  std::ostringstream msg;
  msg << "disk quadrature did not stabilise below " << step_tol << " by " << nr
      << " radial nodes (last value " << prev << ")";
  throw ConvergenceError(msg.str());
}

}  // namespace

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
  detail::require(entries_.rows() == entries_.cols(), "DensityMatrix: matrix not square");
  detail::require(entries_.rows() >= 2 && entries_.rows() <= 4096,
                  "DensityMatrix: dim outside 2..4096");
}

DensityMatrix DensityMatrix::number_projector(int m, FockCutoff cutoff) {
  detail::require(m >= 0 && m < cutoff.dim, "number_projector: level outside cutoff");
  Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(cutoff.dim, cutoff.dim);
  e(m, m) = 1.0;
  return DensityMatrix(std::move(e));
}

double DensityMatrix::hermiticity_defect() const {
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const Eigen::MatrixXcd herm = 0.5 * (entries_ + entries_.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm,
                                                         Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool DensityMatrix::is_state(double herm_tol, double psd_floor, double trace_tol) const {
  return hermiticity_defect() <= herm_tol && min_eigenvalue() >= psd_floor &&
         std::abs(trace() - 1.0) <= trace_tol;
}

OrderedSeries OrderedSeries::from_coeffs(Ordering ordering,
                                         std::span<const double> coeffs) {
  detail::require(!coeffs.empty(), "OrderedSeries: empty coefficient list");
  std::vector<LogWeight> lw;
  lw.reserve(coeffs.size());
  for (double c : coeffs) {
    detail::require(std::isfinite(c), "OrderedSeries: non-finite coefficient");
    lw.push_back(LogWeight::from_value(c));
  }
  return OrderedSeries(ordering, std::move(lw),
                       std::vector<long double>(coeffs.begin(), coeffs.end()),
                       /*truncates=*/false);
}

OrderedSeries OrderedSeries::from_coeffs_extended(Ordering ordering,
                                                  std::span<const long double> coeffs) {
  detail::require(!coeffs.empty(), "OrderedSeries: empty coefficient list");
  std::vector<LogWeight> lw;
  lw.reserve(coeffs.size());
  for (long double c : coeffs) {
    detail::require(std::isfinite(static_cast<double>(c)),
                    "OrderedSeries: non-finite coefficient");
    lw.push_back(LogWeight::from_value(static_cast<double>(c)));
  }
  return OrderedSeries(ordering, std::move(lw),
                       std::vector<long double>(coeffs.begin(), coeffs.end()),
                       /*truncates=*/false);
}

OrderedSeries OrderedSeries::exponential(Ordering ordering, double lam, int terms) {
  detail::require(std::isfinite(lam), "OrderedSeries::exponential: lam not finite");
  detail::require(terms >= 1, "OrderedSeries::exponential: terms must be >= 1");
  if (ordering == Ordering::kAntinormal) {
    detail::require(std::abs(lam) < 1.0,
                    "OrderedSeries::exponential: antinormal diagonal series "
                    "diverges for |lam| >= 1");
  }
  std::vector<LogWeight> lw;
  lw.reserve(static_cast<std::size_t>(terms));
  if (lam == 0.0) {
    lw.push_back(LogWeight::from_value(1.0));
    OrderedSeries series(ordering, std::move(lw), {1.0}, /*truncates=*/false);
    series.is_exponential_ = true;
    series.exp_lambda_ = 0.0;
    return series;
  }
  const double log_abs_lam = std::log(std::abs(lam));
  const int base_sign = lam > 0.0 ? 1 : -1;
  int sign = 1;
  for (int l = 0; l < terms; ++l) {
    lw.push_back(LogWeight::from_log(l * log_abs_lam - log_factorial(l), sign));
    sign *= base_sign;
  }
  OrderedSeries series(ordering, std::move(lw), {}, /*truncates=*/true);
  series.is_exponential_ = true;
  series.exp_lambda_ = lam;
  return series;
}

double normal_diag_eval(const OrderedSeries& series, int m) {
  detail::require(series.ordering() == Ordering::kNormal,
                  "normal_diag_eval: series is not normally ordered");
  detail::require(m >= 0, "normal_diag_eval: negative level");
  const int lmax = std::min(m, series.size() - 1);  // a^l |m> = 0 for l > m
  if (series.is_exponential()) {
    // term_l = lam^l/l! * m!/(m-l)! by the binomial ladder, with Neumaier
    // compensation: for integer and dyadic lam every term is exact, so the
    // compensated alternating sum is too (the lam = -1 vacuum projector
    // collapses to the Kronecker delta without round-off).
    const double lam = series.exp_lambda();
    double term = 1.0;
    double acc = 0.0;
    double comp = 0.0;
    for (int l = 0; l <= lmax; ++l) {
      const double t = acc + term;
      if (std::abs(acc) >= std::abs(term)) {
        comp += (acc - t) + term;
      } else {
        comp += (term - t) + acc;
      }
      acc = t;
      term = term * (lam * (m - l)) / (l + 1.0);
    }
    return acc + comp;
  }
  const bool exact = series.has_exact_coeffs();
  long double acc_ext = 0.0L;  // cancellation-prone lists ride on 80-bit
  double acc = 0.0;
  double ff = 1.0;       // m!/(m-l)!
  long double ff_ext = 1.0L;
  double log_ff = 0.0;
  for (int l = 0; l <= lmax; ++l) {
    const LogWeight& c = series.coeff(l);
    if (c.sign != 0) {
      if (exact && std::isfinite(static_cast<double>(ff_ext))) {
        acc_ext += series.exact_coeff(l) * ff_ext;
      } else if (std::isfinite(ff) && c.log_magnitude > -690.0) {
        acc += c.value() * ff;
      } else {
        acc += c.sign * std::exp(c.log_magnitude + log_ff);
      }
    }
    ff *= (m - l);
    ff_ext *= (m - l);
    log_ff += std::log(static_cast<double>(m - l));
  }
  return static_cast<double>(acc_ext) + acc;
}

double antinormal_diag_eval(const OrderedSeries& series, int m) {
  detail::require(series.ordering() == Ordering::kAntinormal,
                  "antinormal_diag_eval: series is not antinormally ordered");
  detail::require(m >= 0, "antinormal_diag_eval: negative level");

  if (series.is_exponential()) {
    const double lam = series.exp_lambda();
    double term = 1.0;
    double acc = 0.0;
    int small_streak = 0;
    for (int l = 0; l < series.size(); ++l) {
      acc += term;
      term *= lam * (m + l + 1) / (l + 1.0);
      if (std::abs(term) > 1e250) {
        throw ConvergenceError("antinormal_diag_eval: series terms diverge");
      }
      small_streak = (std::abs(term) < 1e-16 * std::abs(acc)) ? small_streak + 1 : 0;
      if (small_streak >= 2) return acc;
    }
    if (series.truncates_infinite_series() && small_streak < 2) {
      throw ConvergenceError(
          "antinormal_diag_eval: coefficient list ended before the series "
          "converged; increase the series length");
    }
    return acc;
  }

  const double log_m_fact = log_factorial(m);
  double acc = 0.0;
  double term = 0.0;
  int last_nonzero = -2;  // ladder anchor; -2 forces a fresh anchor at l = 0
  int small_streak = 0;
  for (int l = 0; l < series.size(); ++l) {
    const LogWeight& c = series.coeff(l);
    if (c.sign == 0) continue;
    if (last_nonzero == l - 1 && l > 0) {
      const LogWeight& p = series.coeff(l - 1);
      term *= (c.sign * p.sign) * std::exp(c.log_magnitude - p.log_magnitude) *
              (m + l);
    } else {
      term = c.sign * std::exp(c.log_magnitude + log_factorial(m + l) - log_m_fact);
    }
    last_nonzero = l;
    acc += term;
    if (std::abs(term) > 1e250) {
      throw ConvergenceError("antinormal_diag_eval: series terms diverge");
    }
    if (series.truncates_infinite_series()) {
      small_streak = (std::abs(term) < 1e-16 * std::abs(acc)) ? small_streak + 1 : 0;
      if (small_streak >= 2) return acc;
    }
  }
  if (series.truncates_infinite_series() && small_streak < 2) {
    throw ConvergenceError(
        "antinormal_diag_eval: coefficient list ended before the series "
        "converged; increase the series length");
  }
  return acc;
}

double ordered_exp_conversion_residual(double lam, int levels) {
  detail::require(lam > 0.0 && lam < 1.0,
                  "ordered_exp_conversion_residual: lam outside (0,1)");
  detail::require(levels >= 1, "ordered_exp_conversion_residual: levels must be >= 1");

  // length needed at the slowest level: scan the term logs until they fall
  // 40 nats below the closed-form magnitude (the near-threshold decay is far
  // slower than the asymptotic ratio lam suggests)
  const int top = levels - 1;
  const double log_target = -(top + 1) * std::log1p(-lam) - 40.0;
  int anti_len = 1 << 20;
  for (int l = 8; l < (1 << 20); l += 8) {
    const double log_term = l * std::log(lam) + std::lgamma(top + l + 1.0) -
                            std::lgamma(l + 1.0) - std::lgamma(top + 1.0);
    if (log_term < log_target && lam * (top + l + 1) < (l + 1)) {
      anti_len = l + 32;
      break;
    }
  }
  const auto anti = OrderedSeries::exponential(Ordering::kAntinormal, lam, anti_len);
  const auto norm =
      OrderedSeries::exponential(Ordering::kNormal, lam / (1.0 - lam), levels + 1);
  const double prefactor = 1.0 / (1.0 - lam);

  double worst = 0.0;
  for (int m = 0; m < levels; ++m) {
    const double lhs = antinormal_diag_eval(anti, m);
    const double rhs = prefactor * normal_diag_eval(norm, m);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
  }
  return worst;
}

Eigen::MatrixXd ladder_power_matrix(int s, FockCutoff cutoff) {
  detail::require(s >= 0 && s < cutoff.dim, "ladder_power_matrix: s outside 0..dim-1");
  Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(cutoff.dim, cutoff.dim);
  for (int n = s; n < cutoff.dim; ++n) {
    mat(n - s, n) = sqrt_falling_factorial(n, s);
  }
  return mat;
}

Eigen::MatrixXd normal_monomial_matrix(int p, int q, FockCutoff cutoff) {
  detail::require(p >= 0 && q >= 0, "normal_monomial_matrix: negative power");
  Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(cutoff.dim, cutoff.dim);
  for (int k = q; k < cutoff.dim; ++k) {
    const int j = k + p - q;
    if (j < 0 || j >= cutoff.dim) continue;
    mat(j, k) = sqrt_falling_factorial(k, q) * sqrt_falling_factorial(j, p);
  }
  return mat;
}

double operator_identity_matrix_residual(const PolyIndex& idx, FockCutoff cutoff) {
  specfun::validate_poly_index(idx);
  const int m = idx.m, n = idx.n;
  const int block = cutoff.dim - m - n;
  detail::require(block > m + n, "operator_identity_matrix_residual: cutoff too small "
                                 "for the truncation buffer");

  const Eigen::MatrixXd lhs =
      ladder_power_matrix(n, cutoff) * ladder_power_matrix(m, cutoff).transpose();
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(cutoff.dim, cutoff.dim);
  for (int l = 0; l <= std::min(m, n); ++l) {
    const double coef = std::exp(log_factorial(m) + log_factorial(n) -
                                 log_factorial(l) - log_factorial(m - l) -
                                 log_factorial(n - l));
    rhs += coef * normal_monomial_matrix(m - l, n - l, cutoff);
  }
  const auto lhs_block = lhs.topLeftCorner(block, block);
  const auto rhs_block = rhs.topLeftCorner(block, block);
  return (lhs_block - rhs_block).norm() / std::max(1.0, lhs_block.norm());
}

double shifted_antinormal_matrix_residual(const PolyIndex& idx, double lam,
                                          FockCutoff cutoff) {
  specfun::validate_poly_index(idx);
  const int m = idx.m, n = idx.n;
  detail::require(m <= 4 && n <= 4,
                  "shifted_antinormal_matrix_residual: indices must be <= 4");
  detail::require(std::abs(lam) < 1.0,
                  "shifted_antinormal_matrix_residual: |lam| must be < 1");
  const int block = std::min(16, cutoff.dim - m - n - 1);
  detail::require(block >= 4, "shifted_antinormal_matrix_residual: cutoff too small");

  // Both sides live on the band j = k + m - n; compare band entries directly.
  const double c = lam / (1.0 - lam);
  double num = 0.0, den = 0.0;
  for (int k = 0; k < block; ++k) {
    const double lhs = shifted_antinormal_band_entry(k, m, n, lam, cutoff.dim);
    double rhs = 0.0;
    for (int l = 0; l <= std::min(m, n); ++l) {
      const double coef = std::exp(log_factorial(m) + log_factorial(n) -
                                   log_factorial(l) - log_factorial(m - l) -
                                   log_factorial(n - l)) *
                          std::pow(1.0 - lam, l - (m + n) - 1.0);
      rhs += coef * normal_exp_monomial_entry(k, c, m - l, n - l);
    }
    num += (lhs - rhs) * (lhs - rhs);
    den += rhs * rhs;
  }
  return std::sqrt(num) / std::max(1.0, std::sqrt(den));
}

double gaussian_integral_check(const PolyIndex& idx, std::complex<double> alpha) {
  specfun::validate_poly_index(idx);
  const int m = idx.m, n = idx.n;
  detail::require(m <= 3 && n <= 3, "gaussian_integral_check: indices must be <= 3");
  detail::require(std::abs(alpha) <= 1.5, "gaussian_integral_check: |alpha| must be <= 1.5");

  const double radius = std::abs(alpha) + 8.0;
  const auto integrand = [&](double r, double theta) {
    const std::complex<double> b = std::polar(r, theta);
    const double expo = -r * r + 2.0 * r * std::real(std::polar(1.0, theta) *
                                                     std::conj(alpha));
    std::complex<double> mono{1.0, 0.0};
    for (int i = 0; i < n; ++i) mono *= b;
    for (int i = 0; i < m; ++i) mono *= std::conj(b);
    return mono * std::exp(expo);
  };
  const auto quad = disk_integral(integrand, radius, /*angular_nodes=*/128,
                                  /*step_tol=*/1e-8);

  // (-i)^(m+n), exact
  constexpr std::complex<double> phases[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  const std::complex<double> phase = phases[(m + n) % 4];
  const std::complex<double> rhs =
      phase *
      specfun::hermite2({m, n}, kI * std::conj(alpha), kI * alpha) *
      std::exp(std::norm(alpha));
  return std::abs(quad.value - rhs);
}

double coherent_completeness_residual(int levels) {
  detail::require(levels >= 1 && levels <= 12,
                  "coherent_completeness_residual: levels outside 1..12");
  const double radius = 8.0 + std::sqrt(2.0 * levels);
  double worst = 0.0;
  for (int j = 0; j < levels; ++j) {
    for (int k = j; k < levels; ++k) {
      const double norm = std::exp(-0.5 * (log_factorial(j) + log_factorial(k)));
      const auto integrand = [&](double r, double theta) {
        // <j|alpha><alpha|k> = e^{-r^2} r^{j+k} e^{i(j-k)theta} / sqrt(j!k!)
        return norm * std::exp(-r * r + (j + k) * std::log(r)) *
               std::polar(1.0, (j - k) * theta);
      };
      const auto quad = disk_integral(integrand, radius, /*angular_nodes=*/64,
                                      /*step_tol=*/1e-8);
      const double target = (j == k) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(quad.value - target));
    }
  }
  return worst;
}

double antinormal_exp_diag_integral(double lam, int m) {
  detail::require(lam < 1.0, "antinormal_exp_diag_integral: lam must be < 1");
  detail::require(m >= 0, "antinormal_exp_diag_integral: negative level");
  const double s = 1.0 - lam;
  const double radius = (m + 14.0 * std::sqrt(m + 1.0) + 45.0) / s;
  const double log_norm = log_factorial(m);
  const auto log_f = [&](double u) {
    if (u <= 0.0) return m == 0 ? -s * u - log_norm
                                : -std::numeric_limits<double>::infinity();
    return m * std::log(u) - s * u - log_norm;
  };
  int nodes = 128;
  double prev = quadrature::integrate_log_scaled(log_f, 0.0, radius, nodes);
  while (nodes < 4096) {
    nodes *= 2;
    const double cur = quadrature::integrate_log_scaled(log_f, 0.0, radius, nodes);
    if (std::abs(cur - prev) <= 1e-13 * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace fockpart::fock
