#include "fockpart/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace fockpart::specfun {

namespace {

constexpr int kFactorialTableSize = 171;  // 170! is the last finite double

const std::array<double, kFactorialTableSize>& factorial_table() {
  static const auto table = [] {
    std::array<double, kFactorialTableSize> t{};
    t[0] = 1.0;
    for (int i = 1; i < kFactorialTableSize; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  return table;
}

template <typename Scalar>
void assoc_laguerre_sweep_impl(int alpha, Scalar w, std::span<Scalar> out) {
  if (out.empty()) return;
  out[0] = Scalar(1.0);
  if (out.size() == 1) return;
  out[1] = Scalar(1.0 + alpha) - w;
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    const double kd = static_cast<double>(k);
    out[k + 1] =
        ((Scalar(2.0 * kd + 1.0 + alpha) - w) * out[k] - (kd + alpha) * out[k - 1]) /
        (kd + 1.0);
  }
}

template <typename Scalar>
Scalar int_pow(Scalar base, int exp) {
  Scalar r(1.0);
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

template <typename Scalar>
Scalar hermite2_impl(int m, int n, Scalar x, Scalar y) {
  // H_{m,n}(x,y) = (-1)^n n! x^{m-n} Lhat_n^{(m-n)}(xy) for m >= n;
  // the explicit double-sum definition cancels catastrophically at large orders,
  // the recurrence does not.
  if (m < n) {
    std::swap(m, n);
    std::swap(x, y);
  }
  std::vector<Scalar> lhat(static_cast<std::size_t>(n) + 1);
  assoc_laguerre_sweep_impl<Scalar>(m - n, x * y, lhat);
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return sign * factorial(n) * int_pow(x, m - n) * lhat[static_cast<std::size_t>(n)];
}

}  // namespace

void validate_poly_index(const PolyIndex& idx) {
  detail::require(idx.m >= 0 && idx.n >= 0, "PolyIndex orders must be nonnegative");
  detail::require(idx.m <= kMaxPolyOrder && idx.n <= kMaxPolyOrder,
                  "PolyIndex order exceeds the bound 64");
}

double LogWeight::value() const {
  if (sign == 0) return 0.0;
  return sign * std::exp(log_magnitude);
}

LogWeight LogWeight::from_value(double v) {
  if (v == 0.0) return zero();
  return {std::log(std::abs(v)), v > 0.0 ? 1 : -1};
}

LogWeight LogWeight::from_log(double log_magnitude, int sign) {
  if (sign == 0) return zero();
  return {log_magnitude, sign > 0 ? 1 : -1};
}

double log_factorial(int n) {
  detail::require(n >= 0, "log_factorial: negative argument");
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double factorial(int n) {
  detail::require(n >= 0 && n < kFactorialTableSize,
                  "factorial: argument outside 0..170");
  return factorial_table()[static_cast<std::size_t>(n)];
}

double log_binomial(int n, int k) {
  detail::require(n >= 0 && k >= 0 && k <= n, "log_binomial: need 0 <= k <= n");
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double laguerre(int n, double x) {
  detail::require(n >= 0 && n <= kMaxPolyOrder, "laguerre: order outside 0..64");
  detail::require(std::isfinite(x), "laguerre: argument must be finite");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double laguerre_genfun_residual(double z, double x, int terms) {
  detail::require(std::abs(z) < 1.0, "laguerre_genfun_residual: series diverges for |z| >= 1");
  detail::require(std::isfinite(x), "laguerre_genfun_residual: x must be finite");
  detail::require(terms >= 1, "laguerre_genfun_residual: terms must be >= 1");

  const double closed = std::exp(z * x / (z - 1.0)) / (1.0 - z);
  double partial = 0.0;
  double zn = 1.0;
  double prev = 0.0, cur = 1.0;  // L_{-1}, L_0
  for (int n = 0; n < terms; ++n) {
    partial += cur * zn;
    zn *= z;
    const double next = ((2.0 * n + 1.0 - x) * cur - n * prev) / (n + 1.0);
    prev = cur;
    cur = next;
  }
  return std::abs(closed - partial);
}

std::complex<double> hermite2(const PolyIndex& idx, std::complex<double> x,
                              std::complex<double> y) {
  validate_poly_index(idx);
  return hermite2_impl<std::complex<double>>(idx.m, idx.n, x, y);
}

double hermite_laguerre_link_residual(int n, double x, double y) {
  detail::require(n >= 0 && n <= 30, "hermite_laguerre_link_residual: n outside 0..30");
  const double lag = laguerre(n, x * y);
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  const double herm = sign / factorial(n) * internal::hermite2_unchecked(n, n, x, y);
  return std::abs(lag - herm) / std::max(1.0, std::abs(lag));
}

double shifted_hermite_genfun_residual(const PolyIndex& idx, double lam, double x,
                                       double y, int terms) {
  validate_poly_index(idx);
  detail::require(lam > -1.0, "shifted_hermite_genfun_residual: lam <= -1 diverges");
  detail::require(std::abs(lam) < 1.0,
                  "shifted_hermite_genfun_residual: convergence needs |lam| < 1");
  detail::require(terms >= 1, "shifted_hermite_genfun_residual: terms must be >= 1");

  int m = idx.m, n = idx.n;
  double xx = x, yy = y;
  if (m < n) {  // H_{m,n}(x,y) = H_{n,m}(y,x)
    std::swap(m, n);
    std::swap(xx, yy);
  }
  const int alpha = m - n;

  // sum_{l<terms} lam^l/l! H_{l+m,l+n}(x,y)
  //   = x^alpha sum_l g_l Lhat_{l+n}^{(alpha)}(xy),
  // g_l = (-1)^{l+n} (l+n)! lam^l / l!, built by ratio ladder to keep the
  // factorials from ever being materialised on their own.
  std::vector<double> lhat(static_cast<std::size_t>(n + terms));
  internal::assoc_laguerre_sweep(alpha, xx * yy, lhat);
  const double xa = int_pow(xx, alpha);
  double g = ((n % 2 == 0) ? 1.0 : -1.0) * factorial(n);
  double partial = 0.0;
  for (int l = 0; l < terms; ++l) {
    partial += g * xa * lhat[static_cast<std::size_t>(l + n)];
    g *= -lam * (l + n + 1.0) / (l + 1.0);
  }

  const double root = std::sqrt(1.0 + lam);
  const double closed = std::pow(1.0 + lam, -0.5 * (n + m) - 1.0) *
                        std::exp(lam * xx * yy / (1.0 + lam)) *
                        internal::hermite2_unchecked(m, n, xx / root, yy / root);
  return std::abs(partial - closed) / std::max(1.0, std::abs(closed));
}

double gen_negbin_laguerre_residual(int n, double lam, double z, int terms) {
  detail::require(n >= 0 && n <= 20, "gen_negbin_laguerre_residual: n outside 0..20");
  detail::require(lam >= 0.0 && lam < 1.0,
                  "gen_negbin_laguerre_residual: need 0 <= lam < 1");
  detail::require(std::isfinite(z), "gen_negbin_laguerre_residual: z must be finite");
  detail::require(terms >= 1, "gen_negbin_laguerre_residual: terms must be >= 1");

  std::vector<double> lag(static_cast<std::size_t>(n + terms));
  internal::assoc_laguerre_sweep(0, z, lag);
  double coef = 1.0;  // (n+l)! (-lam)^l / (l! n!)
  double partial = 0.0;
  for (int l = 0; l < terms; ++l) {
    partial += coef * lag[static_cast<std::size_t>(n + l)];
    coef *= -lam * (n + l + 1.0) / (l + 1.0);
  }
  const double closed = std::pow(1.0 + lam, -n - 1.0) *
                        std::exp(lam * z / (1.0 + lam)) *
                        laguerre(n, z / (1.0 + lam));
  return std::abs(partial - closed);
}

LogWeight binom_weight(int n, int l, double sigma) {
  detail::require(n >= 0 && l >= 0 && l <= n, "binom_weight: need 0 <= l <= n");
  detail::require(sigma > 0.0 && sigma < 1.0, "binom_weight: sigma outside (0,1)");
  const double log_mag =
      log_binomial(n, l) + l * std::log(sigma) + (n - l) * std::log1p(-sigma);
  return LogWeight::from_log(log_mag, 1);
}

LogWeight negbin_weight(int s, int m, double gamma) {
  detail::require(s >= 0 && m >= 0, "negbin_weight: s, m must be nonnegative");
  detail::require(gamma > 0.0 && gamma < 1.0, "negbin_weight: gamma outside (0,1)");
  const double log_mag = log_binomial(m + s, m) + (s + 1) * std::log(gamma) +
                         m * std::log1p(-gamma);
  return LogWeight::from_log(log_mag, 1);
}

bool cauchy_rearrange_check(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return true;
  // Triangular order: sum_n sum_{l<=n} A_{n-l} B_l over the full padded range.
  double lhs = 0.0;
  const int na = static_cast<int>(a.size());
  const int nb = static_cast<int>(b.size());
  for (int n = 0; n <= na + nb - 2; ++n) {
    for (int l = std::max(0, n - na + 1); l <= std::min(n, nb - 1); ++l) {
      lhs += a[static_cast<std::size_t>(n - l)] * b[static_cast<std::size_t>(l)];
    }
  }
  // Rectangular order: sum_s sum_m A_s B_m.
  double sa = 0.0, sb = 0.0;
  for (double v : a) sa += v;
  for (double v : b) sb += v;
  const double rhs = sa * sb;
  return std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs));
}

namespace internal {

void assoc_laguerre_sweep(int alpha, double w, std::span<double> out) {
  assoc_laguerre_sweep_impl<double>(alpha, w, out);
}

void assoc_laguerre_sweep(int alpha, std::complex<double> w,
                          std::span<std::complex<double>> out) {
  assoc_laguerre_sweep_impl<std::complex<double>>(alpha, w, out);
}

double hermite2_unchecked(int m, int n, double x, double y) {
  return hermite2_impl<double>(m, n, x, y);
}

}  // namespace internal

}  // namespace fockpart::specfun
