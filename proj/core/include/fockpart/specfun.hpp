#ifndef FOCKPART_SPECFUN_HPP
#define FOCKPART_SPECFUN_HPP

#include <complex>
#include <span>
#include <vector>

#include "fockpart/errors.hpp"

namespace fockpart::specfun {

/// Index pair (m, n) of a two-variable Hermite polynomial H_{m,n}.
/// Orders are capped at 64 at the API boundary; larger orders only ever
/// appear inside series sweeps, which use the unchecked internals.
struct PolyIndex {
  int m = 0;
  int n = 0;
};

inline constexpr int kMaxPolyOrder = 64;

void validate_poly_index(const PolyIndex& idx);

/// A signed weight held as sign * exp(log_magnitude), so that binomial and
/// negative-binomial coefficients with indices far past 170 stay finite.
/// sign == 0 encodes an exact zero (log_magnitude is then ignored).
struct LogWeight {
  double log_magnitude = 0.0;
  int sign = 0;

  double value() const;
  static LogWeight zero() { return {0.0, 0}; }
  static LogWeight from_value(double v);
  static LogWeight from_log(double log_magnitude, int sign);
};

/// log(n!) for integer n >= 0.
double log_factorial(int n);

/// n! as a double; exact up to the 170! overflow limit, throws above it.
double factorial(int n);

/// log C(n, k) for integers 0 <= k <= n.
double log_binomial(int n, int k);

/// Laguerre polynomial L_n(x), evaluated by the stable three-term
/// recurrence. Relative accuracy ~1e-14 for n <= 30, |x| <= 50.
double laguerre(int n, double x);

/// |(1-z)^{-1} e^{zx/(z-1)} - sum_{n<terms} L_n(x) z^n| for |z| < 1.
double laguerre_genfun_residual(double z, double x, int terms);

/// Two-variable Hermite polynomial
///   H_{m,n}(x,y) = sum_{l<=min(m,n)} m!n!(-1)^l / (l!(m-l)!(n-l)!) x^{m-l} y^{n-l}.
std::complex<double> hermite2(const PolyIndex& idx, std::complex<double> x,
                              std::complex<double> y);

/// |L_n(xy) - (-1)^n/n! H_{n,n}(x,y)|, scaled by max(1, |L_n(xy)|).
double hermite_laguerre_link_residual(int n, double x, double y);

/// Residual of the shifted generating function
///   sum_{l<terms} lam^l/l! H_{l+m,l+n}(x,y)
///     = (1+lam)^{-(n+m)/2-1} e^{lam xy/(1+lam)}
///       H_{m,n}(x/sqrt(1+lam), y/sqrt(1+lam)),
/// scaled by max(1, |closed side|). Requires |lam| < 1.
double shifted_hermite_genfun_residual(const PolyIndex& idx, double lam,
                                       double x, double y, int terms);

/// Residual of the Laguerre-weighted negative binomial sum
///   sum_{l<terms} (n+l)!(-lam)^l/(l!n!) L_{n+l}(z)
///     = (1+lam)^{-n-1} e^{lam z/(1+lam)} L_n(z/(1+lam)),
/// for 0 <= lam < 1, n <= 20. At z = 0 this reduces to the pure
/// negative-binomial formula sum (n+l)!(-lam)^l/(l!n!) = (1+lam)^{-n-1}.
double gen_negbin_laguerre_residual(int n, double lam, double z, int terms);

/// Binomial weight C(n,l) sigma^l (1-sigma)^{n-l} in log space, 0 < sigma < 1.
LogWeight binom_weight(int n, int l, double sigma);

/// Negative binomial weight C(m+s,m) gamma^{s+1} (1-gamma)^m in log space.
LogWeight negbin_weight(int s, int m, double gamma);

/// True iff sum_n sum_{l<=n} A_{n-l} B_l equals sum_s sum_m A_s B_m on the
/// zero-padded finite support, to 1e-12 relative.
bool cauchy_rearrange_check(std::span<const double> a, std::span<const double> b);

namespace internal {

/// Fills out[k] = L-hat_k^{(alpha)}(w) for k = 0..count-1, where L-hat is the
/// associated Laguerre polynomial sum_{l} C(k+alpha, k-l) (-w)^l / l!.
/// Unchecked order; used by the series sweeps.
void assoc_laguerre_sweep(int alpha, double w, std::span<double> out);
void assoc_laguerre_sweep(int alpha, std::complex<double> w,
                          std::span<std::complex<double>> out);

/// H_{m,n}(x,y) for real arguments, no index bound check.
double hermite2_unchecked(int m, int n, double x, double y);

}  // namespace internal

}  // namespace fockpart::specfun

#endif  // FOCKPART_SPECFUN_HPP
