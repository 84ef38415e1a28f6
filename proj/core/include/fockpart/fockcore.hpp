#ifndef FOCKPART_FOCKCORE_HPP
#define FOCKPART_FOCKCORE_HPP

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "fockpart/errors.hpp"
#include "fockpart/specfun.hpp"

namespace fockpart::fock {

using specfun::LogWeight;
using specfun::PolyIndex;

/// Dimension of the truncated Fock space (levels 0..dim-1).
struct FockCutoff {
  explicit FockCutoff(int d) : dim(d) {
    detail::require(d >= 2 && d <= 4096, "FockCutoff: dim outside 2..4096");
  }
  int dim;
};

/// Hermitian complex matrix in the truncated number basis.
class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::MatrixXcd entries);

  static DensityMatrix number_projector(int m, FockCutoff cutoff);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXcd& entries() const { return entries_; }

  std::complex<double> trace() const { return entries_.trace(); }
  /// max |M - M^dagger| over all entries.
  double hermiticity_defect() const;
  /// Smallest eigenvalue of the hermitized matrix.
  double min_eigenvalue() const;
  /// Hermitian to herm_tol, eigenvalues >= psd_floor, trace 1 to trace_tol.
  bool is_state(double herm_tol = 1e-12, double psd_floor = -1e-10,
                double trace_tol = 1e-10) const;

 private:
  Eigen::MatrixXcd entries_;
};

enum class Ordering { kNormal, kAntinormal };

/// Coefficient list {c_l} of an ordered operator function:
///   kNormal      sum_l c_l  a+^l a^l      (":f(a+a):")
///   kAntinormal  sum_l c_l  a^l  a+^l     (".:f(aa+):.")
/// Coefficients are held in log space so exponential families keep full
/// range at orders where lam^l/l! underflows a plain double.
class OrderedSeries {
 public:
  static OrderedSeries from_coeffs(Ordering ordering, std::span<const double> coeffs);
  /// Extended-precision variant for internally generated coefficient lists
  /// whose evaluation is cancellation-prone (the Laguerre-weighted normal series).
  static OrderedSeries from_coeffs_extended(Ordering ordering,
                                            std::span<const long double> coeffs);
  /// c_l = lam^l / l!, l < terms. Antinormal requires |lam| < 1, because the
  /// diagonal series sum_l lam^l (m+l)!/(l! m!) diverges otherwise.
  static OrderedSeries exponential(Ordering ordering, double lam, int terms = 1024);

  Ordering ordering() const { return ordering_; }
  int size() const { return static_cast<int>(coeffs_.size()); }
  const LogWeight& coeff(int l) const { return coeffs_[static_cast<std::size_t>(l)]; }
  /// True when the list truncates an implied infinite series (exponential
  /// factory); evaluation then insists on convergence before the list ends.
  bool truncates_infinite_series() const { return truncates_infinite_; }
  /// from_coeffs series keep their exact double values; evaluating through
  /// them avoids the log/exp round trip, which matters under cancellation.
  bool has_exact_coeffs() const { return !exact_.empty(); }
  long double exact_coeff(int l) const { return exact_[static_cast<std::size_t>(l)]; }
  /// Exponential factory series carry lam so the evaluators can run the
  /// exact multiplicative ladder term -> term * lam (m-l)/(l+1); this keeps
  /// the lam = -1 vacuum projector an exact alternating integer sum.
  bool is_exponential() const { return is_exponential_; }
  double exp_lambda() const { return exp_lambda_; }

 private:
  OrderedSeries(Ordering ordering, std::vector<LogWeight> coeffs,
                std::vector<long double> exact, bool truncates)
      : ordering_(ordering),
        coeffs_(std::move(coeffs)),
        exact_(std::move(exact)),
        truncates_infinite_(truncates) {}
  Ordering ordering_;
  std::vector<LogWeight> coeffs_;
  std::vector<long double> exact_;
  bool truncates_infinite_;
  bool is_exponential_ = false;
  double exp_lambda_ = 0.0;
};

/// <m| sum_l c_l a+^l a^l |m> = sum_{l<=m} c_l m!/(m-l)!.
double normal_diag_eval(const OrderedSeries& series, int m);

/// <m| sum_l c_l a^l a+^l |m> = sum_l c_l (m+l)!/m!, truncated when a term
/// drops below 1e-16 of the partial sum; throws ConvergenceError if the
/// implied series diverges or the coefficient list ends first.
double antinormal_diag_eval(const OrderedSeries& series, int m);

/// Ordered-exponential conversion: max over m < levels of
///   |<m|.:e^{lam aa+}:.|m> - (1-lam)^{-1} <m|:e^{(lam/(1-lam)) a+a}:|m>|
/// scaled per level by max(1, |lhs|). Requires 0 < lam < 1.
double ordered_exp_conversion_residual(double lam, int levels);

/// Matrix of a^s in the truncated basis: entries (n-s, n) = sqrt(n!/(n-s)!).
Eigen::MatrixXd ladder_power_matrix(int s, FockCutoff cutoff);

/// Matrix of the normally ordered monomial a+^p a^q:
/// entries (k+p-q, k) = sqrt(k!/(k-q)!) * sqrt((k+p-q)!/(k-q)!).
Eigen::MatrixXd normal_monomial_matrix(int p, int q, FockCutoff cutoff);

/// Frobenius residual, relative to the left-hand block norm, of
///   a^n a+^m = sum_l m!n!/(l!(m-l)!(n-l)!) a+^{m-l} a^{n-l}
/// on the top-left (dim - m - n) block. The phase factors of the
/// H_{m,n}(ia+, ia) form collapse to +1, which is what is summed here.
double operator_identity_matrix_residual(const PolyIndex& idx, FockCutoff cutoff);

/// Frobenius residual (relative, on a band-restricted block) between
///   sum_l lam^l/l! a^{l+n} a+^{l+m}
/// evaluated entrywise with tolerance truncation, and the closed normally
/// ordered form sum_l m!n!/(l!(m-l)!(n-l)!) (1-lam)^{l-(m+n)-1}
///   * :e^{(lam/(1-lam)) a+a} a+^{m-l} a^{n-l}:.
/// Requires |lam| < 1 and m, n <= 4.
double shifted_antinormal_matrix_residual(const PolyIndex& idx, double lam,
                                          FockCutoff cutoff);

/// Quadrature check of
///   int d2b/pi b^n b*^m exp(-|b|^2 + b conj(alpha) + b* alpha)
///     = (-i)^{m+n} H_{m,n}(i conj(alpha), i alpha) e^{|alpha|^2},
/// radial Gauss-Legendre on [0, |alpha|+8] x uniform angular grid, radial
/// nodes added 16 at a time until the value moves by < 1e-8.
double gaussian_integral_check(const PolyIndex& idx, std::complex<double> alpha);

/// max_{j,k < levels} |int d2a/pi <j|a><a|k> - delta_jk| with the same
/// quadrature scheme, <j|a> = e^{-|a|^2/2} a^j / sqrt(j!). levels <= 12.
double coherent_completeness_residual(int levels);

/// <m|.:e^{lam aa+}:.|m> = (1/m!) int_0^inf u^m e^{-(1-lam)u} du, evaluated
/// by log-scaled radial quadrature. Valid for all lam < 1, in particular
/// where the power series in antinormal_diag_eval diverges (lam <= -1).
double antinormal_exp_diag_integral(double lam, int m);

}  // namespace fockpart::fock

#endif  // FOCKPART_FOCKCORE_HPP
