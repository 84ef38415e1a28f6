#ifndef FOCKPART_PARTITION_HPP
#define FOCKPART_PARTITION_HPP

#include <string>
#include <vector>

#include "fockpart/states.hpp"

namespace fockpart::partition {

enum class PartitionFamily { kBinomial, kNegBinomial, kNumber };

std::string family_name(PartitionFamily family);

/// Truncation record of a partition-of-unity check: per Fock level the
/// partial sum of the scaled state family and its deviation from the target
/// (1 for the partitions, gamma/(1-gamma) for the raw resummation).
struct PartitionReport {
  PartitionFamily family = PartitionFamily::kNumber;
  double param = 0.0;
  int terms_used = 0;
  double tol = 0.0;
  std::vector<double> partial_sums;
  std::vector<double> residuals;
  double max_residual = 0.0;
  bool converged = false;
};

inline constexpr double kDefaultTol = 1e-10;

/// Binomial-family partition check: partial[l] = sigma sum_{n<terms} <l|rho_n(sigma)|l>,
/// residual[l] = |1 - partial[l]|. Requires terms >= levels (levels past the
/// truncation have identically zero partial sums).
PartitionReport bs_partition(double sigma, int terms, int levels,
                             double tol = kDefaultTol);

/// Closed form of the bs_partition residual at one level: the upper tail
/// sum_{n>=terms} C(n,l) sigma^{l+1} (1-sigma)^{n-l}. The partial sums
/// telescope, so this matches the report residual to ~1e-12.
double bs_partition_tail(double sigma, int terms, int level);

/// Negative-binomial-family partition check: partial[m] = ((1-g)/g) sum_{s<terms} negbin weight,
/// residual[m] = |1 - partial[m]|.
PartitionReport nbs_partition(double gamma, int terms, int levels,
                              double tol = kDefaultTol);

/// Closed form of the nbs_partition residual at one level.
double nbs_partition_tail(double gamma, int terms, int level);

/// max over the block of |sum_{m<levels} |m><m| - 1|; zero in exact
/// arithmetic, asserted <= 1e-15 numerically.
double number_completeness(int levels);

/// Resummation of the negative binomial family through its anti-normal form:
/// partial[m] = sum_{s<terms} <m|rho_s(gamma)|m> with each rho_s diagonal
/// assembled from photon-subtraction weights over the anti-normally
/// evaluated thermal diagonal. Residuals are measured against the constant
/// gamma/(1-gamma) of the closed resummation.
PartitionReport nbs_antinormal_resummation(double gamma, int terms, int levels,
                                           double tol = kDefaultTol);

/// Same quantity as nbs_partition with each rho_s diagonal obtained from the
/// normally ordered Laguerre-weighted realization.
PartitionReport nbs_partition_normal_route(double gamma, int terms, int levels,
                                           double tol = kDefaultTol);

/// JSON: one object with family, parameters and per-level rows.
std::string to_json(const PartitionReport& report);

/// CSV: "level,partial_sum,residual" header plus one row per level,
/// '.' decimal separator, LF line endings, 17 significant digits.
std::string to_csv(const PartitionReport& report);

}  // namespace fockpart::partition

#endif  // FOCKPART_PARTITION_HPP
