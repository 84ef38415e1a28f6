#include "fockpart/partition.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "src/text_format.hpp"

namespace fockpart::partition {

namespace {

using specfun::log_binomial;
using specfun::log_factorial;

PartitionReport finalize(PartitionFamily family, double param, int terms, double tol,
                         std::vector<double> partials, double target) {
  PartitionReport report;
  report.family = family;
  report.param = param;
  report.terms_used = terms;
  report.tol = tol;
  report.partial_sums = std::move(partials);
  report.residuals.reserve(report.partial_sums.size());
  for (double p : report.partial_sums) {
    report.residuals.push_back(std::abs(target - p));
  }
  report.max_residual = 0.0;
  for (double r : report.residuals) report.max_residual = std::max(report.max_residual, r);
  report.converged = report.max_residual < tol;
  return report;
}

void validate_common(double param, int terms, int levels, double tol,
                     const char* who) {
  detail::require(param > 0.0 && param < 1.0,
                  std::string(who) + ": parameter outside (0,1)");
  detail::require(terms >= 1, std::string(who) + ": terms must be >= 1");
  detail::require(levels >= 1, std::string(who) + ": levels must be >= 1");
  detail::require(tol > 0.0, std::string(who) + ": tol must be positive");
}

}  // namespace

std::string family_name(PartitionFamily family) {
  switch (family) {
    case PartitionFamily::kBinomial: return "binomial";
    case PartitionFamily::kNegBinomial: return "negbinomial";
    case PartitionFamily::kNumber: return "number";
  }
  return "number";
}

PartitionReport bs_partition(double sigma, int terms, int levels, double tol) {
  validate_common(sigma, terms, levels, tol, "bs_partition");
  detail::require(terms >= levels,
                  "bs_partition: terms < levels leaves levels with an identically "
                  "zero partial sum; raise terms");

  const double log_sigma = std::log(sigma);
  const double log_comp = std::log1p(-sigma);
  std::vector<double> partials(static_cast<std::size_t>(levels), 0.0);
  for (int l = 0; l < levels; ++l) {
    double acc = 0.0;
    for (int n = l; n < terms; ++n) {
      acc += std::exp(log_binomial(n, l) + (l + 1) * log_sigma + (n - l) * log_comp);
    }
    partials[static_cast<std::size_t>(l)] = acc;
  }
  return finalize(PartitionFamily::kBinomial, sigma, terms, tol, std::move(partials),
                  1.0);
}

double bs_partition_tail(double sigma, int terms, int level) {
  detail::require(sigma > 0.0 && sigma < 1.0, "bs_partition_tail: sigma outside (0,1)");
  detail::require(terms > level && level >= 0, "bs_partition_tail: need terms > level");
  // ladder over n >= terms, anchored in log space
  const double log_anchor = log_binomial(terms, level) + (level + 1) * std::log(sigma) +
                            (terms - level) * std::log1p(-sigma);
  double rel = 1.0, rel_sum = 1.0;
  int n = terms;
  while (true) {
    rel *= (1.0 - sigma) * (n + 1.0) / (n + 1.0 - level);
    rel_sum += rel;
    ++n;
    if (rel < 1e-20 * rel_sum) break;
  }
  return std::exp(log_anchor) * rel_sum;
}

PartitionReport nbs_partition(double gamma, int terms, int levels, double tol) {
  validate_common(gamma, terms, levels, tol, "nbs_partition");
  const double log_gamma = std::log(gamma);
  const double log_comp = std::log1p(-gamma);
  const double scale = (1.0 - gamma) / gamma;
  std::vector<double> partials(static_cast<std::size_t>(levels), 0.0);
  for (int m = 0; m < levels; ++m) {
    double acc = 0.0;
    for (int s = 0; s < terms; ++s) {
      acc += std::exp(log_binomial(m + s, m) + (s + 1) * log_gamma + m * log_comp);
    }
    partials[static_cast<std::size_t>(m)] = scale * acc;
  }
  return finalize(PartitionFamily::kNegBinomial, gamma, terms, tol,
                  std::move(partials), 1.0);
}

double nbs_partition_tail(double gamma, int terms, int level) {
  detail::require(gamma > 0.0 && gamma < 1.0, "nbs_partition_tail: gamma outside (0,1)");
  detail::require(terms >= 1 && level >= 0, "nbs_partition_tail: bad arguments");
  const double log_anchor = log_binomial(level + terms, level) +
                            (terms + 1) * std::log(gamma) +
                            level * std::log1p(-gamma);
  double rel = 1.0, rel_sum = 1.0;
  int s = terms;
  while (true) {
    rel *= gamma * (level + s + 1.0) / (s + 1.0);
    rel_sum += rel;
    ++s;
    if (rel < 1e-20 * rel_sum) break;
  }
  return ((1.0 - gamma) / gamma) * std::exp(log_anchor) * rel_sum;
}

double number_completeness(int levels) {
  detail::require(levels >= 1 && levels <= 4096,
                  "number_completeness: levels outside 1..4096");
  const int dim = std::max(2, levels);
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
  const fock::FockCutoff cutoff(dim);
  for (int m = 0; m < levels; ++m) {
    acc += fock::DensityMatrix::number_projector(m, cutoff).entries();
  }
  double worst = 0.0;
  for (int j = 0; j < levels; ++j) {
    for (int k = 0; k < levels; ++k) {
      const double target = (j == k) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(acc(j, k) - target));
    }
  }
  return worst;
}

PartitionReport nbs_antinormal_resummation(double gamma, int terms, int levels,
                                           double tol) {
  validate_common(gamma, terms, levels, tol, "nbs_antinormal_resummation");
  const double nc = (1.0 - gamma) / gamma;
  const double log_nc = std::log(nc);

  // thermal diagonal through the anti-normal form, shared across (m, s)
  std::vector<double> thermal(static_cast<std::size_t>(levels + terms - 1));
  for (int k = 0; k < levels + terms - 1; ++k) {
    thermal[static_cast<std::size_t>(k)] = states::thermal_antinormal_diag(gamma, k);
  }

  // <m|rho_s|m> = (m+s)!/(m! s! nc^s) * thermal[m+s]   (photon subtraction)
  std::vector<double> partials(static_cast<std::size_t>(levels), 0.0);
  for (int m = 0; m < levels; ++m) {
    double acc = 0.0;
    for (int s = 0; s < terms; ++s) {
      const double log_coef = log_factorial(m + s) - log_factorial(m) -
                              log_factorial(s) - s * log_nc;
      acc += std::exp(log_coef) * thermal[static_cast<std::size_t>(m + s)];
    }
    partials[static_cast<std::size_t>(m)] = acc;
  }
  return finalize(PartitionFamily::kNegBinomial, gamma, terms, tol,
                  std::move(partials), /*target=*/1.0 / nc);
}

PartitionReport nbs_partition_normal_route(double gamma, int terms, int levels,
                                           double tol) {
  validate_common(gamma, terms, levels, tol, "nbs_partition_normal_route");
  const double scale = (1.0 - gamma) / gamma;
  std::vector<double> partials(static_cast<std::size_t>(levels), 0.0);
  for (int m = 0; m < levels; ++m) {
    double acc = 0.0;
    for (int s = 0; s < terms; ++s) {
      acc += states::nbs_normal_ordered_diag(s, gamma, m);
    }
    partials[static_cast<std::size_t>(m)] = scale * acc;
  }
  return finalize(PartitionFamily::kNegBinomial, gamma, terms, tol,
                  std::move(partials), 1.0);
}

std::string to_json(const PartitionReport& report) {
  std::ostringstream out;
  out << "{\"family\":\"" << family_name(report.family) << "\""
      << ",\"param\":" << text::g17(report.param)
      << ",\"terms_used\":" << report.terms_used
      << ",\"tol\":" << text::g17(report.tol)
      << ",\"max_residual\":" << text::g17(report.max_residual)
      << ",\"converged\":" << (report.converged ? "true" : "false")
      << ",\"levels\":[";
  for (std::size_t l = 0; l < report.partial_sums.size(); ++l) {
    if (l > 0) out << ",";
    out << "{\"level\":" << l
        << ",\"partial_sum\":" << text::g17(report.partial_sums[l])
        << ",\"residual\":" << text::g17(report.residuals[l]) << "}";
  }
  out << "]}";
  return out.str();
}

std::string to_csv(const PartitionReport& report) {
  std::ostringstream out;
  out << "level,partial_sum,residual\n";
  for (std::size_t l = 0; l < report.partial_sums.size(); ++l) {
    out << l << "," << text::g17(report.partial_sums[l]) << ","
        << text::g17(report.residuals[l]) << "\n";
  }
  return out.str();
}

}  // namespace fockpart::partition
