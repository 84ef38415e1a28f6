#include "fockpart/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "src/text_format.hpp"

namespace fockpart::states {

namespace {

using specfun::log_factorial;
using specfun::negbin_weight;

// The falling-factorial contraction of the Laguerre-weighted normal series is an
// alternating sum whose largest summand exceeds the result by ~10^31 at the
// (gamma, s, m) grid corners, past what 80-bit arithmetic can absorb. The
// diagonal is therefore contracted in quad precision; pure +,*,/ only, so
// no quadmath library support is needed.
double nbs_normal_diag_quad(int s, double gamma, double exponent, int m) {
  using quad = __float128;
  const int jmax = std::min(s, m);
  std::vector<quad> laguerre_part(static_cast<std::size_t>(jmax) + 1);
  laguerre_part[0] = 1;
  for (int j = 0; j < jmax; ++j) {
    laguerre_part[static_cast<std::size_t>(j) + 1] =
        laguerre_part[static_cast<std::size_t>(j)] * (s - j) *
        (quad(1) - quad(gamma)) / ((quad(j) + 1) * (quad(j) + 1));
  }
  std::vector<quad> exp_part(static_cast<std::size_t>(m) + 1);
  exp_part[0] = 1;
  for (int i = 0; i < m; ++i) {
    exp_part[static_cast<std::size_t>(i) + 1] =
        exp_part[static_cast<std::size_t>(i)] * quad(exponent) / (quad(i) + 1);
  }
  quad scale = 1;
  for (int i = 0; i <= s; ++i) scale *= quad(gamma);  // gamma^{s+1}

  quad ff = 1;  // m!/(m-l)!
  quad acc = 0;
  for (int l = 0; l <= m; ++l) {
    quad c = 0;
    for (int j = 0; j <= std::min(l, jmax); ++j) {
      c += laguerre_part[static_cast<std::size_t>(j)] *
           exp_part[static_cast<std::size_t>(l - j)];
    }
    acc += scale * c * ff;
    ff *= (m - l);
  }
  return static_cast<double>(acc);
}

double log_falling_factorial(int top, int steps) {
  return log_factorial(top) - log_factorial(top - steps);
}

// log pmf of the analytic diagonal families, valid at any level.
double analytic_log_prob(const StateLabel& label, int k) {
  switch (label.family) {
    case StateFamily::kThermal:
      return std::log(label.gamma) + k * std::log1p(-label.gamma);
    case StateFamily::kNegBinomial:
      return negbin_weight(label.s, k, label.gamma).log_magnitude;
    default:
      throw DomainError("analytic_log_prob: label has no analytic tail");
  }
}

// Ratio p(k+1)/p(k) of the analytic families.
double analytic_prob_ratio(const StateLabel& label, int k) {
  switch (label.family) {
    case StateFamily::kThermal:
      return 1.0 - label.gamma;
    case StateFamily::kNegBinomial:
      return (1.0 - label.gamma) * (k + 1 + label.s) / (k + 1.0);
    default:
      throw DomainError("analytic_prob_ratio: label has no analytic tail");
  }
}

// sum_{k >= start} p(k) * (k)!/(k-s)!  for the analytic families, evaluated
// as exp(anchor) * relative ladder so deep tails neither overflow nor lose
// the anchor term.
double analytic_weighted_tail(const StateLabel& label, int start, int s) {
  double log_term = analytic_log_prob(label, start) + log_falling_factorial(start, s);
  double rel_sum = 1.0;
  double rel = 1.0;
  int k = start;
  while (true) {
    const double ratio =
        analytic_prob_ratio(label, k) * (k + 1.0) / (k + 1.0 - s);
    rel *= ratio;
    rel_sum += rel;
    ++k;
    if (rel < 1e-20 * rel_sum && ratio < 1.0) break;
    if (k > start + 4'000'000) {
      throw ConvergenceError("analytic_weighted_tail: tail sum did not converge");
    }
  }
  return std::exp(log_term) * rel_sum;
}

double negbin_tail(int s, double gamma, int dim) {
  StateLabel label;
  label.family = StateFamily::kNegBinomial;
  label.s = s;
  label.gamma = gamma;
  return analytic_weighted_tail(label, dim, 0);
}

}  // namespace

DiagonalState make_state(std::vector<double> probs, double tail_mass, StateLabel label) {
  return DiagonalState(std::move(probs), tail_mass, std::move(label));
}

DiagonalState::DiagonalState(std::vector<double> probs, double tail_mass,
                             StateLabel label)
    : probs_(std::move(probs)), tail_mass_(tail_mass), label_(label) {
  detail::require(probs_.size() >= 2 && probs_.size() <= 4096,
                  "DiagonalState: dim outside 2..4096");
  double sum = 0.0;
  for (double p : probs_) {
    detail::require(p >= 0.0 && std::isfinite(p), "DiagonalState: negative or non-finite weight");
    sum += p;
  }
  detail::require(tail_mass_ >= 0.0, "DiagonalState: negative tail mass");
  detail::require(std::abs(sum + tail_mass_ - 1.0) <= 1e-12,
                  "DiagonalState: weights plus tail do not sum to one");
}

DiagonalState DiagonalState::custom(std::vector<double> probs, double tail_mass) {
  StateLabel label;
  label.family = StateFamily::kCustom;
  return make_state(std::move(probs), tail_mass, label);
}

std::string family_name(StateFamily family) {
  switch (family) {
    case StateFamily::kNumber: return "number";
    case StateFamily::kBinomial: return "binomial";
    case StateFamily::kNegBinomial: return "negbinomial";
    case StateFamily::kThermal: return "thermal";
    case StateFamily::kCustom: return "custom";
  }
  return "custom";
}

DiagonalState number_state(int m, FockCutoff cutoff) {
  detail::require(m >= 0 && m < cutoff.dim, "number_state: level outside cutoff");
  std::vector<double> probs(static_cast<std::size_t>(cutoff.dim), 0.0);
  probs[static_cast<std::size_t>(m)] = 1.0;
  StateLabel label;
  label.family = StateFamily::kNumber;
  label.m = m;
  return make_state(std::move(probs), 0.0, label);
}

DiagonalState binomial_state(int n, double sigma, FockCutoff cutoff) {
  detail::require(n >= 0 && n < cutoff.dim, "binomial_state: n must be below the cutoff");
  detail::require(sigma > 0.0 && sigma < 1.0, "binomial_state: sigma outside (0,1)");
  std::vector<double> probs(static_cast<std::size_t>(cutoff.dim), 0.0);
  for (int l = 0; l <= n; ++l) {
    probs[static_cast<std::size_t>(l)] = specfun::binom_weight(n, l, sigma).value();
  }
  StateLabel label;
  label.family = StateFamily::kBinomial;
  label.n = n;
  label.sigma = sigma;
  return make_state(std::move(probs), 0.0, label);
}

DiagonalState negbinomial_state(int s, double gamma, FockCutoff cutoff,
                                double eps_tail) {
  detail::require(s >= 0, "negbinomial_state: s must be nonnegative");
  detail::require(gamma > 0.0 && gamma < 1.0, "negbinomial_state: gamma outside (0,1)");
  detail::require(eps_tail > 0.0, "negbinomial_state: eps_tail must be positive");

  int dim = cutoff.dim;
  double tail = negbin_tail(s, gamma, dim);
  while (tail >= eps_tail && dim < 4096) {
    dim = std::min(2 * dim, 4096);
    tail = negbin_tail(s, gamma, dim);
  }
  if (tail >= eps_tail) {
    // log tail ~ dim log(1-gamma) + s log(dim); solve for the suggestion.
    double suggest = std::log(eps_tail) / std::log1p(-gamma);
    suggest = (std::log(eps_tail) - s * std::log(std::max(suggest, 2.0))) /
              std::log1p(-gamma);
    throw CutoffError("negbinomial_state: tail above eps_tail even at dim 4096",
                      static_cast<int>(std::ceil(suggest)) + 16);
  }

  std::vector<double> probs(static_cast<std::size_t>(dim), 0.0);
  for (int m = 0; m < dim; ++m) {
    probs[static_cast<std::size_t>(m)] = negbin_weight(s, m, gamma).value();
  }
  StateLabel label;
  label.family = StateFamily::kNegBinomial;
  label.s = s;
  label.gamma = gamma;
  return make_state(std::move(probs), tail, label);
}

DiagonalState thermal_state(double gamma, FockCutoff cutoff) {
  detail::require(gamma > 0.0 && gamma < 1.0, "thermal_state: gamma outside (0,1)");
  std::vector<double> probs(static_cast<std::size_t>(cutoff.dim), 0.0);
  double geometric = 1.0;  // (1-gamma)^m
  for (int m = 0; m < cutoff.dim; ++m) {
    probs[static_cast<std::size_t>(m)] = gamma * geometric;
    geometric *= 1.0 - gamma;
  }
  const double tail = geometric;  // (1-gamma)^dim
  StateLabel label;
  label.family = StateFamily::kThermal;
  label.gamma = gamma;
  return make_state(std::move(probs), tail, label);
}

MeanPhoton mean_photon(const DiagonalState& state) {
  double value = 0.0;
  for (int m = 0; m < state.dim(); ++m) {
    value += m * state.prob(m);
  }
  double correction = 0.0;
  switch (state.label().family) {
    case StateFamily::kThermal:
    case StateFamily::kNegBinomial: {
      // exact tail moment sum_{k>=dim} k p(k) = dim-weighted ladder
      const StateLabel& label = state.label();
      double log_term = analytic_log_prob(label, state.dim());
      double rel_sum = static_cast<double>(state.dim());
      double rel = 1.0;
      int k = state.dim();
      while (true) {
        rel *= analytic_prob_ratio(label, k);
        ++k;
        rel_sum += rel * k;
        if (rel * k < 1e-20 * rel_sum) break;
      }
      correction = std::exp(log_term) * rel_sum;
      break;
    }
    case StateFamily::kNumber:
    case StateFamily::kBinomial:
      correction = 0.0;  // finite support below the cutoff
      break;
    case StateFamily::kCustom:
      // no analytic continuation: at least tail_mass * dim sits above
      correction = state.tail_mass() * state.dim();
      break;
  }
  return {value, correction};
}

SubtractionResult photon_subtract(const DiagonalState& state, int s) {
  detail::require(s >= 0 && s < state.dim(), "photon_subtract: s outside 0..dim-1");
  const int dim = state.dim();
  const StateFamily family = state.label().family;
  const bool analytic = family == StateFamily::kThermal ||
                        family == StateFamily::kNegBinomial;

  // q[m] = probs[m+s] (m+s)!/m!; analytic families continue past the cutoff.
  std::vector<double> q(static_cast<std::size_t>(dim), 0.0);
  double retained = 0.0;
  for (int m = 0; m < dim; ++m) {
    double source;
    if (m + s < dim) {
      source = state.prob(m + s);
    } else if (analytic) {
      source = std::exp(analytic_log_prob(state.label(), m + s));
    } else {
      source = 0.0;
    }
    if (source > 0.0) {
      q[static_cast<std::size_t>(m)] =
          source * std::exp(log_falling_factorial(m + s, s));
    }
    retained += q[static_cast<std::size_t>(m)];
  }
  const double tail_q = analytic ? analytic_weighted_tail(state.label(), dim + s, s) : 0.0;
  const double norm = retained + tail_q;
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw DegenerateStateError(
        "photon_subtract: a^s rho a+^s has vanishing weight (nothing left to subtract)");
  }

  for (double& v : q) v /= norm;
  StateLabel label;
  if (family == StateFamily::kNumber) {
    label.family = StateFamily::kNumber;
    label.m = state.label().m - s;
  } else {
    label.family = StateFamily::kCustom;
  }
  return {make_state(std::move(q), tail_q / norm, label), norm};
}

OrderedSeries nbs_normal_ordered_series(int s, double gamma, double exponent,
                                        int length) {
  detail::require(s >= 0, "nbs_normal_ordered_series: s must be nonnegative");
  detail::require(gamma > 0.0 && gamma < 1.0,
                  "nbs_normal_ordered_series: gamma outside (0,1)");
  detail::require(length >= 1, "nbs_normal_ordered_series: length must be >= 1");

  // Coefficients of e^{c w} L_s(-(1-gamma) w) as a power series in w:
  //   b_j = C(s,j) (1-gamma)^j / j!   (Laguerre part, j <= s)
  //   e_i = c^i / i!                  (exponential part)
  //   coeff_l = gamma^{s+1} sum_j b_j e_{l-j}
  // Built in extended precision: the falling-factorial contraction of this
  // list is an alternating sum whose condition number grows with the level.
  std::vector<long double> b(static_cast<std::size_t>(std::min(s, length - 1)) + 1);
  b[0] = 1.0L;
  for (std::size_t j = 0; j + 1 < b.size(); ++j) {
    const long double jd = static_cast<long double>(j);
    b[j + 1] = b[j] * (s - jd) * (1.0L - static_cast<long double>(gamma)) /
               ((jd + 1.0L) * (jd + 1.0L));
  }
  std::vector<long double> e(static_cast<std::size_t>(length));
  e[0] = 1.0L;
  for (int i = 0; i + 1 < length; ++i) {
    e[static_cast<std::size_t>(i) + 1] =
        e[static_cast<std::size_t>(i)] * static_cast<long double>(exponent) / (i + 1.0L);
  }
  const long double scale =
      std::exp((s + 1) * std::log(static_cast<long double>(gamma)));
  std::vector<long double> coeffs(static_cast<std::size_t>(length), 0.0L);
  for (int l = 0; l < length; ++l) {
    long double acc = 0.0L;
    for (int j = 0; j <= std::min<int>(l, static_cast<int>(b.size()) - 1); ++j) {
      acc += b[static_cast<std::size_t>(j)] * e[static_cast<std::size_t>(l - j)];
    }
    coeffs[static_cast<std::size_t>(l)] = scale * acc;
  }
  return OrderedSeries::from_coeffs_extended(fock::Ordering::kNormal, coeffs);
}

double nbs_normal_ordered_diag(int s, double gamma, int m) {
  detail::require(m >= 0, "nbs_normal_ordered_diag: negative level");
  detail::require(s >= 0, "nbs_normal_ordered_diag: negative order");
  detail::require(gamma > 0.0 && gamma < 1.0,
                  "nbs_normal_ordered_diag: gamma outside (0,1)");
  // The exponent constant is -gamma: the s = 0 limit must reproduce the
  // thermal diagonal gamma (1-gamma)^m = gamma <m|:e^{-gamma a+a}:|m>.
  if (m <= 512) {
    return nbs_normal_diag_quad(s, gamma, -gamma, m);
  }
  // past any level the grids reach; the quad falling factorial would
  // overflow near m ~ 1750, the generic evaluator does not
  const auto series = nbs_normal_ordered_series(s, gamma, -gamma, m + 1);
  return fock::normal_diag_eval(series, m);
}

double thermal_antinormal_diag(double gamma, int k) {
  detail::require(gamma > 0.0 && gamma < 1.0,
                  "thermal_antinormal_diag: gamma outside (0,1)");
  detail::require(k >= 0, "thermal_antinormal_diag: negative level");
  // The exponent c = gamma/(gamma-1) is negative throughout (0,1): the
  // diagonal power series diverges for gamma >= 1/2 and, where it does
  // converge, alternates with a level-growing condition number. The
  // coherent-state integral form is uniformly valid and is what this route
  // evaluates; the
  // series evaluator is cross-checked against it where it is well
  // conditioned (see the fockcore tests).
  const double c = gamma / (gamma - 1.0);
  const double inv_nc = gamma / (1.0 - gamma);
  return inv_nc * fock::antinormal_exp_diag_integral(c, k);
}

std::string to_json(const DiagonalState& state) {
  std::ostringstream out;
  out << "{\"label\":\"" << family_name(state.label().family) << "\",\"params\":{";
  const StateLabel& label = state.label();
  switch (label.family) {
    case StateFamily::kNumber:
      out << "\"m\":" << label.m;
      break;
    case StateFamily::kBinomial:
      out << "\"n\":" << label.n << ",\"sigma\":" << text::g17(label.sigma);
      break;
    case StateFamily::kNegBinomial:
      out << "\"s\":" << label.s << ",\"gamma\":" << text::g17(label.gamma);
      break;
    case StateFamily::kThermal:
      out << "\"gamma\":" << text::g17(label.gamma);
      break;
    case StateFamily::kCustom:
      break;
  }
  out << "},\"cutoff\":" << state.dim() << ",\"probs\":[";
  for (int m = 0; m < state.dim(); ++m) {
    if (m > 0) out << ",";
    out << text::g17(state.prob(m));
  }
  out << "],\"tail_mass\":" << text::g17(state.tail_mass()) << "}";
  return out.str();
}

}  // namespace fockpart::states
