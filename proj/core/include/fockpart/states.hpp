#ifndef FOCKPART_STATES_HPP
#define FOCKPART_STATES_HPP

#include <span>
#include <string>
#include <vector>

#include "fockpart/fockcore.hpp"

namespace fockpart::states {

using fock::FockCutoff;
using fock::OrderedSeries;

enum class StateFamily { kNumber, kBinomial, kNegBinomial, kThermal, kCustom };

/// Which family a DiagonalState was constructed from, with its parameters.
/// Only the fields relevant to the family are meaningful.
struct StateLabel {
  StateFamily family = StateFamily::kCustom;
  int m = 0;         // number level
  int n = 0;         // binomial trial count
  int s = 0;         // negative-binomial order / photons subtracted
  double sigma = 0;  // binomial success probability
  double gamma = 0;  // thermal / negative-binomial parameter
};

std::string family_name(StateFamily family);

/// Fock-diagonal mixed state: nonnegative weights over levels 0..dim-1 plus
/// the probability mass sitting at or above the cutoff.
/// Invariant: sum(probs) + tail_mass = 1 within 1e-12.
class DiagonalState {
 public:
  static DiagonalState custom(std::vector<double> probs, double tail_mass);

  int dim() const { return static_cast<int>(probs_.size()); }
  std::span<const double> probs() const { return probs_; }
  double prob(int m) const { return probs_[static_cast<std::size_t>(m)]; }
  double tail_mass() const { return tail_mass_; }
  const StateLabel& label() const { return label_; }

 private:
  friend DiagonalState make_state(std::vector<double>, double, StateLabel);
  DiagonalState(std::vector<double> probs, double tail_mass, StateLabel label);

  std::vector<double> probs_;
  double tail_mass_;
  StateLabel label_;
};

/// |m><m|.
DiagonalState number_state(int m, FockCutoff cutoff);

/// Binomial state: probs[l] = C(n,l) sigma^l (1-sigma)^{n-l}, l <= n < dim.
DiagonalState binomial_state(int n, double sigma, FockCutoff cutoff);

/// Negative binomial state: probs[m] = C(m+s,m) gamma^{s+1} (1-gamma)^m.
/// The support is infinite; the cutoff is doubled until the analytic tail
/// drops below eps_tail (CutoffError with a suggested dim if 4096 cannot).
DiagonalState negbinomial_state(int s, double gamma, FockCutoff cutoff,
                                double eps_tail = 1e-12);

/// Thermal (chaotic) state: probs[m] = gamma (1-gamma)^m, tail = (1-gamma)^dim.
DiagonalState thermal_state(double gamma, FockCutoff cutoff);

struct MeanPhoton {
  double value;            // sum_m m probs[m] over the retained levels
  double tail_correction;  // exact tail moment for analytic labels; 0 for
                           // finite support; tail_mass*dim lower estimate
                           // for CUSTOM states
};

MeanPhoton mean_photon(const DiagonalState& state);

struct SubtractionResult {
  DiagonalState state;  // normalized
  double norm;          // trace of a^s rho a+^s
};

/// Photon subtraction rho -> a^s rho a+^s / norm on the diagonal:
/// unnormalized weights q[m] = probs[m+s] (m+s)!/m!. For THERMAL and
/// NEGBINOMIAL inputs the normalization and output tail are continued
/// analytically past the cutoff; finite-support and CUSTOM inputs use the
/// retained levels only. Throws DegenerateStateError when the total weight
/// vanishes (e.g. subtracting from the vacuum).
SubtractionResult photon_subtract(const DiagonalState& state, int s);

/// <m| gamma^{s+1} :e^{-gamma a+a} L_s(-(1-gamma) a+a): |m>, the normally
/// ordered realization of the negative binomial weight. The exponent
/// constant -gamma is forced by the s = 0 thermal limit; see
/// nbs_normal_ordered_series for the unfrozen family.
double nbs_normal_ordered_diag(int s, double gamma, int m);

/// The Laguerre-weighted normal series gamma^{s+1} :e^{c a+a} L_s(-(1-gamma) a+a): with
/// an explicit exponent constant c, as a normally ordered coefficient list of
/// the given length. Exposed so harnesses can probe the sign resolution; the
/// frozen library path uses c = -gamma.
OrderedSeries nbs_normal_ordered_series(int s, double gamma, double exponent,
                                        int length);

/// <k| rho_c |k> through the anti-normal form rho_c = (1/n_c) .:e^{c aa+}:.
/// with c = gamma/(gamma-1): power-series evaluation where it converges
/// (|c| <= 0.9), coherent-state integral representation otherwise.
double thermal_antinormal_diag(double gamma, int k);

/// JSON serialization: {"label", "params", "cutoff", "probs", "tail_mass"},
/// numbers rendered with 17 significant digits, byte-stable.
std::string to_json(const DiagonalState& state);

}  // namespace fockpart::states

#endif  // FOCKPART_STATES_HPP
