#ifndef FOCKPART_CHANNELS_HPP
#define FOCKPART_CHANNELS_HPP

#include "fockpart/fockcore.hpp"
#include "fockpart/states.hpp"

namespace fockpart::channels {

using fock::DensityMatrix;
using fock::FockCutoff;
using states::DiagonalState;

/// Dimensionless exposure of the amplitude-dissipation channel. A single
/// photon survives with probability e^{-2 kt}; T = 1 - survival is the loss
/// weight of the operator sum. survival + T == 1 holds exactly.
struct ChannelSpec {
  double kt;
  double survival;
  double T;

  static ChannelSpec from_kt(double kt);
  static ChannelSpec from_survival(double survival);
};

/// Binomial thinning of a Fock-diagonal state:
///   out[l] = sum_{m>=l} in[m] C(m,l) survival^l T^{m-l}.
/// Trace is preserved; a number state |m><m| maps to the binomial state
/// with parameters (m, survival).
DiagonalState damp_diagonal(const DiagonalState& state, const ChannelSpec& ch);

/// Full operator-sum solution of the master equation on a density matrix:
///   rho(t) = sum_n T^n/n! e^{-kt a+a} a^n rho a+^n e^{-kt a+a}.
/// The sum terminates exactly at n = dim on the truncated space.
DensityMatrix damp_matrix(const DensityMatrix& rho, const ChannelSpec& ch);

/// Sanity harness for the Lindblad generator: vacuum invariance plus a
/// finite-difference check that (damp(rho, dt) - rho)/dt approximates
/// kappa[2 a rho a+ - a+a rho - rho a+a] (kappa = 1, dt = ch.kt) on a fixed
/// seeded set of three random PSD matrices. Returns the worst deviation.
double channel_fixed_point_check(const ChannelSpec& ch, FockCutoff cutoff);

}  // namespace fockpart::channels

#endif  // FOCKPART_CHANNELS_HPP
