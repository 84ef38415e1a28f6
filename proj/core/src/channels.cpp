#include "fockpart/channels.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace fockpart::channels {

namespace {

std::vector<double> lgamma_table(int count) {
  std::vector<double> t(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) t[static_cast<std::size_t>(i)] = std::lgamma(i + 1.0);
  return t;
}

}  // namespace

ChannelSpec ChannelSpec::from_kt(double kt) {
  detail::require(kt >= 0.0 && std::isfinite(kt), "ChannelSpec: kt must be finite and >= 0");
  const double loss = -std::expm1(-2.0 * kt);
  return {kt, 1.0 - loss, loss};
}

ChannelSpec ChannelSpec::from_survival(double survival) {
  detail::require(survival > 0.0 && survival <= 1.0,
                  "ChannelSpec: survival outside (0,1]");
  return {-0.5 * std::log(survival), survival, 1.0 - survival};
}

DiagonalState damp_diagonal(const DiagonalState& state, const ChannelSpec& ch) {
  const int dim = state.dim();
  if (ch.T == 0.0) return state;  // kt = 0 is the identity map

  const auto lg = lgamma_table(dim + 1);
  const double log_eta = ch.survival > 0.0 ? std::log(ch.survival) : 0.0;
  const double log_loss = std::log(ch.T);

  std::vector<double> out(static_cast<std::size_t>(dim), 0.0);
  for (int m = 0; m < dim; ++m) {
    const double pm = state.prob(m);
    if (pm == 0.0) continue;
    if (ch.survival == 0.0) {  // everything decays to vacuum
      out[0] += pm;
      continue;
    }
    for (int l = 0; l <= m; ++l) {
      const double log_coef = lg[static_cast<std::size_t>(m)] -
                              lg[static_cast<std::size_t>(l)] -
                              lg[static_cast<std::size_t>(m - l)] +
                              l * log_eta + (m - l) * log_loss;
      out[static_cast<std::size_t>(l)] += pm * std::exp(log_coef);
    }
  }
  // Damping only moves weight downwards; whatever sat above the cutoff stays
  // unresolved, so the tail bookkeeping carries over unchanged.
  return DiagonalState::custom(std::move(out), state.tail_mass());
}

DensityMatrix damp_matrix(const DensityMatrix& rho, const ChannelSpec& ch) {
  detail::require(rho.hermiticity_defect() <= 1e-12,
                  "damp_matrix: input matrix is not Hermitian");
  const int dim = rho.dim();
  if (ch.T == 0.0) return rho;

  const auto lg = lgamma_table(2 * dim + 1);
  const double log_loss = std::log(ch.T);
  const double log_eta_half =
      ch.survival > 0.0 ? 0.5 * std::log(ch.survival) : 0.0;

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) {
      if (ch.survival == 0.0 && j + k > 0) continue;
      std::complex<double> acc{0.0, 0.0};
      const int nmax = dim - 1 - std::max(j, k);
      for (int n = 0; n <= nmax; ++n) {
        const double log_coef =
            n * log_loss - lg[static_cast<std::size_t>(n)] +
            0.5 * (lg[static_cast<std::size_t>(j + n)] - lg[static_cast<std::size_t>(j)] +
                   lg[static_cast<std::size_t>(k + n)] - lg[static_cast<std::size_t>(k)]) +
            (j + k) * log_eta_half;
        acc += std::exp(log_coef) * rho.entries()(j + n, k + n);
      }
      out(j, k) = acc;
    }
  }
  return DensityMatrix(std::move(out));
}

double channel_fixed_point_check(const ChannelSpec& ch, FockCutoff cutoff) {
  detail::require(ch.kt > 0.0, "channel_fixed_point_check: kt must be positive");
  const int dim = cutoff.dim;

  // vacuum is the dark state of the channel
  const DensityMatrix vacuum = DensityMatrix::number_projector(0, cutoff);
  const double vacuum_residual =
      (damp_matrix(vacuum, ch).entries() - vacuum.entries()).cwiseAbs().maxCoeff();

  // (Phi_dt(rho) - rho)/dt vs 2 a rho a+ - a+a rho - rho a+a, fixed seed
  const Eigen::MatrixXd a = fock::ladder_power_matrix(1, cutoff);
  const Eigen::MatrixXd ad = a.transpose();
  std::mt19937 rng(20250810u);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst = vacuum_residual;
  for (int trial = 0; trial < 3; ++trial) {
    Eigen::MatrixXcd raw(dim, dim);
    for (int j = 0; j < dim; ++j) {
      for (int k = 0; k < dim; ++k) {
        raw(j, k) = std::complex<double>(gauss(rng), gauss(rng));
      }
    }
    Eigen::MatrixXcd psd = raw * raw.adjoint();
    psd /= psd.trace().real();
    const DensityMatrix rho{psd};

    const Eigen::MatrixXcd finite_diff =
        (damp_matrix(rho, ch).entries() - psd) / ch.kt;
    const Eigen::MatrixXcd generator =
        2.0 * (a * psd * ad) - (ad * a) * psd - psd * (ad * a);
    // Truncation clips the top level of a rho a+; compare below it.
    const int block = dim - 1;
    const double dev = (finite_diff - generator)
                           .topLeftCorner(block, block)
                           .cwiseAbs()
                           .maxCoeff();
    worst = std::max(worst, dev);
  }
  return worst;
}

}  // namespace fockpart::channels
