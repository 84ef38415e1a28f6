#include "fockpart/channels.hpp"

#include <cmath>

#include "doctest.h"

using namespace fockpart;
using namespace fockpart::channels;
using fock::FockCutoff;
using states::DiagonalState;

TEST_CASE("ChannelSpec bookkeeping") {
  const auto idle = ChannelSpec::from_kt(0.0);
  CHECK(idle.survival == 1.0);
  CHECK(idle.T == 0.0);

  for (double kt : {0.05, 0.35, 1.2, 10.0}) {
    const auto ch = ChannelSpec::from_kt(kt);
    CHECK(ch.survival + ch.T == 1.0);  // exact by construction
    CHECK(ch.survival == doctest::Approx(std::exp(-2.0 * kt)).epsilon(1e-14));
  }

  const auto eta = ChannelSpec::from_survival(0.7);
  CHECK(eta.survival == 0.7);
  CHECK(eta.kt == doctest::Approx(0.17833747196936619).epsilon(1e-15));
  CHECK(eta.survival + eta.T == 1.0);

  CHECK_THROWS_AS(ChannelSpec::from_kt(-0.1), DomainError);
  CHECK_THROWS_AS(ChannelSpec::from_survival(0.0), DomainError);
}

TEST_CASE("diagonal damping: frozen values") {
  const auto two = states::number_state(2, FockCutoff(8));
  const auto out = damp_diagonal(two, ChannelSpec::from_survival(0.7));
  CHECK(out.prob(0) == doctest::Approx(0.09).epsilon(1e-14));
  CHECK(out.prob(1) == doctest::Approx(0.42).epsilon(1e-14));
  CHECK(out.prob(2) == doctest::Approx(0.49).epsilon(1e-14));

  const auto one = states::number_state(1, FockCutoff(4));
  const auto half = damp_diagonal(one, ChannelSpec::from_survival(0.5));
  CHECK(half.prob(0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(half.prob(1) == doctest::Approx(0.5).epsilon(1e-14));

  const auto th = states::thermal_state(0.4, FockCutoff(32));
  const auto same = damp_diagonal(th, ChannelSpec::from_kt(0.0));
  for (int m = 0; m < 32; ++m) CHECK(same.prob(m) == th.prob(m));
}

TEST_CASE("number state through the channel is the binomial state") {
  for (int m = 0; m <= 12; ++m) {
    for (double survival : {0.3, 0.5, 0.7, 0.9}) {
      const auto damped = damp_diagonal(states::number_state(m, FockCutoff(16)),
                                        ChannelSpec::from_survival(survival));
      double trace = 0.0;
      for (int l = 0; l < 16; ++l) trace += damped.prob(l);
      CHECK(std::abs(trace - 1.0) <= 1e-12);
      if (m == 0) {
        CHECK(damped.prob(0) == doctest::Approx(1.0));
        continue;
      }
      const auto bs = states::binomial_state(m, survival, FockCutoff(16));
      for (int l = 0; l < 16; ++l) {
        CHECK(std::abs(damped.prob(l) - bs.prob(l)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("diagonal damping preserves trace and is a semigroup") {
  const auto th = states::thermal_state(0.35, FockCutoff(64));
  for (double kt : {0.05, 0.35, 1.2}) {
    const auto out = damp_diagonal(th, ChannelSpec::from_kt(kt));
    double trace = 0.0;
    for (int m = 0; m < out.dim(); ++m) trace += out.prob(m);
    CHECK(std::abs(trace + out.tail_mass() - 1.0) <= 1e-10);
  }
  const auto once = damp_diagonal(damp_diagonal(th, ChannelSpec::from_kt(0.05)),
                                  ChannelSpec::from_kt(0.35));
  const auto joint = damp_diagonal(th, ChannelSpec::from_kt(0.40));
  for (int m = 0; m < th.dim(); ++m) {
    CHECK(std::abs(once.prob(m) - joint.prob(m)) <= 1e-10);
  }
}

TEST_CASE("long exposures decay everything to vacuum") {
  const auto nbs = states::negbinomial_state(2, 0.5, FockCutoff(64));
  const auto out = damp_diagonal(nbs, ChannelSpec::from_kt(10.0));  // survival ~ 2e-9
  CHECK(std::abs(out.prob(0) + out.tail_mass() - 1.0) <= 1e-7);
  for (int m = 1; m < out.dim(); ++m) CHECK(out.prob(m) <= 1e-7);
}

TEST_CASE("matrix damping agrees with the diagonal fast path") {
  const int dim = 24;
  const auto th = states::thermal_state(0.4, FockCutoff(dim));
  Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(dim, dim);
  for (int m = 0; m < dim; ++m) diag(m, m) = th.prob(m) / (1.0 - th.tail_mass());
  const fock::DensityMatrix rho{diag};

  for (double kt : {0.05, 0.35, 1.2}) {
    const auto ch = ChannelSpec::from_kt(kt);
    const auto full = damp_matrix(rho, ch);
    const auto fast = damp_diagonal(th, ch);
    for (int m = 0; m < dim; ++m) {
      CHECK(std::abs(full.entries()(m, m).real() -
                     fast.prob(m) / (1.0 - th.tail_mass())) <= 1e-12);
    }
    CHECK(full.hermiticity_defect() <= 1e-12);
    CHECK(std::abs(full.trace() - rho.trace()) <= 1e-10);
  }
}

TEST_CASE("matrix damping of a truncated coherent state scales the mean photon number") {
  const int dim = 48;
  const double alpha = 1.2;
  Eigen::VectorXcd amp(dim);
  for (int k = 0; k < dim; ++k) {
    amp(k) = std::exp(-0.25 * alpha * alpha * 2.0 +
                      k * std::log(alpha) - 0.5 * specfun::log_factorial(k));
  }
  Eigen::MatrixXcd proj = amp * amp.adjoint();
  const fock::DensityMatrix rho{proj};
  const double survival = 0.6;
  const auto out = damp_matrix(rho, ChannelSpec::from_survival(survival));

  double mean = 0.0;
  for (int k = 0; k < dim; ++k) mean += k * out.entries()(k, k).real();
  CHECK(std::abs(mean - survival * alpha * alpha) <= 1e-9);

  // kt = 0 returns the input unchanged
  const auto same = damp_matrix(rho, ChannelSpec::from_kt(0.0));
  CHECK((same.entries() - rho.entries()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("matrix damping is a semigroup and validates hermiticity") {
  const int dim = 20;
  Eigen::MatrixXcd raw(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) {
      raw(j, k) = std::complex<double>(std::sin(0.3 * j + 1.7 * k),
                                       std::cos(1.1 * j - 0.2 * k));
    }
  }
  Eigen::MatrixXcd psd = raw * raw.adjoint();
  psd /= psd.trace().real();
  const fock::DensityMatrix rho{psd};

  const auto once = damp_matrix(damp_matrix(rho, ChannelSpec::from_kt(0.05)),
                                ChannelSpec::from_kt(0.35));
  const auto joint = damp_matrix(rho, ChannelSpec::from_kt(0.40));
  CHECK((once.entries() - joint.entries()).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(once.min_eigenvalue() >= -1e-10);

  Eigen::MatrixXcd crooked = psd;
  crooked(0, 1) += std::complex<double>(1e-3, 0.0);
  CHECK_THROWS_AS(damp_matrix(fock::DensityMatrix{crooked}, ChannelSpec::from_kt(0.1)),
                  DomainError);
}

TEST_CASE("Lindblad generator consistency at small exposures") {
  // first order in dt with a constant ~||L^2 rho||/2 set by the test set
  const double r1 = channel_fixed_point_check(ChannelSpec::from_kt(1e-4), FockCutoff(16));
  CHECK(r1 <= 1e-2);
  const double r2 = channel_fixed_point_check(ChannelSpec::from_kt(5e-5), FockCutoff(16));
  CHECK(r2 <= 0.7 * r1);
  CHECK(r2 >= 0.3 * r1);  // halving dt roughly halves the defect
  CHECK_THROWS_AS(channel_fixed_point_check(ChannelSpec::from_kt(0.0), FockCutoff(16)),
                  DomainError);
}

TEST_CASE("vacuum is the channel fixed point") {
  const auto vac = fock::DensityMatrix::number_projector(0, FockCutoff(12));
  const auto out = damp_matrix(vac, ChannelSpec::from_kt(0.8));
  CHECK((out.entries() - vac.entries()).cwiseAbs().maxCoeff() <= 1e-12);
}
