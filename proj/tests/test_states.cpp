#include "fockpart/states.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"

using namespace fockpart;
using namespace fockpart::states;
using fock::FockCutoff;

TEST_CASE("number states") {
  const auto vac = number_state(0, FockCutoff(8));
  CHECK(vac.prob(0) == 1.0);
  CHECK(vac.tail_mass() == 0.0);

  const auto e3 = number_state(3, FockCutoff(8));
  for (int m = 0; m < 8; ++m) CHECK(e3.prob(m) == (m == 3 ? 1.0 : 0.0));
  CHECK(e3.label().family == StateFamily::kNumber);

  CHECK_THROWS_AS(number_state(8, FockCutoff(8)), DomainError);
}

TEST_CASE("binomial states") {
  const auto bs = binomial_state(2, 0.3, FockCutoff(8));
  CHECK(bs.prob(0) == doctest::Approx(0.49).epsilon(1e-14));
  CHECK(bs.prob(1) == doctest::Approx(0.42).epsilon(1e-14));
  CHECK(bs.prob(2) == doctest::Approx(0.09).epsilon(1e-14));
  CHECK(bs.prob(3) == 0.0);
  CHECK(bs.tail_mass() == 0.0);

  const auto ground = binomial_state(0, 0.7, FockCutoff(4));
  CHECK(ground.prob(0) == doctest::Approx(1.0).epsilon(1e-15));

  const auto even = binomial_state(1, 0.5, FockCutoff(4));
  CHECK(even.prob(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(even.prob(1) == doctest::Approx(0.5).epsilon(1e-15));

  double trace = 0.0;
  const auto big = binomial_state(60, 0.8, FockCutoff(64));
  for (int m = 0; m < big.dim(); ++m) trace += big.prob(m);
  CHECK(std::abs(trace - 1.0) <= 1e-13);

  CHECK_THROWS_AS(binomial_state(8, 0.5, FockCutoff(8)), DomainError);
  CHECK_THROWS_AS(binomial_state(2, 0.0, FockCutoff(8)), DomainError);
}

TEST_CASE("negative binomial states and their tails") {
  const auto thermal_like = negbinomial_state(0, 0.5, FockCutoff(64));
  const auto thermal = thermal_state(0.5, FockCutoff(64));
  for (int m = 0; m < 64; ++m) {
    CHECK(std::abs(thermal_like.prob(m) - thermal.prob(m)) <= 1e-14);
  }

  const auto nbs = negbinomial_state(1, 0.5, FockCutoff(64));
  CHECK(nbs.prob(0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(nbs.prob(1) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(nbs.prob(2) == doctest::Approx(0.1875).epsilon(1e-14));

  double trace = 0.0;
  for (int m = 0; m < nbs.dim(); ++m) trace += nbs.prob(m);
  CHECK(std::abs(trace + nbs.tail_mass() - 1.0) <= 1e-12);

  // requested cutoff too small for the tail tolerance: auto-extension grows it
  const auto grown = negbinomial_state(2, 0.5, FockCutoff(4), 1e-12);
  CHECK(grown.dim() > 4);
  CHECK(grown.tail_mass() < 1e-12);

  // beyond any representable cutoff: error carries a suggestion
  CHECK_THROWS_AS(negbinomial_state(1, 0.001, FockCutoff(64), 1e-12), CutoffError);
  try {
    negbinomial_state(1, 0.001, FockCutoff(64), 1e-12);
  } catch (const CutoffError& e) {
    CHECK(e.suggested_dim > 4096);
  }
  CHECK_THROWS_AS(negbinomial_state(1, 1.0, FockCutoff(64)), DomainError);
}

TEST_CASE("thermal states") {
  const auto th = thermal_state(0.5, FockCutoff(20));
  for (int m = 0; m < 20; ++m) {
    CHECK(th.prob(m) == doctest::Approx(std::pow(0.5, m + 1)).epsilon(1e-14));
  }
  CHECK(th.tail_mass() == doctest::Approx(std::pow(0.5, 20)).epsilon(1e-13));

  const auto cold = thermal_state(0.999, FockCutoff(16));
  CHECK(cold.prob(0) == doctest::Approx(0.999).epsilon(1e-14));
  CHECK_THROWS_AS(thermal_state(0.0, FockCutoff(16)), DomainError);
}

TEST_CASE("mean photon number") {
  CHECK(mean_photon(number_state(0, FockCutoff(8))).value == 0.0);
  CHECK(mean_photon(number_state(7, FockCutoff(8))).value == 7.0);

  const auto th = thermal_state(0.5, FockCutoff(40));
  const auto mp = mean_photon(th);
  // n_c = (1-gamma)/gamma = 1, recovered exactly once the tail moment is added
  CHECK(std::abs(mp.value + mp.tail_correction - 1.0) <= 1e-12);

  const auto nbs = negbinomial_state(3, 0.4, FockCutoff(128));
  const auto mp2 = mean_photon(nbs);
  // NB mean: (s+1)(1-gamma)/gamma
  CHECK(std::abs(mp2.value + mp2.tail_correction - 4.0 * 0.6 / 0.4) <= 1e-11);
}

TEST_CASE("photon subtraction: thermal input generates the negative binomial state") {
  for (double gamma : {0.2, 0.5, 0.8}) {
    const double nc = (1.0 - gamma) / gamma;
    for (int s = 0; s <= 5; ++s) {
      const auto input = thermal_state(gamma, FockCutoff(256));
      const auto result = photon_subtract(input, s);
      const auto expected = negbinomial_state(s, gamma, FockCutoff(256));
      for (int m = 0; m < 256; ++m) {
        CHECK(std::abs(result.state.prob(m) - expected.prob(m)) <= 1e-12);
      }
      const double norm_expected = specfun::factorial(s) * std::pow(nc, s);
      CHECK(std::abs(result.norm - norm_expected) <= 1e-10 * norm_expected);
    }
  }
}

TEST_CASE("photon subtraction: frozen examples and edge cases") {
  const auto th = thermal_state(0.5, FockCutoff(64));
  const auto sub = photon_subtract(th, 1);
  CHECK(sub.norm == doctest::Approx(1.0).epsilon(1e-12));  // 1! * n_c, n_c = 1

  const auto fock3 = number_state(3, FockCutoff(8));
  const auto dropped = photon_subtract(fock3, 1);
  CHECK(dropped.norm == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(dropped.state.prob(2) == doctest::Approx(1.0));
  CHECK(dropped.state.label().family == StateFamily::kNumber);
  CHECK(dropped.state.label().m == 2);

  CHECK_THROWS_AS(photon_subtract(number_state(0, FockCutoff(8)), 1),
                  DegenerateStateError);
  CHECK_THROWS_AS(photon_subtract(th, 64), DomainError);

  const auto untouched = photon_subtract(th, 0);
  CHECK(untouched.norm == doctest::Approx(1.0).epsilon(1e-12));
  for (int m = 0; m < 64; ++m) {
    CHECK(std::abs(untouched.state.prob(m) - th.prob(m)) <= 1e-13);
  }
}

TEST_CASE("normally ordered NBS diagonal reproduces the pmf") {
  // s = 0 is the thermal normal form gamma :e^{-gamma a+a}:; the alternating
  // sum carries a mild cancellation floor that grows with the level
  for (double gamma : {0.2, 0.5, 0.8}) {
    for (int m = 0; m < 20; ++m) {
      CHECK(std::abs(nbs_normal_ordered_diag(0, gamma, m) -
                     gamma * std::pow(1.0 - gamma, m)) <= 5e-12);
    }
  }
  CHECK(nbs_normal_ordered_diag(1, 0.5, 0) == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(std::abs(nbs_normal_ordered_diag(2, 0.3, 5) -
                 specfun::negbin_weight(2, 5, 0.3).value()) <= 1e-10);
  for (double gamma : {0.2, 0.5, 0.8}) {
    for (int s = 0; s <= 5; ++s) {
      for (int m = 0; m < 40; ++m) {
        const double expected = specfun::negbin_weight(s, m, gamma).value();
        CHECK(std::abs(nbs_normal_ordered_diag(s, gamma, m) - expected) <= 1e-10);
      }
    }
  }
}

TEST_CASE("the normal-ordered NBS exponent sign is forced by the s = 0 limit") {
  // with the printed +gamma sign the s = 0 diagonal is gamma (1+gamma)^m,
  // which is not a thermal distribution; the frozen -gamma sign is.
  const auto wrong = nbs_normal_ordered_series(0, 0.5, +0.5, 2);
  const double at_level_1 = fock::normal_diag_eval(wrong, 1);
  CHECK(std::abs(at_level_1 - 0.5 * 1.5) <= 1e-14);        // gamma (1+gamma)
  CHECK(std::abs(at_level_1 - 0.25) > 0.4);                // != gamma (1-gamma)
}

TEST_CASE("anti-normal thermal diagonal across both evaluation regimes") {
  for (double gamma : {0.2, 0.5, 0.8}) {
    for (int k : {0, 1, 5, 17, 30, 219}) {
      const double expected = gamma * std::pow(1.0 - gamma, k);
      const double got = thermal_antinormal_diag(gamma, k);
      CHECK(std::abs(got - expected) <= 1e-11 * std::max(expected, 1e-300));
    }
  }
}

TEST_CASE("anti-normal realization of the NBS diagonal") {
  // (1/(s! n_c^s)) (m+s)!/m! t_{m+s} with t from the anti-normal thermal form
  for (double gamma : {0.2, 0.5, 0.8}) {
    const double nc = (1.0 - gamma) / gamma;
    for (int s = 0; s <= 5; ++s) {
      for (int m = 0; m < 24; ++m) {
        const double weight = std::exp(specfun::log_factorial(m + s) -
                                       specfun::log_factorial(m) -
                                       specfun::log_factorial(s) -
                                       s * std::log(nc));
        const double diag = weight * thermal_antinormal_diag(gamma, m + s);
        const double expected = specfun::negbin_weight(s, m, gamma).value();
        CHECK(std::abs(diag - expected) <= 1e-10);
      }
    }
  }
}

TEST_CASE("custom states enforce the diagonal-state invariant") {
  CHECK_THROWS_AS(DiagonalState::custom({0.5, 0.4}, 0.0), DomainError);
  CHECK_THROWS_AS(DiagonalState::custom({0.7, -0.3, 0.6}, 0.0), DomainError);
  const auto ok = DiagonalState::custom({0.5, 0.3}, 0.2);
  CHECK(ok.label().family == StateFamily::kCustom);
  CHECK(mean_photon(ok).tail_correction == doctest::Approx(0.2 * 2));
}

TEST_CASE("JSON serialization is byte-stable and carries the state fields") {
  const auto th = thermal_state(0.5, FockCutoff(4));
  const std::string a = to_json(th);
  const std::string b = to_json(th);
  CHECK(a == b);
  CHECK(a.find("\"label\":\"thermal\"") != std::string::npos);
  CHECK(a.find("\"gamma\":0.5") != std::string::npos);
  CHECK(a.find("\"cutoff\":4") != std::string::npos);
  CHECK(a.find("\"probs\":[0.5,0.25,0.125,0.0625]") != std::string::npos);
  CHECK(a.find("\"tail_mass\":0.0625") != std::string::npos);

  const std::string nbs = to_json(negbinomial_state(2, 0.25, FockCutoff(128)));
  CHECK(nbs.find("\"label\":\"negbinomial\"") != std::string::npos);
  CHECK(nbs.find("\"s\":2") != std::string::npos);
}
