#include "fockpart/specfun.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"

using namespace fockpart;
using namespace fockpart::specfun;
using complexd = std::complex<double>;

namespace {

// Independent oracles: the explicit finite sums of the definitions, run in
// quad precision so alternating-sign cancellation cannot eat the digits the
// assertions need.

__float128 laguerre_series_q(int n, double x) {
  __float128 coef = 1.0;  // C(n,l) (-1)^l / l!
  __float128 acc = 0.0;
  __float128 xq = x;
  __float128 xpow = 1.0;
  for (int l = 0; l <= n; ++l) {
    acc += coef * xpow;
    xpow *= xq;
    coef *= -static_cast<__float128>(n - l) /
            ((static_cast<__float128>(l) + 1.0) * (static_cast<__float128>(l) + 1.0));
  }
  return acc;
}

__float128 factorial_q(int n) {
  __float128 f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

__float128 hermite2_series_q(int m, int n, double x, double y) {
  __float128 acc = 0.0;
  for (int l = 0; l <= std::min(m, n); ++l) {
    __float128 c = factorial_q(m) * factorial_q(n) /
                   (factorial_q(l) * factorial_q(m - l) * factorial_q(n - l));
    if (l % 2 == 1) c = -c;
    __float128 xp = 1.0, yp = 1.0;
    for (int i = 0; i < m - l; ++i) xp *= static_cast<__float128>(x);
    for (int i = 0; i < n - l; ++i) yp *= static_cast<__float128>(y);
    acc += c * xp * yp;
  }
  return acc;
}

complexd hermite2_series_small(int m, int n, complexd x, complexd y) {
  complexd acc{0.0, 0.0};
  for (int l = 0; l <= std::min(m, n); ++l) {
    double c = factorial(m) * factorial(n) /
               (factorial(l) * factorial(m - l) * factorial(n - l));
    if (l % 2 == 1) c = -c;
    complexd xp{1.0, 0.0}, yp{1.0, 0.0};
    for (int i = 0; i < m - l; ++i) xp *= x;
    for (int i = 0; i < n - l; ++i) yp *= y;
    acc += c * xp * yp;
  }
  return acc;
}

}  // namespace

TEST_CASE("LogWeight round trips and encodes exact zero") {
  CHECK(LogWeight::zero().value() == 0.0);
  CHECK(LogWeight::from_value(0.0).sign == 0);
  // moderate magnitudes round-trip at full precision
  for (double v : {1.0, -2.5, 3.7e4, -8.25e-14}) {
    const auto w = LogWeight::from_value(v);
    CHECK(w.value() == doctest::Approx(v).epsilon(1e-14));
    CHECK(w.sign == (v > 0 ? 1 : -1));
  }
  // extreme magnitudes lose ~|log|*eps through the log/exp round trip
  for (double v : {1e-300, 3.7e250}) {
    CHECK(LogWeight::from_value(v).value() == doctest::Approx(v).epsilon(1e-13));
  }
  const auto big = LogWeight::from_log(700.0, 1);
  CHECK(std::isfinite(big.value()));
}

TEST_CASE("laguerre matches the frozen values") {
  CHECK(laguerre(0, 7.3) == 1.0);
  CHECK(laguerre(1, 1.0) == 0.0);
  CHECK(laguerre(2, 2.0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK_THROWS_AS(laguerre(65, 1.0), DomainError);
  CHECK_THROWS_AS(laguerre(-1, 1.0), DomainError);
  CHECK_THROWS_AS(laguerre(3, std::nan("")), DomainError);
}

TEST_CASE("laguerre agrees with the quad-precision series on the spec domain") {
  for (int n : {1, 2, 5, 10, 17, 25, 30}) {
    for (double x : {-50.0, -12.5, -1.0, 0.0, 0.5, 7.0, 25.0, 50.0}) {
      const double exact = static_cast<double>(laguerre_series_q(n, x));
      const double got = laguerre(n, x);
      const double scale = std::max(1e-30, std::abs(exact));
      CHECK(std::abs(got - exact) / scale <= 1e-12);
    }
  }
}

TEST_CASE("laguerre generating function partial sums converge") {
  CHECK(laguerre_genfun_residual(0.0, 5.0, 1) == 0.0);
  CHECK(laguerre_genfun_residual(0.5, 1.0, 80) < 1e-10);
  // the residual keeps shrinking once past burn-in
  const double r10 = laguerre_genfun_residual(0.9, 2.0, 10);
  const double r40 = laguerre_genfun_residual(0.9, 2.0, 40);
  const double r160 = laguerre_genfun_residual(0.9, 2.0, 160);
  CHECK(r40 < r10);
  CHECK(r160 < r40);
  CHECK_THROWS_AS(laguerre_genfun_residual(1.0, 2.0, 10), DomainError);
  CHECK_THROWS_AS(laguerre_genfun_residual(-1.2, 2.0, 10), DomainError);
}

TEST_CASE("hermite2 frozen values and bounds") {
  CHECK(hermite2({0, 0}, {12.0, 3.0}, {-4.0, 0.1}) == complexd{1.0, 0.0});
  CHECK(hermite2({1, 1}, {2.0, 0.0}, {3.0, 0.0}).real() == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(hermite2({2, 1}, {2.0, 0.0}, {3.0, 0.0}).real() == doctest::Approx(8.0).epsilon(1e-14));
  CHECK_THROWS_AS(hermite2({65, 0}, {1, 0}, {1, 0}), DomainError);
  CHECK_THROWS_AS(hermite2({0, -1}, {1, 0}, {1, 0}), DomainError);
}

TEST_CASE("hermite2 agrees with the quad-precision explicit sum") {
  for (int m : {0, 1, 3, 7, 12, 20}) {
    for (int n : {0, 2, 5, 11, 20}) {
      for (double x : {-3.0, 0.5, 2.0}) {
        for (double y : {-2.0, 1.5, 4.0}) {
          const double exact = static_cast<double>(hermite2_series_q(m, n, x, y));
          const double got = hermite2({m, n}, {x, 0.0}, {y, 0.0}).real();
          const double scale = std::max(1.0, std::abs(exact));
          CHECK(std::abs(got - exact) / scale <= 1e-11);
        }
      }
    }
  }
}

TEST_CASE("hermite2 handles complex arguments and the symmetry H_mn(x,y) = H_nm(y,x)") {
  std::mt19937 rng(7u);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = trial % 5;
    const int n = (trial / 5) % 4;
    const complexd x{uni(rng), uni(rng)};
    const complexd y{uni(rng), uni(rng)};
    const complexd a = hermite2({m, n}, x, y);
    const complexd b = hermite2({n, m}, y, x);
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
    const complexd direct = hermite2_series_small(m, n, x, y);
    CHECK(std::abs(a - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("Laguerre / two-variable-Hermite link") {
  CHECK(hermite_laguerre_link_residual(0, 1.0, 1.0) == 0.0);
  // L_2(2) = -1 and H_22(1,2) = -2
  CHECK(laguerre(2, 2.0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(hermite2({2, 2}, {1.0, 0.0}, {2.0, 0.0}).real() == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK(hermite_laguerre_link_residual(2, 1.0, 2.0) <= 1e-12);
  CHECK(hermite_laguerre_link_residual(10, 3.0, 1.5) <= 1e-10);
  CHECK_THROWS_AS(hermite_laguerre_link_residual(31, 1.0, 1.0), DomainError);
}

TEST_CASE("link residual below 1e-10 across the n <= 20, |x|,|y| <= 5 grid") {
  for (int n = 0; n <= 20; ++n) {
    for (double x : {-5.0, -2.5, 0.5, 3.0, 5.0}) {
      for (double y : {-5.0, -1.0, 1.5, 5.0}) {
        CHECK(hermite_laguerre_link_residual(n, x, y) <= 1e-10);
      }
    }
  }
}

TEST_CASE("three-way Laguerre consistency: series, generating function, Hermite link") {
  // laguerre vs the quad series is covered above; close the triangle by
  // checking the generating-function partial sums against laguerre and the
  // Hermite route against laguerre on a shared grid.
  for (int n : {0, 3, 9, 15, 20}) {
    for (double x : {0.3, 2.0, 8.0, 20.0}) {
      CHECK(hermite_laguerre_link_residual(n, 1.0, x) <= 1e-10);
      CHECK(laguerre_genfun_residual(0.4, x, 240) <= 1e-10);
    }
  }
}

TEST_CASE("shifted two-variable Hermite generating function") {
  CHECK(shifted_hermite_genfun_residual({0, 0}, 0.0, 1.3, -0.4, 1) == 0.0);
  CHECK(shifted_hermite_genfun_residual({1, 1}, 0.3, 1.0, 2.0, 60) <= 1e-10);
  CHECK(shifted_hermite_genfun_residual({2, 0}, 0.4, 0.5, 1.5, 60) <= 1e-10);
  for (int m = 0; m <= 4; ++m) {
    for (int n = 0; n <= 4; ++n) {
      for (double lam : {-0.5, 0.25, 0.5}) {
        CHECK(shifted_hermite_genfun_residual({m, n}, lam, 1.0, 2.0, 120) <= 1e-10);
        CHECK(shifted_hermite_genfun_residual({m, n}, lam, -1.5, 0.5, 120) <= 1e-10);
      }
    }
  }
  CHECK_THROWS_AS(shifted_hermite_genfun_residual({1, 1}, -1.0, 1.0, 1.0, 10), DomainError);
  CHECK_THROWS_AS(shifted_hermite_genfun_residual({1, 1}, 1.0, 1.0, 1.0, 10), DomainError);
}

TEST_CASE("generalized negative binomial theorem with Laguerre weights") {
  // closed side at (n=0, lam=0.5, z=1) is (2/3) e^{1/3}
  const double closed = std::pow(1.5, -1.0) * std::exp(0.5 * 1.0 / 1.5) *
                        laguerre(0, 1.0 / 1.5);
  CHECK(closed == doctest::Approx(0.93040828339072635).epsilon(1e-15));
  CHECK(gen_negbin_laguerre_residual(0, 0.5, 1.0, 100) <= 1e-12);
  CHECK(gen_negbin_laguerre_residual(7, 0.0, 3.0, 1) == 0.0);
  for (int n : {0, 1, 3, 6, 10}) {
    for (double lam : {0.1, 0.3, 0.5}) {
      for (double z : {0.0, 1.0, 2.5, 5.0}) {
        CHECK(gen_negbin_laguerre_residual(n, lam, z, 300) <= 1e-10);
      }
    }
  }
  CHECK_THROWS_AS(gen_negbin_laguerre_residual(3, -0.1, 1.0, 10), DomainError);
  CHECK_THROWS_AS(gen_negbin_laguerre_residual(3, 1.0, 1.0, 10), DomainError);
  CHECK_THROWS_AS(gen_negbin_laguerre_residual(21, 0.5, 1.0, 10), DomainError);
}

TEST_CASE("z = 0 degenerates to the pure negative-binomial formula") {
  // sum_l (n+l)!(-lam)^l/(l!n!) = (1+lam)^{-n-1}; n=3, lam=0.5 gives 1.5^-4
  CHECK(std::pow(1.5, -4.0) == doctest::Approx(0.19753086419753086).epsilon(1e-15));
  for (int n = 0; n <= 10; ++n) {
    for (double lam : {0.1, 0.3, 0.5}) {
      CHECK(gen_negbin_laguerre_residual(n, lam, 0.0, 400) <= 1e-12);
    }
  }
}

TEST_CASE("binomial weights: frozen values and exact normalization") {
  CHECK(binom_weight(2, 0, 0.3).value() == doctest::Approx(0.49).epsilon(1e-15));
  CHECK(binom_weight(2, 1, 0.3).value() == doctest::Approx(0.42).epsilon(1e-15));
  CHECK(binom_weight(0, 0, 0.5).value() == doctest::Approx(1.0).epsilon(1e-15));
  for (int n : {1, 2, 8, 64, 256}) {
    for (double sigma : {0.2, 0.5, 0.8}) {
      double sum = 0.0;
      for (int l = 0; l <= n; ++l) sum += binom_weight(n, l, sigma).value();
      CHECK(std::abs(sum - 1.0) <= 1e-13);
    }
  }
  // at n ~ 10^3 the lgamma round-off in each term grows with log C(n, n/2)
  double big_sum = 0.0;
  for (int l = 0; l <= 1024; ++l) big_sum += binom_weight(1024, l, 0.5).value();
  CHECK(std::abs(big_sum - 1.0) <= 1e-11);
  CHECK_THROWS_AS(binom_weight(2, 3, 0.5), DomainError);
  CHECK_THROWS_AS(binom_weight(2, 0, 0.0), DomainError);
  CHECK_THROWS_AS(binom_weight(2, 0, 1.0), DomainError);
}

TEST_CASE("negative binomial weights: frozen values, thermal reduction, tails") {
  for (int m = 0; m < 8; ++m) {
    CHECK(negbin_weight(0, m, 0.5).value() ==
          doctest::Approx(std::pow(0.5, m + 1)).epsilon(1e-14));
  }
  CHECK(negbin_weight(1, 0, 0.5).value() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(negbin_weight(1, 2, 0.5).value() == doctest::Approx(0.1875).epsilon(1e-15));

  // retained mass plus analytic tail is one; the tail strictly decreases in D
  for (int s : {0, 1, 5}) {
    for (double gamma : {0.2, 0.5, 0.8}) {
      double prev_tail = 2.0;
      for (int dim : {64, 128, 256}) {
        double sum = 0.0;
        for (int m = 0; m < dim; ++m) sum += negbin_weight(s, m, gamma).value();
        double tail = 0.0;
        for (int m = dim; m < dim + 2000; ++m) {
          const double t = negbin_weight(s, m, gamma).value();
          tail += t;
          if (t < 1e-25 * std::max(tail, 1e-300)) break;
        }
        CHECK(std::abs(sum + tail - 1.0) <= 1e-12);
        CHECK(tail > 0.0);
        CHECK(tail < prev_tail);
        prev_tail = tail;
      }
    }
  }
  CHECK_THROWS_AS(negbin_weight(1, 1, 0.0), DomainError);
  CHECK_THROWS_AS(negbin_weight(-1, 1, 0.5), DomainError);
}

TEST_CASE("Cauchy rearrangement of finite double sums") {
  const std::vector<double> one{1.0};
  CHECK(cauchy_rearrange_check(one, one));

  const std::vector<double> a{1.0, 2.0, 3.0};
  const std::vector<double> b{4.0, 5.0};
  CHECK(cauchy_rearrange_check(a, b));

  std::vector<double> geo_a(20), geo_b(20);
  for (int i = 0; i < 20; ++i) {
    geo_a[static_cast<std::size_t>(i)] = std::pow(0.5, i);
    geo_b[static_cast<std::size_t>(i)] = std::pow(0.3, i);
  }
  CHECK(cauchy_rearrange_check(geo_a, geo_b));
}
