#include <benchmark/benchmark.h>

#include "fockpart/channels.hpp"
#include "fockpart/fockcore.hpp"
#include "fockpart/partition.hpp"
#include "fockpart/specfun.hpp"
#include "fockpart/states.hpp"

using namespace fockpart;

static void BM_Laguerre(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(specfun::laguerre(30, 25.0));
  }
}
BENCHMARK(BM_Laguerre);

static void BM_Hermite2(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(specfun::hermite2({40, 40}, {1.5, 0.0}, {2.0, 0.0}));
  }
}
BENCHMARK(BM_Hermite2);

static void BM_ShiftedHermiteGenfun(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        specfun::shifted_hermite_genfun_residual({2, 2}, 0.5, 1.0, 2.0, 120));
  }
}
BENCHMARK(BM_ShiftedHermiteGenfun);

static void BM_NegBinomialState(benchmark::State& state) {
  const fock::FockCutoff cutoff(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(states::negbinomial_state(3, 0.5, cutoff));
  }
}
BENCHMARK(BM_NegBinomialState)->Arg(64)->Arg(512);

static void BM_NbsNormalOrderedDiag(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(states::nbs_normal_ordered_diag(5, 0.8, 39));
  }
}
BENCHMARK(BM_NbsNormalOrderedDiag);

static void BM_ThermalAntinormalDiag(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(states::thermal_antinormal_diag(0.8, 100));
  }
}
BENCHMARK(BM_ThermalAntinormalDiag);

static void BM_DampDiagonal(benchmark::State& state) {
  const fock::FockCutoff cutoff(static_cast<int>(state.range(0)));
  const auto thermal = states::thermal_state(0.4, cutoff);
  const auto spec = channels::ChannelSpec::from_kt(0.35);
  for (auto _ : state) {
    benchmark::DoNotOptimize(channels::damp_diagonal(thermal, spec));
  }
}
BENCHMARK(BM_DampDiagonal)->Arg(128)->Arg(1024);

static void BM_DampMatrix(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const fock::FockCutoff cutoff(dim);
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
  const auto spec = channels::ChannelSpec::from_kt(0.35);
  for (auto _ : state) {
    benchmark::DoNotOptimize(channels::damp_matrix(rho, spec));
  }
}
BENCHMARK(BM_DampMatrix)->Arg(32)->Arg(64);

static void BM_BsPartition(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(partition::bs_partition(0.5, 200, 20));
  }
}
BENCHMARK(BM_BsPartition);

static void BM_NbsRouteAgreement(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(partition::nbs_partition_normal_route(0.5, 100, 10));
  }
}
BENCHMARK(BM_NbsRouteAgreement);

static void BM_GaussianIntegral(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(fock::gaussian_integral_check({2, 2}, {1.0, 0.0}));
  }
}
BENCHMARK(BM_GaussianIntegral);

static void BM_OperatorIdentity(benchmark::State& state) {
  const fock::FockCutoff cutoff(64);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fock::operator_identity_matrix_residual({3, 3}, cutoff));
  }
}
BENCHMARK(BM_OperatorIdentity);

BENCHMARK_MAIN();
