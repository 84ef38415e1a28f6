#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>

#include "fockpart/channels.hpp"
#include "fockpart/fockcore.hpp"
#include "fockpart/partition.hpp"
#include "fockpart/specfun.hpp"
#include "fockpart/states.hpp"

namespace fockpart::tools {

namespace {

using nlohmann::json;

class RowBuilder {
 public:
  RowBuilder(const VerifyOptions& options) : options_(options) {}

  void add(const std::string& identity, const std::string& params, double residual,
           double default_tol) {
    CheckRow row;
    row.identity = identity;
    row.params = params;
    row.residual = residual;
    row.tol = options_.tol_override.value_or(default_tol);
    row.pass = residual <= row.tol;
    rows_.push_back(std::move(row));
  }

  bool defect(const std::string& name) const { return options_.defect == name; }

  std::vector<CheckRow> take() { return std::move(rows_); }

 private:
  const VerifyOptions& options_;
  std::vector<CheckRow> rows_;
};

std::string fmt(const char* format, ...) {
  char buf[160];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

// ---------------------------------------------------------------- specfun --

void specfun_suite(RowBuilder& rows, const json& grids) {
  namespace sf = fockpart::specfun;

  {
    const auto& g = grids.at("laguerre_link");
    const int n_max = g.at("n_max");
    double worst = 0.0;
    for (int n = 0; n <= n_max; ++n) {
      for (double x : g.at("xs")) {
        for (double y : g.at("ys")) {
          worst = std::max(worst, sf::hermite_laguerre_link_residual(n, x, y));
        }
      }
    }
    rows.add("laguerre_hermite_link", fmt("n<=%d, |x|,|y|<=5 grid", n_max), worst,
             g.at("tol"));
  }
  {
    const auto& g = grids.at("laguerre_genfun");
    for (const auto& c : g.at("cases")) {
      const double z = c.at(0), x = c.at(1);
      const int terms = c.at(2);
      rows.add("laguerre_genfun",
               fmt("z=%g, x=%g, terms=%d", z, x, terms),
               sf::laguerre_genfun_residual(z, x, terms), g.at("tol"));
    }
  }
  {
    const auto& g = grids.at("shifted_hermite_genfun");
    const int mn_max = g.at("mn_max");
    const int terms = g.at("terms");
    double worst = 0.0;
    for (int m = 0; m <= mn_max; ++m) {
      for (int n = 0; n <= mn_max; ++n) {
        for (double lam : g.at("lams")) {
          for (const auto& xy : g.at("xys")) {
            worst = std::max(worst, sf::shifted_hermite_genfun_residual(
                                        {m, n}, lam, xy.at(0), xy.at(1), terms));
          }
        }
      }
    }
    rows.add("shifted_hermite_genfun",
             fmt("m,n<=%d, |lam|<=0.5, terms=%d", mn_max, terms), worst, g.at("tol"));
  }
  {
    const auto& g = grids.at("gen_negbin_laguerre");
    const int n_max = g.at("n_max");
    const int terms = g.at("terms");
    double worst = 0.0;
    for (int n = 0; n <= n_max; ++n) {
      for (double lam : g.at("lams")) {
        for (double z : g.at("zs")) {
          worst = std::max(worst, sf::gen_negbin_laguerre_residual(n, lam, z, terms));
        }
      }
    }
    rows.add("gen_negbin_laguerre", fmt("n<=%d, lam<=0.5, z<=5", n_max), worst,
             g.at("tol"));
  }
  {
    const auto& g = grids.at("negbin_formula");
    const int n_max = g.at("n_max");
    const int terms = g.at("terms");
    double worst = 0.0;
    for (int n = 0; n <= n_max; ++n) {
      for (double lam : g.at("lams")) {
        worst = std::max(worst, sf::gen_negbin_laguerre_residual(n, lam, 0.0, terms));
      }
    }
    rows.add("negbin_formula_z0", fmt("n<=%d, lam<=0.5", n_max), worst, g.at("tol"));
  }
  {
    const auto& g = grids.at("binom_weight_norm");
    double worst = 0.0;
    for (int n : g.at("ns")) {
      for (double sigma : g.at("sigmas")) {
        double sum = 0.0;
        for (int l = 0; l <= n; ++l) sum += sf::binom_weight(n, l, sigma).value();
        worst = std::max(worst, std::abs(sum - 1.0));
      }
    }
    rows.add("binom_weight_normalization", "n<=256, sigma grid", worst, g.at("tol"));
  }
  {
    const auto& g = grids.at("negbin_weight_norm");
    const int dim = g.at("dim");
    double worst = 0.0;
    for (int s : g.at("ss")) {
      for (double gamma : g.at("gammas")) {
        double sum = 0.0;
        for (int m = 0; m < dim; ++m) sum += sf::negbin_weight(s, m, gamma).value();
        double tail = 0.0;
        for (int m = dim; m < dim + 4000; ++m) {
          const double t = sf::negbin_weight(s, m, gamma).value();
          tail += t;
          if (t < 1e-25 * std::max(tail, 1e-300)) break;
        }
        worst = std::max(worst, std::abs(sum + tail - 1.0));
      }
    }
    rows.add("negbin_weight_normalization", fmt("s<=5, gamma grid, dim=%d", dim), worst,
             g.at("tol"));
  }
  {
    const auto& g = grids.at("cauchy_rearrange");
    std::vector<double> a(20), b(20);
    for (int i = 0; i < 20; ++i) {
      a[static_cast<std::size_t>(i)] = std::pow(0.5, i);
      b[static_cast<std::size_t>(i)] = std::pow(0.3, i);
    }
    const bool ok = sf::cauchy_rearrange_check(a, b) &&
                    sf::cauchy_rearrange_check(std::vector<double>{1.0, 2.0, 3.0},
                                               std::vector<double>{4.0, 5.0});
    rows.add("cauchy_rearrange", "geometric + integer arrays", ok ? 0.0 : 1.0,
             g.at("tol"));
  }
}

// --------------------------------------------------------------- ordering --

void ordering_suite(RowBuilder& rows, const json& grids) {
  namespace fk = fockpart::fock;

  {
    const auto& g = grids.at("normal_exp_closed_form");
    const int levels = g.at("levels");
    double worst = 0.0;
    for (double lam : g.at("lams")) {
      const auto series = fk::OrderedSeries::exponential(fk::Ordering::kNormal, lam,
                                                         levels + 1);
      for (int m = 0; m < levels; ++m) {
        const double expected = std::pow(1.0 + lam, m);
        worst = std::max(worst, std::abs(fk::normal_diag_eval(series, m) - expected) /
                                    std::max(1.0, std::abs(expected)));
      }
    }
    rows.add("normal_exp_closed_form", fmt("(1+lam)^m, m<%d", levels), worst,
             g.at("tol"));
  }
  {
    const auto& g = grids.at("vacuum_projector_delta");
    const int levels = g.at("levels");
    const auto series =
        fk::OrderedSeries::exponential(fk::Ordering::kNormal, -1.0, levels + 1);
    double worst = 0.0;
    for (int m = 0; m < levels; ++m) {
      const double expected = (m == 0) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(fk::normal_diag_eval(series, m) - expected));
    }
    rows.add("vacuum_projector_delta", fmt("lam=-1, m<%d", levels), worst, g.at("tol"));
  }
  {
    const auto& g = grids.at("antinormal_exp_closed_form");
    const int levels = g.at("levels");
    double worst = 0.0;
    for (double lam : g.at("lams")) {
      const auto series =
          fk::OrderedSeries::exponential(fk::Ordering::kAntinormal, lam, 4096);
      for (int m = 0; m < levels; ++m) {
        const double expected = std::pow(1.0 - lam, -(m + 1.0));
        worst = std::max(worst, std::abs(fk::antinormal_diag_eval(series, m) - expected) /
                                    expected);
      }
    }
    rows.add("antinormal_exp_closed_form", fmt("(1-lam)^-(m+1), m<%d", levels), worst,
             g.at("tol"));
  }
  {
    const auto& g = grids.at("ordered_exp_conversion");
    const int levels = g.at("levels");
    double worst = 0.0;
    for (double lam : g.at("lams")) {
      worst = std::max(worst, fk::ordered_exp_conversion_residual(lam, levels));
    }
    rows.add("ordered_exp_conversion", fmt("lam grid, levels=%d", levels), worst,
             g.at("tol"));
  }
  {
    const auto& g = grids.at("appendix_identity");
    const int mn_max = g.at("mn_max");
    const fk::FockCutoff cutoff(g.at("dim"));
    double worst = 0.0;
    for (int m = 0; m <= mn_max; ++m) {
      for (int n = 0; n <= mn_max; ++n) {
        worst = std::max(worst, fk::operator_identity_matrix_residual({m, n}, cutoff));
      }
    }
    rows.add("appendix_operator_identity", fmt("m,n<=%d, dim=%d", mn_max, cutoff.dim),
             worst, g.at("tol"));
  }
  {
    const auto& g = grids.at("shifted_antinormal");
    const int mn_max = g.at("mn_max");
    const fk::FockCutoff cutoff(g.at("dim"));
    double worst = 0.0;
    for (int m = 0; m <= mn_max; ++m) {
      for (int n = 0; n <= mn_max; ++n) {
        for (double lam : g.at("lams")) {
          worst = std::max(worst,
                           fk::shifted_antinormal_matrix_residual({m, n}, lam, cutoff));
        }
      }
    }
    rows.add("shifted_antinormal_series", fmt("m,n<=%d, dim=%d", mn_max, cutoff.dim),
             worst, g.at("tol"));
  }
  {
    const auto& g = grids.at("gaussian_integral");
    const int mn_max = g.at("mn_max");
    double worst = 0.0;
    for (int m = 0; m <= mn_max; ++m) {
      for (int n = 0; n <= mn_max; ++n) {
        for (const auto& a : g.at("alphas")) {
          worst = std::max(worst, fk::gaussian_integral_check(
                                      {m, n}, {a.at(0), a.at(1)}));
        }
      }
    }
    rows.add("gaussian_moment_integral", fmt("m,n<=%d, |alpha|<=1.5", mn_max), worst,
             g.at("tol"));
  }
  {
    const auto& g = grids.at("coherent_completeness");
    const int levels = g.at("levels");
    rows.add("coherent_completeness", fmt("levels=%d", levels),
             fk::coherent_completeness_residual(levels), g.at("tol"));
  }
}

// -------------------------------------------------------------- partition --

void partition_suite(RowBuilder& rows, const json& grids) {
  namespace pt = fockpart::partition;
  namespace st = fockpart::states;
  namespace sf = fockpart::specfun;

  {
    const auto& g = grids.at("bs_residual");
    const int terms = g.at("terms");
    const int levels = g.at("levels");
    double worst = 0.0;
    for (double sigma : g.at("sigmas")) {
      worst = std::max(worst, pt::bs_partition(sigma, terms, levels).max_residual);
    }
    rows.add("bs_partition_residual", fmt("sigma grid, terms=%d, levels=%d", terms, levels),
             worst, g.at("tol"));
  }
  {
    const auto& g = grids.at("bs_tail_match");
    const int terms = g.at("terms");
    const int levels = g.at("levels");
    double worst = 0.0;
    for (double sigma : g.at("sigmas")) {
      const auto report = pt::bs_partition(sigma, terms, levels);
      for (int l = 0; l < levels; ++l) {
        worst = std::max(worst,
                         std::abs(report.residuals[static_cast<std::size_t>(l)] -
                                  pt::bs_partition_tail(sigma, terms, l)));
      }
    }
    rows.add("bs_closed_form_tail", fmt("sigma grid, terms=%d", terms), worst,
             g.at("tol"));
  }
  {
    const auto& g = grids.at("bs_level0_geometric");
    const double sigma = g.at("sigma");
    const int terms = g.at("terms");
    const auto report = pt::bs_partition(sigma, terms, 1);
    const double expected = std::pow(1.0 - sigma, terms);
    rows.add("bs_level0_geometric_tail", fmt("sigma=%g, terms=%d", sigma, terms),
             std::abs(report.residuals[0] - expected), g.at("tol"));
  }
  {
    const auto& g = grids.at("nbs_residual");
    const int terms = g.at("terms");
    const int levels = g.at("levels");
    double worst = 0.0;
    for (double gamma : g.at("gammas")) {
      worst = std::max(worst, pt::nbs_partition(gamma, terms, levels).max_residual);
    }
    rows.add("nbs_partition_residual", fmt("gamma grid, terms=%d, levels=%d", terms, levels),
             worst, g.at("tol"));
  }
  {
    const auto& g = grids.at("nbs_tail_match");
    const int terms = g.at("terms");
    const int levels = g.at("levels");
    double worst = 0.0;
    for (double gamma : g.at("gammas")) {
      const auto report = pt::nbs_partition(gamma, terms, levels);
      for (int m = 0; m < levels; ++m) {
        worst = std::max(worst,
                         std::abs(report.residuals[static_cast<std::size_t>(m)] -
                                  pt::nbs_partition_tail(gamma, terms, m)));
      }
    }
    rows.add("nbs_closed_form_tail", fmt("gamma grid, terms=%d", terms), worst,
             g.at("tol"));
  }
  {
    const auto& g = grids.at("normal_ordered_weights");
    const int s_max = g.at("s_max");
    const int levels = g.at("levels");
    // self-test hook: flipping the frozen exponent sign must trip this row
    const double sign = rows.defect("nbs-exponent-sign") ? +1.0 : -1.0;
    double worst = 0.0;
    for (double gamma : g.at("gammas")) {
      for (int s = 0; s <= s_max; ++s) {
        for (int m = 0; m < levels; ++m) {
          const auto series =
              st::nbs_normal_ordered_series(s, gamma, sign * gamma, m + 1);
          const double got = fockpart::fock::normal_diag_eval(series, m);
          worst = std::max(worst,
                           std::abs(got - sf::negbin_weight(s, m, gamma).value()));
        }
      }
    }
    rows.add("normal_ordered_nbs_weights",
             fmt("s<=%d, m<%d, gamma grid", s_max, levels), worst, g.at("tol"));
  }
  {
    const auto& g = grids.at("route_agreement");
    const int terms = g.at("terms");
    const int levels = g.at("levels");
    double worst = 0.0;
    for (double gamma : g.at("gammas")) {
      const double nc = (1.0 - gamma) / gamma;
      const auto direct = pt::nbs_partition(gamma, terms, levels);
      const auto anti = pt::nbs_antinormal_resummation(gamma, terms, levels);
      const auto normal = pt::nbs_partition_normal_route(gamma, terms, levels);
      for (int m = 0; m < levels; ++m) {
        const double p1 = direct.partial_sums[static_cast<std::size_t>(m)];
        const double p2 = nc * anti.partial_sums[static_cast<std::size_t>(m)];
        const double p3 = normal.partial_sums[static_cast<std::size_t>(m)];
        worst = std::max({worst, std::abs(p1 - p2), std::abs(p1 - p3),
                          std::abs(p2 - p3)});
      }
    }
    rows.add("nbs_three_route_agreement", fmt("gamma grid, terms=%d", terms), worst,
             g.at("tol"));
  }
  {
    const auto& g = grids.at("antinormal_resummation");
    const int terms = g.at("terms");
    const int levels = g.at("levels");
    double worst = 0.0;
    for (double gamma : g.at("gammas")) {
      worst = std::max(
          worst, pt::nbs_antinormal_resummation(gamma, terms, levels).max_residual);
    }
    rows.add("nbs_antinormal_resummation", fmt("gamma grid, terms=%d", terms), worst,
             g.at("tol"));
  }
  {
    const auto& g = grids.at("number_completeness");
    const int levels = g.at("levels");
    rows.add("number_completeness", fmt("levels=%d", levels),
             pt::number_completeness(levels), g.at("tol"));
  }
}

// ---------------------------------------------------------------- channel --

void channel_suite(RowBuilder& rows, const json& grids) {
  namespace ch = fockpart::channels;
  namespace st = fockpart::states;
  using fockpart::fock::FockCutoff;

  {
    const auto& g = grids.at("number_to_binomial");
    const int m_max = g.at("m_max");
    const FockCutoff cutoff(g.at("dim"));
    double worst = 0.0;
    for (int m = 0; m <= m_max; ++m) {
      for (double survival : g.at("survivals")) {
        const auto damped = ch::damp_diagonal(st::number_state(m, cutoff),
                                              ch::ChannelSpec::from_survival(survival));
        double trace = 0.0;
        for (int l = 0; l < cutoff.dim; ++l) trace += damped.prob(l);
        worst = std::max(worst, std::abs(trace - 1.0));
        if (m == 0) continue;
        const auto bs = st::binomial_state(m, survival, cutoff);
        for (int l = 0; l < cutoff.dim; ++l) {
          worst = std::max(worst, std::abs(damped.prob(l) - bs.prob(l)));
        }
      }
    }
    rows.add("number_to_binomial", fmt("m<=%d, survival grid", m_max), worst,
             g.at("tol"));
  }
  {
    const auto& g = grids.at("trace_preservation");
    const FockCutoff cutoff(g.at("dim"));
    const auto thermal = st::thermal_state(g.at("gamma"), cutoff);
    double worst = 0.0;
    for (double kt : g.at("kts")) {
      const auto out = ch::damp_diagonal(thermal, ch::ChannelSpec::from_kt(kt));
      double trace = out.tail_mass();
      for (int m = 0; m < out.dim(); ++m) trace += out.prob(m);
      worst = std::max(worst, std::abs(trace - 1.0));
    }
    rows.add("trace_preservation", fmt("kt grid, dim=%d", cutoff.dim), worst,
             g.at("tol"));
  }
  {
    const auto& g = grids.at("semigroup");
    const FockCutoff cutoff(g.at("dim"));
    const auto thermal = st::thermal_state(g.at("gamma"), cutoff);
    double worst = 0.0;
    for (const auto& pair : g.at("kt_pairs")) {
      const double kt1 = pair.at(0), kt2 = pair.at(1);
      const auto two_step = ch::damp_diagonal(
          ch::damp_diagonal(thermal, ch::ChannelSpec::from_kt(kt1)),
          ch::ChannelSpec::from_kt(kt2));
      const auto one_step = ch::damp_diagonal(thermal, ch::ChannelSpec::from_kt(kt1 + kt2));
      for (int m = 0; m < cutoff.dim; ++m) {
        worst = std::max(worst, std::abs(two_step.prob(m) - one_step.prob(m)));
      }
    }
    rows.add("semigroup_composition", fmt("kt pairs, dim=%d", cutoff.dim), worst,
             g.at("tol"));
  }
  {
    const auto& g = grids.at("diag_matrix_consistency");
    const FockCutoff cutoff(g.at("dim"));
    const auto thermal = st::thermal_state(g.at("gamma"), cutoff);
    Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(cutoff.dim, cutoff.dim);
    const double retained = 1.0 - thermal.tail_mass();
    for (int m = 0; m < cutoff.dim; ++m) diag(m, m) = thermal.prob(m) / retained;
    const fockpart::fock::DensityMatrix rho{diag};
    double worst = 0.0;
    for (double kt : g.at("kts")) {
      const auto spec = ch::ChannelSpec::from_kt(kt);
      const auto full = ch::damp_matrix(rho, spec);
      const auto fast = ch::damp_diagonal(thermal, spec);
      for (int m = 0; m < cutoff.dim; ++m) {
        worst = std::max(worst, std::abs(full.entries()(m, m).real() -
                                         fast.prob(m) / retained));
      }
    }
    rows.add("diag_matrix_consistency", fmt("kt grid, dim=%d", cutoff.dim), worst,
             g.at("tol"));
  }
  {
    const auto& g = grids.at("vacuum_fixed_point");
    const FockCutoff cutoff(g.at("dim"));
    const auto vacuum = fockpart::fock::DensityMatrix::number_projector(0, cutoff);
    const auto out = ch::damp_matrix(vacuum, ch::ChannelSpec::from_kt(g.at("kt")));
    rows.add("vacuum_fixed_point", fmt("kt=%g", double(g.at("kt"))),
             (out.entries() - vacuum.entries()).cwiseAbs().maxCoeff(), g.at("tol"));
  }
  {
    const auto& g = grids.at("asymptotic_vacuum");
    const FockCutoff cutoff(g.at("dim"));
    const auto nbs = st::negbinomial_state(g.at("s"), g.at("gamma"), cutoff);
    const auto out = ch::damp_diagonal(nbs, ch::ChannelSpec::from_kt(g.at("kt")));
    double residual = std::abs(out.prob(0) + out.tail_mass() - 1.0);
    for (int m = 1; m < out.dim(); ++m) residual = std::max(residual, out.prob(m));
    rows.add("asymptotic_vacuum", fmt("kt=%g", double(g.at("kt"))), residual,
             g.at("tol"));
  }
  {
    // order-of-convergence check: reports 0 when the finite-difference defect
    // of the Lindblad generator halves with dt (and the vacuum stays fixed)
    const auto& g = grids.at("generator_first_order");
    const double dt = g.at("dt");
    const FockCutoff cutoff(g.at("dim"));
    const double r1 = ch::channel_fixed_point_check(ch::ChannelSpec::from_kt(dt), cutoff);
    const double r2 =
        ch::channel_fixed_point_check(ch::ChannelSpec::from_kt(0.5 * dt), cutoff);
    const double lo = g.at("ratio_band").at(0);
    const double hi = g.at("ratio_band").at(1);
    const double ratio = r2 / r1;
    const bool ok = ratio >= lo && ratio <= hi && r1 < 1.0;
    rows.add("generator_first_order", fmt("dt=%g, dim=%d, ratio=%.3f", dt, cutoff.dim, ratio),
             ok ? 0.0 : 1.0, g.at("tol"));
  }
}

}  // namespace

std::vector<CheckRow> run_suite(const std::string& suite, const json& grids,
                                const VerifyOptions& options) {
  RowBuilder rows(options);
  if (suite == "specfun" || suite == "all") specfun_suite(rows, grids.at("specfun"));
  if (suite == "ordering" || suite == "all") ordering_suite(rows, grids.at("ordering"));
  if (suite == "partition" || suite == "all") partition_suite(rows, grids.at("partition"));
  if (suite == "channel" || suite == "all") channel_suite(rows, grids.at("channel"));
  auto out = rows.take();
  if (out.empty()) {
    throw DomainError("unknown verify suite: " + suite +
                      " (expected all|specfun|ordering|partition|channel)");
  }
  return out;
}

bool print_rows(const std::vector<CheckRow>& rows) {
  std::printf("%-30s %-38s %12s %10s  %s\n", "identity", "parameters", "residual",
              "tol", "status");
  std::printf("%-30s %-38s %12s %10s  %s\n", "--------", "----------", "--------",
              "---", "------");
  bool all_pass = true;
  for (const auto& row : rows) {
    std::printf("%-30s %-38s %12.3e %10.1e  %s\n", row.identity.c_str(),
                row.params.c_str(), row.residual, row.tol,
                row.pass ? "PASS" : "FAIL");
    all_pass = all_pass && row.pass;
  }
  std::printf("%zu checks, %s\n", rows.size(), all_pass ? "all passed" : "FAILURES present");
  return all_pass;
}

}  // namespace fockpart::tools
