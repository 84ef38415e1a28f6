// fockpart: batch driver for the Fock-space partition-of-unity library.
// Subcommands: verify, partition, state, channel. Exit codes: 0 all checks
// pass, 1 residual/convergence failure, 2 usage or parameter error.

#include <cstdarg>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unistd.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "emit.hpp"
#include "fockpart/channels.hpp"
#include "fockpart/partition.hpp"
#include "fockpart/states.hpp"
#include "verify.hpp"

namespace {

using namespace fockpart;
namespace fs = std::filesystem;

fs::path executable_dir() {
  char buf[4096];
  const ssize_t n = ::readlink("/proc/self/exe", buf, sizeof(buf) - 1);
  if (n <= 0) return fs::current_path();
  buf[n] = '\0';
  return fs::path(buf).parent_path();
}

std::string locate_grids(const std::string& flag_value) {
  std::vector<fs::path> candidates;
  if (!flag_value.empty()) candidates.emplace_back(flag_value);
  if (const char* env = std::getenv("FOCKPART_GRIDS")) candidates.emplace_back(env);
  candidates.emplace_back("verify_grids.json");
  const fs::path exe_dir = executable_dir();
  candidates.emplace_back(exe_dir / "verify_grids.json");
  candidates.emplace_back(exe_dir / ".." / "share" / "fockpart" / "verify_grids.json");
  for (const auto& c : candidates) {
    std::error_code ec;
    if (fs::exists(c, ec)) return c.string();
  }
  throw DomainError("verify grids config not found; pass --grids PATH");
}

struct StateArgs {
  std::string label;
  int m = 0;
  int n = 0;
  int s = 0;
  double sigma = 0.5;
  double gamma = 0.5;
  int cutoff = 64;
};

void add_state_options(CLI::App* cmd, StateArgs& args, bool with_label_positional) {
  if (with_label_positional) {
    cmd->add_option("label", args.label, "state family: number|binomial|negbinomial|thermal")
        ->required();
  } else {
    cmd->add_option("--state", args.label, "input state family: number|binomial|negbinomial|thermal")
        ->required();
  }
  cmd->add_option("--m", args.m, "number-state level");
  cmd->add_option("--n", args.n, "binomial trial count");
  cmd->add_option("--s", args.s, "negative-binomial order");
  cmd->add_option("--sigma", args.sigma, "binomial parameter in (0,1)");
  cmd->add_option("--gamma", args.gamma, "thermal / negative-binomial parameter in (0,1)");
  cmd->add_option("--cutoff", args.cutoff, "Fock-space dimension")->default_val(64);
}

states::DiagonalState build_state(const StateArgs& args) {
  const fock::FockCutoff cutoff(args.cutoff);
  if (args.label == "number") return states::number_state(args.m, cutoff);
  if (args.label == "binomial") return states::binomial_state(args.n, args.sigma, cutoff);
  if (args.label == "negbinomial") return states::negbinomial_state(args.s, args.gamma, cutoff);
  if (args.label == "thermal") return states::thermal_state(args.gamma, cutoff);
  throw DomainError("unknown state label: " + args.label +
                    " (expected number|binomial|negbinomial|thermal)");
}

std::string state_params_json(const states::DiagonalState& state) {
  const auto& label = state.label();
  std::ostringstream out;
  switch (label.family) {
    case states::StateFamily::kNumber: out << "\"m\":" << label.m; break;
    case states::StateFamily::kBinomial:
      out << "\"n\":" << label.n << ",\"sigma\":" << tools::g17(label.sigma);
      break;
    case states::StateFamily::kNegBinomial:
      out << "\"s\":" << label.s << ",\"gamma\":" << tools::g17(label.gamma);
      break;
    case states::StateFamily::kThermal:
      out << "\"gamma\":" << tools::g17(label.gamma);
      break;
    case states::StateFamily::kCustom: break;
  }
  return out.str();
}

std::string state_report(const states::DiagonalState& state, const std::string& format,
                         const std::string& extra_json,
                         const std::vector<std::pair<std::string, double>>& extra_rows) {
  const auto mean = states::mean_photon(state);
  std::ostringstream out;
  if (format == "json") {
    out << "{\"label\":\"" << states::family_name(state.label().family) << "\""
        << ",\"params\":{" << state_params_json(state) << "}"
        << ",\"cutoff\":" << state.dim() << ",\"probs\":[";
    for (int m = 0; m < state.dim(); ++m) {
      if (m > 0) out << ",";
      out << tools::g17(state.prob(m));
    }
    out << "],\"tail_mass\":" << tools::g17(state.tail_mass())
        << ",\"mean_photon\":" << tools::g17(mean.value)
        << ",\"mean_photon_tail_correction\":" << tools::g17(mean.tail_correction);
    out << extra_json << "}\n";
  } else {
    out << "level,prob\n";
    for (int m = 0; m < state.dim(); ++m) {
      out << m << "," << tools::g17(state.prob(m)) << "\n";
    }
    out << "tail_mass," << tools::g17(state.tail_mass()) << "\n";
    out << "mean_photon," << tools::g17(mean.value) << "\n";
    out << "mean_photon_tail_correction," << tools::g17(mean.tail_correction) << "\n";
    for (const auto& [key, value] : extra_rows) {
      out << key << "," << tools::g17(value) << "\n";
    }
  }
  return out.str();
}

int cmd_verify(const std::string& suite, double tol, bool tol_given,
               const std::string& grids_flag, const std::string& defect) {
  const std::string grids_path = locate_grids(grids_flag);
  std::ifstream in(grids_path);
  if (!in) throw DomainError("cannot read grids config: " + grids_path);
  nlohmann::json grids;
  in >> grids;

  tools::VerifyOptions options;
  if (tol_given) options.tol_override = tol;
  options.defect = defect;
  const auto rows = tools::run_suite(suite, grids, options);
  return tools::print_rows(rows) ? 0 : 1;
}

int cmd_partition(const std::string& family, double sigma, double gamma, int terms,
                  int levels, double tol, const std::string& format,
                  const std::optional<std::string>& output) {
  const bool bs = family == "bs";
  if (!bs && family != "nbs") {
    throw DomainError("unknown partition family: " + family + " (expected bs|nbs)");
  }
  const double param = bs ? sigma : gamma;
  // sweep the truncation so the rows are convergence-plot ready
  std::ostringstream body;
  const int t_start = bs ? levels : 1;
  detail::require(terms >= t_start, "partition: terms too small for the sweep");
  if (format == "json") {
    body << "{\"family\":\"" << (bs ? "bs" : "nbs") << "\""
         << ",\"param\":" << tools::g17(param) << ",\"terms\":" << terms
         << ",\"levels\":" << levels << ",\"tol\":" << tools::g17(tol)
         << ",\"rows\":[";
  } else {
    body << "terms_used,level,partial_sum,residual\n";
  }
  bool first = true;
  partition::PartitionReport last;
  for (int t = t_start; t <= terms; ++t) {
    const auto report = bs ? partition::bs_partition(sigma, t, levels, tol)
                           : partition::nbs_partition(gamma, t, levels, tol);
    for (int l = 0; l < levels; ++l) {
      if (format == "json") {
        if (!first) body << ",";
        body << "{\"terms_used\":" << t << ",\"level\":" << l
             << ",\"partial_sum\":" << tools::g17(report.partial_sums[static_cast<std::size_t>(l)])
             << ",\"residual\":" << tools::g17(report.residuals[static_cast<std::size_t>(l)])
             << "}";
        first = false;
      } else {
        body << t << "," << l << ","
             << tools::g17(report.partial_sums[static_cast<std::size_t>(l)]) << ","
             << tools::g17(report.residuals[static_cast<std::size_t>(l)]) << "\n";
      }
    }
    last = report;
  }
  if (format == "json") {
    body << "],\"max_residual\":" << tools::g17(last.max_residual)
         << ",\"converged\":" << (last.converged ? "true" : "false") << "}\n";
  }
  return tools::write_output(output, body.str());
}

int cmd_state(const StateArgs& args, const std::string& format,
              const std::optional<std::string>& output) {
  const auto state = build_state(args);
  return tools::write_output(output, state_report(state, format, "", {}));
}

int cmd_channel(const StateArgs& args, double kt, const std::string& format,
                const std::optional<std::string>& output) {
  detail::require(kt >= 0.0, "channel: kt must be nonnegative");
  const auto input = build_state(args);
  const auto spec = channels::ChannelSpec::from_kt(kt);
  const auto damped = channels::damp_diagonal(input, spec);

  std::string extra_json;
  std::vector<std::pair<std::string, double>> extra_rows;
  extra_rows.emplace_back("kt", kt);
  extra_rows.emplace_back("survival", spec.survival);
  std::ostringstream json_extra;
  json_extra << ",\"kt\":" << tools::g17(kt)
             << ",\"survival\":" << tools::g17(spec.survival);
  if (input.label().family == states::StateFamily::kNumber) {
    // a damped number state is the binomial state with these parameters
    json_extra << ",\"matched_binomial\":{\"m\":" << input.label().m
               << ",\"survival\":" << tools::g17(spec.survival) << "}";
    extra_rows.emplace_back("matched_binomial_m", input.label().m);
    extra_rows.emplace_back("matched_binomial_survival", spec.survival);
  }
  extra_json = json_extra.str();
  return tools::write_output(output, state_report(damped, format, extra_json, extra_rows));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fockpart: mixed-state partitions of unity in a truncated Fock space"};
  app.require_subcommand(1);

  // verify
  auto* verify = app.add_subcommand("verify", "run identity suites against their grids");
  std::string suite = "all";
  double tol = 0.0;
  std::string grids_flag;
  std::string defect;
  verify->add_option("suite", suite, "all|specfun|ordering|partition|channel")
      ->default_val("all");
  auto* tol_opt = verify->add_option("--tol", tol, "override every row tolerance")
                      ->envname("FOCK_PARTITION_TOL");
  verify->add_option("--grids", grids_flag, "path to the verify grids config");
  verify->add_option("--defect", defect,
                     "self-test hook: inject a known defect (nbs-exponent-sign)")
      ->group("");

  // partition
  auto* part = app.add_subcommand("partition", "emit partition-of-unity convergence rows");
  std::string family;
  double sigma = 0.5, gamma = 0.5;
  int terms = 200, levels = 20;
  double part_tol = partition::kDefaultTol;
  std::string part_format = "csv";
  std::string part_output;
  part->add_option("family", family, "bs|nbs")->required();
  part->add_option("--sigma", sigma, "binomial parameter");
  part->add_option("--gamma", gamma, "negative-binomial parameter");
  part->add_option("--terms", terms, "truncation order of the state sum");
  part->add_option("--levels", levels, "Fock levels to report");
  part->add_option("--tol", part_tol, "convergence tolerance for the report");
  part->add_option("--format", part_format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  part->add_option("-o,--output", part_output, "write to file instead of stdout");

  // state
  auto* state_cmd = app.add_subcommand("state", "construct and dump a diagonal state");
  StateArgs state_args;
  std::string state_format = "json";
  std::string state_output;
  add_state_options(state_cmd, state_args, /*with_label_positional=*/true);
  state_cmd->add_option("--format", state_format, "json|csv")
      ->check(CLI::IsMember({"csv", "json"}));
  state_cmd->add_option("-o,--output", state_output, "write to file instead of stdout");

  // channel
  auto* chan = app.add_subcommand("channel", "evolve a state through amplitude dissipation");
  StateArgs chan_args;
  double kt = 0.0;
  std::string chan_format = "json";
  std::string chan_output;
  add_state_options(chan, chan_args, /*with_label_positional=*/false);
  chan->add_option("--kt", kt, "dimensionless exposure (kappa * t)")->required();
  chan->add_option("--format", chan_format, "json|csv")
      ->check(CLI::IsMember({"csv", "json"}));
  chan->add_option("-o,--output", chan_output, "write to file instead of stdout");

  try {
    app.parse(argc, argv);
    if (verify->parsed()) {
      return cmd_verify(suite, tol, !tol_opt->empty(), grids_flag, defect);
    }
    if (part->parsed()) {
      return cmd_partition(family, sigma, gamma, terms, levels, part_tol, part_format,
                           part_output.empty() ? std::nullopt
                                               : std::optional<std::string>(part_output));
    }
    if (state_cmd->parsed()) {
      return cmd_state(state_args, state_format,
                       state_output.empty() ? std::nullopt
                                            : std::optional<std::string>(state_output));
    }
    if (chan->parsed()) {
      return cmd_channel(chan_args, kt, chan_format,
                         chan_output.empty() ? std::nullopt
                                             : std::optional<std::string>(chan_output));
    }
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const DomainError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 2;
  } catch (const CutoffError& e) {
    std::cerr << "parameter error: " << e.what()
              << " (suggested cutoff: " << e.suggested_dim << ")\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
