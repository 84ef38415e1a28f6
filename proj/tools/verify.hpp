#ifndef FOCKPART_TOOLS_VERIFY_HPP
#define FOCKPART_TOOLS_VERIFY_HPP

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace fockpart::tools {

struct CheckRow {
  std::string identity;
  std::string params;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct VerifyOptions {
  std::optional<double> tol_override;  // replaces every row tolerance
  std::string defect;                  // self-test hook, e.g. "nbs-exponent-sign"
};

/// Runs one suite over the grids config. Valid names: specfun, ordering,
/// partition, channel. Throws DomainError for an unknown suite.
std::vector<CheckRow> run_suite(const std::string& suite, const nlohmann::json& grids,
                                const VerifyOptions& options);

/// Prints the table and returns true iff every row passed.
bool print_rows(const std::vector<CheckRow>& rows);

}  // namespace fockpart::tools

#endif  // FOCKPART_TOOLS_VERIFY_HPP
