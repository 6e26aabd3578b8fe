#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nematoflow/diagnostics.hpp"

namespace nematoflow::cli {

enum ExitCode : int {
  kOk = 0,
  kValidationError = 1,
  kRuntimeAbort = 2,
  kCheckFailure = 3,
};

/// Entry point of the nematoflow executable.
int main_entry(int argc, char** argv);

int simulate(const std::string& config_path, const std::optional<std::string>& output_dir,
             std::ostream& out, std::ostream& err);
int check(const std::string& config_path, bool strict, const std::optional<std::string>& output_dir,
          std::ostream& out, std::ostream& err);
int analyze_symbol(const std::string& config_path, std::optional<std::size_t> samples,
                   std::optional<int> dim, const std::optional<std::string>& output_dir,
                   std::ostream& out, std::ostream& err);
int report(const std::string& run_dir, std::ostream& out, std::ostream& err);

/// Post-hoc audit computed from diagnostics records alone. simulate writes
/// it into summary.txt and report reproduces it from diagnostics.csv.
std::string audit_block(const std::vector<diagnostics::DiagnosticsRecord>& series);

/// Worker cap from NEMATOFLOW_THREADS (unset or invalid: hardware count).
unsigned worker_count();

}  // namespace nematoflow::cli
