#ifndef COMPSUMM_CLI_COMMANDS_HPP
#define COMPSUMM_CLI_COMMANDS_HPP

#include <exception>
#include <iosfwd>
#include <optional>
#include <vector>

#include "compsumm/corpus.hpp"
#include "config.hpp"

namespace compsumm::cli {

enum ExitCode { kOk = 0, kConfigError = 2, kDataError = 3, kInternalError = 4 };

/// 2 for ValidationError, 3 for DataError, 4 for anything else.
int exit_code_for(const std::exception& e);

/// The configured dataset after embedding / loading and optional PCA.
struct LoadedData {
  std::optional<GroupedDataset> pooled;  ///< corpus or single digits file
  std::optional<GroupedDataset> train;   ///< canonical train part
  std::optional<GroupedDataset> test;
  std::vector<Document> documents;       ///< corpus only, by document id order of rows
  std::size_t dropped = 0;
  bool digits = false;

  /// The data a summary is drawn from: the pooled set or the train part.
  const GroupedDataset& summary_source() const { return pooled ? *pooled : *train; }
};
LoadedData load_data(const RunConfig& config);

/// Per-group summary files under config.out.
void run_summarize(const RunConfig& config, std::ostream& log);
/// results.csv, report.txt and table.txt under config.out.
void run_evaluate(const RunConfig& config, std::ostream& log);
/// pca_model.txt, data.csv and splits/split_<s>.txt under config.out.
void run_prepare(const RunConfig& config, std::ostream& log);

struct SelftestOptions {
  bool inject_gradient_fault = false;
};
/// Prints one PASS/FAIL line per suite; returns true when all pass.
bool run_selftest(std::ostream& out, const SelftestOptions& options);

/// Full command-line entry point: parses arguments, runs the subcommand and
/// maps errors to exit codes.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace compsumm::cli

#endif  // COMPSUMM_CLI_COMMANDS_HPP
