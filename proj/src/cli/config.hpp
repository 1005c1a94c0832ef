#ifndef COMPSUMM_CLI_CONFIG_HPP
#define COMPSUMM_CLI_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace compsumm::cli {

/// Everything a CLI run needs. Read from an INI file with sections [data],
/// [run], [grad], [grid] and [summarize]; command-line flags override it.
struct RunConfig {
  // [data]
  std::string corpus;
  std::string vectors;
  std::string usps;        ///< single file, split randomly
  std::string usps_train;  ///< with usps_test: the canonical partition
  std::string usps_test;
  int first_sentences = 3;
  double pca_variance = 0.0;  ///< 0 disables PCA
  double train_fraction = 0.8;

  // [run]
  std::vector<std::string> methods{"mmd-diff-grad"};
  std::vector<std::size_t> m{2};
  std::vector<std::string> classifiers{"1nn"};
  std::size_t splits = 10;
  std::uint64_t seed = 0;
  int workers = 1;
  std::size_t folds = 3;
  std::string out = "out";
  bool fast = false;
  std::size_t fast_points = 2000;

  // [grad]
  int max_iterations = 500;
  double tolerance = 1e-6;
  int history = 10;
  std::string init = "auto";  ///< auto: kmeans for digits, greedy for text

  // [grid] (empty: defaults from the median heuristic)
  std::vector<double> grid_gamma;
  std::vector<double> grid_lambda;
  std::vector<double> grid_c;

  // [summarize]
  std::optional<double> gamma;  ///< default: median heuristic
  double lambda = 1.0;

  bool has_corpus() const { return !corpus.empty(); }
  bool has_usps() const { return !usps.empty() || !usps_train.empty(); }

  /// Throws ValidationError on unknown names, bad ranges or an ambiguous
  /// dataset choice.
  void validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);
/// Canonical INI text; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

std::vector<std::string> split_list(const std::string& text);

}  // namespace compsumm::cli

#endif  // COMPSUMM_CLI_CONFIG_HPP
