#ifndef COMPSUMM_CORPUS_HPP
#define COMPSUMM_CORPUS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "compsumm/common.hpp"

namespace compsumm {

/// A raw news article before embedding.
struct Document {
  std::string id;
  std::string group;
  std::string title;
  std::vector<std::string> sentences;
};

/// Token -> embedding lookup with a fixed dimension.
class WordVectorTable {
 public:
  explicit WordVectorTable(std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }

  /// Inserts or overwrites. Throws ValidationError on a length mismatch.
  void insert(std::string token, std::vector<double> values);

  /// nullptr when the token is out of vocabulary.
  const std::vector<double>* find(std::string_view token) const;

 private:
  std::size_t dim_;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

/// Embedded points partitioned into labelled groups.
///
/// Rows are stored in one N x d matrix. Every row belongs to exactly one
/// group and every group has at least one row. `row_ids` carry a stable
/// identifier for each row (document id, or the row number in the source
/// file) through subsetting, so summaries can be mapped back to inputs.
class GroupedDataset {
 public:
  GroupedDataset(Matrix points, std::vector<int> group_of, std::vector<std::string> group_names,
                 std::vector<std::string> row_ids = {});

  std::size_t size() const { return static_cast<std::size_t>(points_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(points_.cols()); }
  std::size_t num_groups() const { return group_names_.size(); }

  const Matrix& points() const { return points_; }
  std::span<const double> row(std::size_t i) const { return row_span(points_, static_cast<Eigen::Index>(i)); }

  int group_of(std::size_t i) const { return group_of_[i]; }
  const std::vector<int>& group_labels() const { return group_of_; }
  const std::vector<std::string>& group_names() const { return group_names_; }
  /// Row indices of group g in ascending order.
  const std::vector<int>& members(std::size_t g) const { return group_index_[g]; }
  std::size_t group_size(std::size_t g) const { return group_index_[g].size(); }
  std::size_t min_group_size() const;
  const std::vector<std::string>& row_ids() const { return row_ids_; }

  /// Rows in the given order; every group must remain nonempty.
  GroupedDataset subset(std::span<const int> rows) const;
  /// Same rows and groups, new coordinates.
  GroupedDataset with_points(Matrix points) const;
  /// All rows relabelled into one group named `name`.
  GroupedDataset merged(std::string name = "all") const;
  Matrix gather(std::span<const int> rows) const;

 private:
  Matrix points_;
  std::vector<int> group_of_;
  std::vector<std::string> group_names_;
  std::vector<std::vector<int>> group_index_;
  std::vector<std::string> row_ids_;
};

// ---------------------------------------------------------------------------
// Loading and embedding

/// One JSON object per line with keys id, group, title, sentences. Blank
/// lines are skipped. Throws DataError naming the line on malformed input
/// and the id on duplicates.
std::vector<Document> load_corpus(const std::filesystem::path& path);
std::vector<Document> parse_corpus(std::istream& in);

/// GloVe text format: `token v1 ... vd`. The dimension is taken from the
/// first line; later duplicates overwrite earlier entries.
WordVectorTable load_word_vectors(const std::filesystem::path& path);
WordVectorTable parse_word_vectors(std::istream& in);

/// Lowercases ASCII letters and splits on runs of characters that are not
/// ASCII alphanumerics. Bytes >= 0x80 are kept inside tokens so UTF-8 words
/// stay whole.
std::vector<std::string> tokenize(std::string_view text);

struct EmbeddingResult {
  GroupedDataset dataset;
  std::size_t dropped = 0;  ///< documents with no in-vocabulary token
};

/// Mean word vector over the title and the first `first_k_sentences`
/// sentences of each document. Groups are ordered by first appearance.
EmbeddingResult embed_documents(std::span<const Document> docs, const WordVectorTable& vecs,
                                int first_k_sentences = 3);

/// `label v1 ... v256` per line, label an integer in 0..9 (written either as
/// `3` or `3.0000`). Groups are the labels present, in numeric order.
GroupedDataset load_usps(const std::filesystem::path& path);
GroupedDataset parse_usps(std::istream& in);

// ---------------------------------------------------------------------------
// PCA

struct PcaModel {
  Vector mean;
  Matrix components;  ///< k x d, orthonormal rows
  std::vector<double> explained_variance_ratio;
  /// False when the data rank was too low to reach the requested variance;
  /// the model then holds every nonzero component.
  bool target_reached = true;

  std::size_t num_components() const { return static_cast<std::size_t>(components.rows()); }
};

PcaModel fit_pca(const GroupedDataset& data, double target_variance);
GroupedDataset apply_pca(const PcaModel& model, const GroupedDataset& data);

// ---------------------------------------------------------------------------
// Splits

struct SplitPair {
  GroupedDataset train;
  GroupedDataset test;
  std::uint64_t seed = 0;
};

/// Stratified random splits. Split s uses seed base_seed + s; within each
/// group (in group order) the member indices are shuffled and the first
/// ceil(train_fraction * N_g) go to train, capped at N_g - 1 so that every
/// group also appears in test.
std::vector<SplitPair> make_splits(const GroupedDataset& data, double train_fraction,
                                   std::size_t n_splits, std::uint64_t base_seed);

/// Split 0 is the given train/test partition; the remaining splits re-draw
/// the pooled rows keeping every group's train and test counts of the fixed
/// partition, so all splits have identical sizes.
std::vector<SplitPair> make_fixed_splits(const GroupedDataset& train, const GroupedDataset& test,
                                         std::size_t n_splits, std::uint64_t base_seed);

/// Stratified subsample of about `total` rows (per-group share rounded,
/// at least `min_per_group` rows per group). Returns `data` unchanged when
/// it already has at most `total` rows.
GroupedDataset stratified_subsample(const GroupedDataset& data, std::size_t total,
                                    std::uint64_t seed, std::size_t min_per_group = 2);

/// Concatenates datasets with identical dimension; groups are matched by name
/// in order of first appearance.
GroupedDataset concatenate(const GroupedDataset& a, const GroupedDataset& b);

}  // namespace compsumm

#endif  // COMPSUMM_CORPUS_HPP
