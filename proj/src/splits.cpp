#include <algorithm>
#include <cmath>

#include "compsumm/corpus.hpp"
#include "compsumm/rng.hpp"

namespace compsumm {

namespace {

std::size_t train_count(double fraction, std::size_t group_size) {
  // The epsilon keeps products such as 0.8 * 10 from rounding up to 9.
  auto count = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(group_size) - 1e-9));
  return std::clamp<std::size_t>(count, 1, group_size - 1);
}

SplitPair split_by_counts(const GroupedDataset& data, const std::vector<std::size_t>& train_counts,
                          std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> train_rows;
  std::vector<int> test_rows;
  for (std::size_t g = 0; g < data.num_groups(); ++g) {
    std::vector<int> members = data.members(g);
    rng.shuffle(std::span<int>(members));
    const auto cut = static_cast<std::ptrdiff_t>(train_counts[g]);
    train_rows.insert(train_rows.end(), members.begin(), members.begin() + cut);
    test_rows.insert(test_rows.end(), members.begin() + cut, members.end());
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  return {data.subset(train_rows), data.subset(test_rows), seed};
}

}  // namespace

std::vector<SplitPair> make_splits(const GroupedDataset& data, double train_fraction,
                                   std::size_t n_splits, std::uint64_t base_seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ValidationError("train fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> counts;
  for (std::size_t g = 0; g < data.num_groups(); ++g) {
    if (data.group_size(g) < 2) {
      throw ValidationError("group '" + data.group_names()[g] + "' has fewer than 2 points; cannot split");
    }
    counts.push_back(train_count(train_fraction, data.group_size(g)));
  }
  std::vector<SplitPair> splits;
  splits.reserve(n_splits);
  for (std::size_t s = 0; s < n_splits; ++s) splits.push_back(split_by_counts(data, counts, base_seed + s));
  return splits;
}

std::vector<SplitPair> make_fixed_splits(const GroupedDataset& train, const GroupedDataset& test,
                                         std::size_t n_splits, std::uint64_t base_seed) {
  if (n_splits == 0) return {};
  auto prefixed = [](const GroupedDataset& d, const std::string& prefix) {
    std::vector<std::string> ids;
    for (const auto& id : d.row_ids()) ids.push_back(prefix + id);
    return GroupedDataset(d.points(), d.group_labels(), d.group_names(), std::move(ids));
  };
  const GroupedDataset pooled = concatenate(prefixed(train, "train/"), prefixed(test, "test/"));

  std::vector<std::size_t> counts(pooled.num_groups(), 0);
  for (std::size_t i = 0; i < train.size(); ++i) ++counts[static_cast<std::size_t>(train.group_of(i))];
  for (std::size_t g = 0; g < pooled.num_groups(); ++g) {
    if (counts[g] == 0 || counts[g] == pooled.group_size(g)) {
      throw ValidationError("group '" + pooled.group_names()[g] + "' missing from the fixed train or test set");
    }
  }

  std::vector<int> train_rows(train.size());
  std::vector<int> test_rows(test.size());
  for (std::size_t i = 0; i < train.size(); ++i) train_rows[i] = static_cast<int>(i);
  for (std::size_t i = 0; i < test.size(); ++i) test_rows[i] = static_cast<int>(train.size() + i);

  std::vector<SplitPair> splits;
  splits.push_back({pooled.subset(train_rows), pooled.subset(test_rows), base_seed});
  for (std::size_t s = 1; s < n_splits; ++s) splits.push_back(split_by_counts(pooled, counts, base_seed + s));
  return splits;
}

GroupedDataset stratified_subsample(const GroupedDataset& data, std::size_t total, std::uint64_t seed,
                                    std::size_t min_per_group) {
  if (data.size() <= total) return data;
  Rng rng(seed);
  const double share = static_cast<double>(total) / static_cast<double>(data.size());
  std::vector<int> rows;
  for (std::size_t g = 0; g < data.num_groups(); ++g) {
    std::vector<int> members = data.members(g);
    rng.shuffle(std::span<int>(members));
    auto keep = static_cast<std::size_t>(std::llround(share * static_cast<double>(members.size())));
    keep = std::min(members.size(), std::max(keep, min_per_group));
    rows.insert(rows.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(keep));
  }
  std::sort(rows.begin(), rows.end());
  return data.subset(rows);
}

}  // namespace compsumm
