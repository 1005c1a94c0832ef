#ifndef COMPSUMM_SYNTHETIC_HPP
#define COMPSUMM_SYNTHETIC_HPP

#include <cstdint>
#include <filesystem>
#include <vector>

#include "compsumm/corpus.hpp"
#include "compsumm/objectives.hpp"

namespace compsumm::synthetic {

/// Isotropic Gaussian points, `per_group` rows in each of `groups` groups,
/// group g shifted by `separation` along the first axis.
GroupedDataset gaussian_groups(std::size_t groups, std::size_t per_group, std::size_t dim, double separation,
                               std::uint64_t seed);

/// Two groups, each a mixture of Gaussian "topics". The first `shared`
/// topic centres are common to both groups; every group also has `own`
/// private centres. Points pick a topic of their group uniformly.
struct TopicMixture {
  std::size_t per_group = 150;
  std::size_t dim = 10;
  std::size_t shared = 1;
  std::size_t own = 2;
  double center_scale = 2.0;
  double noise = 1.0;
};
GroupedDataset topic_mixture(const TopicMixture& options, std::uint64_t seed);

/// Writes corpus.jsonl and vectors.txt for two groups ("pro", "con") of
/// documents built from a small shared and group-specific vocabulary.
struct ToyCorpusFiles {
  std::filesystem::path corpus;
  std::filesystem::path vectors;
};
ToyCorpusFiles write_toy_corpus(const std::filesystem::path& dir, std::size_t docs_per_group, std::uint64_t seed);

/// M meta points per group: random distinct members of the group moved by
/// Gaussian noise of standard deviation `jitter`.
MetaPrototypes random_meta(const GroupedDataset& data, std::size_t M, double jitter, std::uint64_t seed);

/// Digit-like rows in the USPS text layout: `digit v1 ... v256` with values
/// in [-1, 1], built from a random 16x16 template per digit plus noise.
void write_digits_like(const std::filesystem::path& path, const std::vector<int>& digits, std::size_t per_digit,
                       double noise, std::uint64_t seed);

}  // namespace compsumm::synthetic

#endif  // COMPSUMM_SYNTHETIC_HPP
