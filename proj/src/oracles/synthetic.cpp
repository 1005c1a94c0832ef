#include "synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <cstdio>
#include <fstream>

#include "compsumm/rng.hpp"
#include "json.hpp"

namespace compsumm::synthetic {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

}  // namespace

GroupedDataset gaussian_groups(std::size_t groups, std::size_t per_group, std::size_t dim, double separation,
                               std::uint64_t seed) {
  Rng rng(seed);
  Matrix X(static_cast<Eigen::Index>(groups * per_group), static_cast<Eigen::Index>(dim));
  std::vector<int> labels;
  std::vector<std::string> names;
  for (std::size_t g = 0; g < groups; ++g) {
    names.push_back("g" + std::to_string(g));
    for (std::size_t i = 0; i < per_group; ++i) {
      const auto r = static_cast<Eigen::Index>(labels.size());
      for (std::size_t c = 0; c < dim; ++c) X(r, static_cast<Eigen::Index>(c)) = rng.normal();
      X(r, 0) += separation * static_cast<double>(g);
      labels.push_back(static_cast<int>(g));
    }
  }
  return {std::move(X), std::move(labels), std::move(names)};
}

GroupedDataset topic_mixture(const TopicMixture& o, std::uint64_t seed) {
  Rng rng(seed);
  auto centre = [&]() {
    Vector c(static_cast<Eigen::Index>(o.dim));
    for (Eigen::Index k = 0; k < c.size(); ++k) c[k] = o.center_scale * rng.normal();
    return c;
  };
  std::vector<Vector> shared;
  for (std::size_t t = 0; t < o.shared; ++t) shared.push_back(centre());
  std::vector<std::vector<Vector>> topics(2, shared);
  for (auto& list : topics) {
    for (std::size_t t = 0; t < o.own; ++t) list.push_back(centre());
  }

  Matrix X(static_cast<Eigen::Index>(2 * o.per_group), static_cast<Eigen::Index>(o.dim));
  std::vector<int> labels;
  for (int g = 0; g < 2; ++g) {
    const auto& list = topics[static_cast<std::size_t>(g)];
    for (std::size_t i = 0; i < o.per_group; ++i) {
      const auto r = static_cast<Eigen::Index>(labels.size());
      const Vector& c = list[static_cast<std::size_t>(rng.uniform_below(list.size()))];
      for (Eigen::Index k = 0; k < c.size(); ++k) X(r, k) = c[k] + o.noise * rng.normal();
      labels.push_back(g);
    }
  }
  return {std::move(X), std::move(labels), {"a", "b"}};
}

MetaPrototypes random_meta(const GroupedDataset& data, std::size_t M, double jitter, std::uint64_t seed) {
  Rng rng(seed);
  MetaPrototypes meta;
  for (std::size_t g = 0; g < data.num_groups(); ++g) {
    std::vector<int> members = data.members(g);
    if (M > members.size()) throw ValidationError("random_meta: M exceeds a group size");
    rng.shuffle(std::span<int>(members));
    members.resize(M);
    Matrix points = data.gather(members);
    for (Eigen::Index i = 0; i < points.size(); ++i) points.data()[i] += jitter * rng.normal();
    meta.points.push_back(std::move(points));
  }
  return meta;
}

ToyCorpusFiles write_toy_corpus(const std::filesystem::path& dir, std::size_t docs_per_group, std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  Rng rng(seed);
  const std::vector<std::string> shared{"the", "law", "state", "court", "people", "year", "report", "public"};
  const std::vector<std::vector<std::string>> own{
      {"deterrent", "justice", "victims", "punish", "crime", "penalty", "safety", "order"},
      {"innocent", "appeal", "mercy", "abolish", "rights", "error", "reform", "humane"}};
  const std::vector<std::string> groups{"pro", "con"};
  constexpr std::size_t dim = 8;

  ToyCorpusFiles files{dir / "corpus.jsonl", dir / "vectors.txt"};
  {
    std::ofstream out = open_out(files.vectors);
    auto emit = [&](const std::string& word, double bias) {
      out << word;
      for (std::size_t k = 0; k < dim; ++k) {
        char buf[32];
        std::snprintf(buf, sizeof buf, " %.6f", rng.normal() * 0.5 + (k == 0 ? bias : 0.0));
        out << buf;
      }
      out << "\n";
    };
    for (const auto& w : shared) emit(w, 0.0);
    for (const auto& w : own[0]) emit(w, 1.0);
    for (const auto& w : own[1]) emit(w, -1.0);
  }

  auto sentence = [&](std::size_t g, std::size_t words) {
    std::string s;
    for (std::size_t k = 0; k < words; ++k) {
      const bool use_own = rng.uniform01() < 0.6;
      const auto& pool = use_own ? own[g] : shared;
      if (!s.empty()) s += ' ';
      s += pool[static_cast<std::size_t>(rng.uniform_below(pool.size()))];
    }
    s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s + ".";
  };

  std::ofstream out = open_out(files.corpus);
  for (std::size_t i = 0; i < docs_per_group; ++i) {
    for (std::size_t g = 0; g < groups.size(); ++g) {
      nlohmann::json doc;
      doc["id"] = groups[g] + "-" + std::to_string(i);
      doc["group"] = groups[g];
      doc["title"] = sentence(g, 4);
      std::vector<std::string> sentences;
      for (int k = 0; k < 4; ++k) sentences.push_back(sentence(g, 6));
      doc["sentences"] = sentences;
      out << doc.dump() << "\n";
    }
  }
  return files;
}

void write_digits_like(const std::filesystem::path& path, const std::vector<int>& digits, std::size_t per_digit,
                       double noise, std::uint64_t seed) {
  Rng rng(seed);
  constexpr int side = 16;
  constexpr int styles = 3;
  // Each digit has a few writing styles; a style is a sum of Gaussian blobs.
  std::vector<std::vector<std::vector<double>>> templates;
  for (std::size_t d = 0; d < digits.size(); ++d) {
    std::vector<std::vector<double>> per_style;
    double cx[4], cy[4];
    for (int b = 0; b < 4; ++b) {
      cx[b] = 3.0 + 10.0 * rng.uniform01();
      cy[b] = 3.0 + 10.0 * rng.uniform01();
    }
    for (int s = 0; s < styles; ++s) {
      std::vector<double> img(side * side, 0.0);
      for (int b = 0; b < 4; ++b) {
        const double bx = cx[b] + 1.5 * rng.normal();
        const double by = cy[b] + 1.5 * rng.normal();
        for (int y = 0; y < side; ++y) {
          for (int x = 0; x < side; ++x) {
            const double r2 = (x - bx) * (x - bx) + (y - by) * (y - by);
            img[static_cast<std::size_t>(y * side + x)] += std::exp(-r2 / 6.0);
          }
        }
      }
      for (double& v : img) v = std::tanh(2.0 * v) * 2.0 - 1.0;
      per_style.push_back(std::move(img));
    }
    templates.push_back(std::move(per_style));
  }

  std::ofstream out = open_out(path);
  for (std::size_t i = 0; i < per_digit; ++i) {
    for (std::size_t d = 0; d < digits.size(); ++d) {
      const auto& img = templates[d][static_cast<std::size_t>(rng.uniform_below(styles))];
      char buf[32];
      std::snprintf(buf, sizeof buf, "%d", digits[d]);
      out << buf;
      for (const double v : img) {
        std::snprintf(buf, sizeof buf, " %.4f", std::clamp(v + noise * rng.normal(), -1.0, 1.0));
        out << buf;
      }
      out << "\n";
    }
  }
}

}  // namespace compsumm::synthetic
