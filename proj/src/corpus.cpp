#include "compsumm/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <unordered_set>

#include "json.hpp"

namespace compsumm {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; });
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

bool parse_double(std::string_view text, double& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::string line_prefix(std::size_t line_no) { return "line " + std::to_string(line_no) + ": "; }

}  // namespace

// ---------------------------------------------------------------------------

WordVectorTable::WordVectorTable(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw ValidationError("word vector dimension must be positive");
}

void WordVectorTable::insert(std::string token, std::vector<double> values) {
  if (values.size() != dim_) {
    throw ValidationError("vector for '" + token + "' has length " + std::to_string(values.size()) +
                          ", expected " + std::to_string(dim_));
  }
  vectors_.insert_or_assign(std::move(token), std::move(values));
}

const std::vector<double>* WordVectorTable::find(std::string_view token) const {
  const auto it = vectors_.find(std::string(token));
  return it == vectors_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------

GroupedDataset::GroupedDataset(Matrix points, std::vector<int> group_of,
                               std::vector<std::string> group_names, std::vector<std::string> row_ids)
    : points_(std::move(points)),
      group_of_(std::move(group_of)),
      group_names_(std::move(group_names)),
      row_ids_(std::move(row_ids)) {
  const auto n = static_cast<std::size_t>(points_.rows());
  if (n == 0) throw DataError("dataset is empty");
  if (points_.cols() == 0) throw DataError("dataset has zero dimensions");
  if (group_of_.size() != n) throw ValidationError("group label count does not match row count");
  if (group_names_.empty()) throw ValidationError("dataset needs at least one group");
  if (!points_.allFinite()) throw DataError("dataset contains non-finite values");
  if (row_ids_.empty()) {
    row_ids_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) row_ids_.push_back(std::to_string(i));
  } else if (row_ids_.size() != n) {
    throw ValidationError("row id count does not match row count");
  }

  group_index_.assign(group_names_.size(), {});
  for (std::size_t i = 0; i < n; ++i) {
    const int g = group_of_[i];
    if (g < 0 || static_cast<std::size_t>(g) >= group_names_.size()) {
      throw ValidationError("row " + std::to_string(i) + " has group index out of range");
    }
    group_index_[static_cast<std::size_t>(g)].push_back(static_cast<int>(i));
  }
  for (std::size_t g = 0; g < group_index_.size(); ++g) {
    if (group_index_[g].empty()) throw DataError("group '" + group_names_[g] + "' has no rows");
  }
}

std::size_t GroupedDataset::min_group_size() const {
  std::size_t m = group_index_.front().size();
  for (const auto& members : group_index_) m = std::min(m, members.size());
  return m;
}

Matrix GroupedDataset::gather(std::span<const int> rows) const {
  Matrix out(static_cast<Eigen::Index>(rows.size()), points_.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = points_.row(rows[i]);
  return out;
}

GroupedDataset GroupedDataset::subset(std::span<const int> rows) const {
  std::vector<int> labels;
  std::vector<std::string> ids;
  labels.reserve(rows.size());
  ids.reserve(rows.size());
  for (const int r : rows) {
    if (r < 0 || static_cast<std::size_t>(r) >= size()) throw ValidationError("subset row out of range");
    labels.push_back(group_of_[static_cast<std::size_t>(r)]);
    ids.push_back(row_ids_[static_cast<std::size_t>(r)]);
  }
  return GroupedDataset(gather(rows), std::move(labels), group_names_, std::move(ids));
}

GroupedDataset GroupedDataset::with_points(Matrix points) const {
  if (static_cast<std::size_t>(points.rows()) != size()) {
    throw ValidationError("replacement points have a different row count");
  }
  return GroupedDataset(std::move(points), group_of_, group_names_, row_ids_);
}

GroupedDataset GroupedDataset::merged(std::string name) const {
  return GroupedDataset(points_, std::vector<int>(size(), 0), {std::move(name)}, row_ids_);
}

// ---------------------------------------------------------------------------

std::vector<Document> parse_corpus(std::istream& in) {
  std::vector<Document> docs;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    Document doc;
    try {
      const auto j = nlohmann::json::parse(line);
      doc.id = j.at("id").get<std::string>();
      doc.group = j.at("group").get<std::string>();
      doc.title = j.at("title").get<std::string>();
      doc.sentences = j.at("sentences").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
      throw DataError(line_prefix(line_no) + "malformed corpus record: " + e.what());
    }
    if (doc.group.empty()) throw DataError(line_prefix(line_no) + "empty group label");
    if (!seen.insert(doc.id).second) throw DataError(line_prefix(line_no) + "duplicate document id '" + doc.id + "'");
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<Document> load_corpus(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_corpus(in);
}

WordVectorTable parse_word_vectors(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const auto fields = split_whitespace(line);
    if (dim == 0) {
      if (fields.size() < 2) throw DataError(line_prefix(line_no) + "word vector line has no values");
      dim = fields.size() - 1;
    }
    if (fields.size() - 1 != dim) {
      throw DataError(line_prefix(line_no) + "expected " + std::to_string(dim) + " values, got " +
                      std::to_string(fields.size() - 1));
    }
    std::vector<double> values(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      if (!parse_double(fields[k + 1], values[k])) {
        throw DataError(line_prefix(line_no) + "invalid number '" + std::string(fields[k + 1]) + "'");
      }
    }
    rows.emplace_back(std::string(fields[0]), std::move(values));
  }
  if (dim == 0) throw DataError("word vector file is empty");
  WordVectorTable table(dim);
  for (auto& [token, values] : rows) table.insert(std::move(token), std::move(values));
  return table;
}

WordVectorTable load_word_vectors(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_word_vectors(in);
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (const char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c >= 0x80 || std::isalnum(c)) {
      current.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

EmbeddingResult embed_documents(std::span<const Document> docs, const WordVectorTable& vecs,
                                int first_k_sentences) {
  if (first_k_sentences < 0) throw ValidationError("first_k_sentences must be nonnegative");
  const auto d = static_cast<Eigen::Index>(vecs.dim());

  std::vector<Vector> rows;
  std::vector<int> labels;
  std::vector<std::string> ids;
  std::vector<std::string> group_names;
  std::map<std::string, int> group_ids;
  std::size_t dropped = 0;

  for (const auto& doc : docs) {
    Vector sum = Vector::Zero(d);
    std::size_t count = 0;
    auto accumulate = [&](std::string_view text) {
      for (const auto& token : tokenize(text)) {
        if (const auto* v = vecs.find(token)) {
          sum += Eigen::Map<const Vector>(v->data(), d);
          ++count;
        }
      }
    };
    accumulate(doc.title);
    const auto n_sent = std::min(doc.sentences.size(), static_cast<std::size_t>(first_k_sentences));
    for (std::size_t s = 0; s < n_sent; ++s) accumulate(doc.sentences[s]);
    if (count == 0) {
      ++dropped;
      continue;
    }
    auto [it, inserted] = group_ids.try_emplace(doc.group, static_cast<int>(group_names.size()));
    if (inserted) group_names.push_back(doc.group);
    rows.push_back(sum / static_cast<double>(count));
    labels.push_back(it->second);
    ids.push_back(doc.id);
  }
  if (rows.empty()) throw DataError("no document has an in-vocabulary token");

  Matrix points(static_cast<Eigen::Index>(rows.size()), d);
  for (std::size_t i = 0; i < rows.size(); ++i) points.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  return {GroupedDataset(std::move(points), std::move(labels), std::move(group_names), std::move(ids)), dropped};
}

GroupedDataset parse_usps(std::istream& in) {
  constexpr std::size_t kPixels = 256;
  std::vector<double> values;
  std::vector<int> digits;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const auto fields = split_whitespace(line);
    if (fields.size() != kPixels + 1) {
      throw DataError(line_prefix(line_no) + "expected label and 256 values, got " +
                      std::to_string(fields.size()) + " fields");
    }
    double label = 0.0;
    if (!parse_double(fields[0], label)) throw DataError(line_prefix(line_no) + "invalid label");
    if (label != std::floor(label) || label < 0.0 || label > 9.0) {
      throw DataError(line_prefix(line_no) + "label " + std::string(fields[0]) + " outside 0..9");
    }
    digits.push_back(static_cast<int>(label));
    for (std::size_t k = 1; k <= kPixels; ++k) {
      double v = 0.0;
      if (!parse_double(fields[k], v)) throw DataError(line_prefix(line_no) + "invalid pixel value");
      values.push_back(v);
    }
  }
  if (digits.empty()) throw DataError("USPS file contains no rows");

  std::vector<int> present(10, -1);
  for (const int digit : digits) present[static_cast<std::size_t>(digit)] = 0;
  std::vector<std::string> names;
  for (int digit = 0; digit < 10; ++digit) {
    if (present[static_cast<std::size_t>(digit)] == 0) {
      present[static_cast<std::size_t>(digit)] = static_cast<int>(names.size());
      names.push_back(std::to_string(digit));
    }
  }
  std::vector<int> labels;
  labels.reserve(digits.size());
  for (const int digit : digits) labels.push_back(present[static_cast<std::size_t>(digit)]);

  Matrix points = Eigen::Map<const Matrix>(values.data(), static_cast<Eigen::Index>(digits.size()),
                                           static_cast<Eigen::Index>(kPixels));
  return GroupedDataset(std::move(points), std::move(labels), std::move(names));
}

GroupedDataset load_usps(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_usps(in);
}

GroupedDataset concatenate(const GroupedDataset& a, const GroupedDataset& b) {
  if (a.dim() != b.dim()) throw ValidationError("cannot concatenate datasets of different dimension");
  std::vector<std::string> names = a.group_names();
  std::map<std::string, int> index;
  for (std::size_t g = 0; g < names.size(); ++g) index.emplace(names[g], static_cast<int>(g));
  std::vector<int> remap(b.num_groups());
  for (std::size_t g = 0; g < b.num_groups(); ++g) {
    auto [it, inserted] = index.try_emplace(b.group_names()[g], static_cast<int>(names.size()));
    if (inserted) names.push_back(b.group_names()[g]);
    remap[g] = it->second;
  }
  Matrix points(static_cast<Eigen::Index>(a.size() + b.size()), static_cast<Eigen::Index>(a.dim()));
  points << a.points(), b.points();
  std::vector<int> labels = a.group_labels();
  for (const int g : b.group_labels()) labels.push_back(remap[static_cast<std::size_t>(g)]);
  std::vector<std::string> ids = a.row_ids();
  ids.insert(ids.end(), b.row_ids().begin(), b.row_ids().end());
  return GroupedDataset(std::move(points), std::move(labels), std::move(names), std::move(ids));
}

}  // namespace compsumm
