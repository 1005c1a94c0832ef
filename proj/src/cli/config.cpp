#include "config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "compsumm/common.hpp"
#include "compsumm/experiment.hpp"
#include "compsumm/gradopt.hpp"
#include "compsumm/methods.hpp"

namespace compsumm::cli {

namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  const std::string t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ValidationError("config: " + key + " = '" + text + "' is not a valid number");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ValidationError("config: " + key + " = '" + text + "' is not a boolean");
}

std::string num(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    if constexpr (std::is_same_v<T, std::string>) out += values[i];
    else if constexpr (std::is_same_v<T, double>) out += num(values[i]);
    else out += std::to_string(values[i]);
  }
  return out;
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  for (const auto& item : split_list(text)) {
    if constexpr (std::is_same_v<T, std::string>) out.push_back(item);
    else out.push_back(parse_number<T>(key, item));
  }
  return out;
}

}  // namespace

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void RunConfig::validate() const {
  if (methods.empty()) throw ValidationError("config: no method given");
  for (const auto& m : methods) parse_method(m);
  for (const auto& c : classifiers) parse_classifier(c);
  if (classifiers.empty()) throw ValidationError("config: no classifier given");
  if (m.empty()) throw ValidationError("config: no M given");
  for (const auto v : m) {
    if (v == 0) throw ValidationError("config: M must be positive");
  }
  if (splits == 0) throw ValidationError("config: splits must be positive");
  if (workers < 1) throw ValidationError("config: workers must be at least 1");
  if (folds < 2) throw ValidationError("config: folds must be at least 2");
  if (first_sentences < 0) throw ValidationError("config: first_sentences must be nonnegative");
  if (!(pca_variance >= 0.0 && pca_variance <= 1.0)) throw ValidationError("config: pca_variance must lie in [0, 1]");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ValidationError("config: train_fraction must lie in (0, 1)");
  if (fast_points < 2) throw ValidationError("config: fast_points must be at least 2");
  if (init != "auto") parse_meta_init(init);
  if (max_iterations < 1 || history < 1 || !(tolerance > 0.0)) throw ValidationError("config: invalid [grad] settings");
  if (gamma && !(*gamma > 0.0)) throw ValidationError("config: gamma must be positive");
  if (!(lambda >= 0.0)) throw ValidationError("config: lambda must be nonnegative");
  for (const double g : grid_gamma) {
    if (!(g > 0.0)) throw ValidationError("config: grid gamma values must be positive");
  }
  for (const double c : grid_c) {
    if (!(c > 0.0)) throw ValidationError("config: grid C values must be positive");
  }

  const int sources = (has_corpus() ? 1 : 0) + (!usps.empty() ? 1 : 0) + (!usps_train.empty() ? 1 : 0);
  if (sources > 1) throw ValidationError("config: give exactly one of corpus, usps, usps_train");
  if (has_corpus() && vectors.empty()) throw ValidationError("config: corpus needs a vectors file");
  if (usps_train.empty() != usps_test.empty()) throw ValidationError("config: usps_train and usps_test go together");
}

RunConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }

  RunConfig c;
  const std::map<std::string, std::set<std::string>> known{
      {"data", {"corpus", "vectors", "usps", "usps_train", "usps_test", "first_sentences", "pca_variance", "train_fraction"}},
      {"run", {"methods", "m", "classifiers", "splits", "seed", "workers", "folds", "out", "fast", "fast_points"}},
      {"grad", {"max_iterations", "tolerance", "history", "init"}},
      {"grid", {"gamma", "lambda", "c"}},
      {"summarize", {"gamma", "lambda"}}};

  for (const auto& [section, body] : tree) {
    const auto it = known.find(section);
    if (it == known.end()) throw ValidationError("config: unknown section [" + section + "]");
    for (const auto& [key, node] : body) {
      if (!it->second.count(key)) throw ValidationError("config: unknown key '" + key + "' in [" + section + "]");
      const std::string v = trim(node.data());
      const std::string name = section + "." + key;
      if (section == "data") {
        if (key == "corpus") c.corpus = v;
        else if (key == "vectors") c.vectors = v;
        else if (key == "usps") c.usps = v;
        else if (key == "usps_train") c.usps_train = v;
        else if (key == "usps_test") c.usps_test = v;
        else if (key == "first_sentences") c.first_sentences = parse_number<int>(name, v);
        else if (key == "pca_variance") c.pca_variance = parse_number<double>(name, v);
        else if (key == "train_fraction") c.train_fraction = parse_number<double>(name, v);
      } else if (section == "run") {
        if (key == "methods") c.methods = parse_list<std::string>(name, v);
        else if (key == "m") c.m = parse_list<std::size_t>(name, v);
        else if (key == "classifiers") c.classifiers = parse_list<std::string>(name, v);
        else if (key == "splits") c.splits = parse_number<std::size_t>(name, v);
        else if (key == "seed") c.seed = parse_number<std::uint64_t>(name, v);
        else if (key == "workers") c.workers = parse_number<int>(name, v);
        else if (key == "folds") c.folds = parse_number<std::size_t>(name, v);
        else if (key == "out") c.out = v;
        else if (key == "fast") c.fast = parse_bool(name, v);
        else if (key == "fast_points") c.fast_points = parse_number<std::size_t>(name, v);
      } else if (section == "grad") {
        if (key == "max_iterations") c.max_iterations = parse_number<int>(name, v);
        else if (key == "tolerance") c.tolerance = parse_number<double>(name, v);
        else if (key == "history") c.history = parse_number<int>(name, v);
        else if (key == "init") c.init = v;
      } else if (section == "grid") {
        if (key == "gamma") c.grid_gamma = parse_list<double>(name, v);
        else if (key == "lambda") c.grid_lambda = parse_list<double>(name, v);
        else if (key == "c") c.grid_c = parse_list<double>(name, v);
      } else if (section == "summarize") {
        if (key == "gamma") c.gamma = v.empty() ? std::nullopt : std::optional<double>(parse_number<double>(name, v));
        else if (key == "lambda") c.lambda = parse_number<double>(name, v);
      }
    }
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path.string());
  return parse_config(in);
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "[data]\n"
      << "corpus = " << c.corpus << "\n"
      << "vectors = " << c.vectors << "\n"
      << "usps = " << c.usps << "\n"
      << "usps_train = " << c.usps_train << "\n"
      << "usps_test = " << c.usps_test << "\n"
      << "first_sentences = " << c.first_sentences << "\n"
      << "pca_variance = " << num(c.pca_variance) << "\n"
      << "train_fraction = " << num(c.train_fraction) << "\n\n";
  out << "[run]\n"
      << "methods = " << join(c.methods) << "\n"
      << "m = " << join(c.m) << "\n"
      << "classifiers = " << join(c.classifiers) << "\n"
      << "splits = " << c.splits << "\n"
      << "seed = " << c.seed << "\n"
      << "workers = " << c.workers << "\n"
      << "folds = " << c.folds << "\n"
      << "out = " << c.out << "\n"
      << "fast = " << (c.fast ? "true" : "false") << "\n"
      << "fast_points = " << c.fast_points << "\n\n";
  out << "[grad]\n"
      << "max_iterations = " << c.max_iterations << "\n"
      << "tolerance = " << num(c.tolerance) << "\n"
      << "history = " << c.history << "\n"
      << "init = " << c.init << "\n\n";
  out << "[grid]\n"
      << "gamma = " << join(c.grid_gamma) << "\n"
      << "lambda = " << join(c.grid_lambda) << "\n"
      << "c = " << join(c.grid_c) << "\n\n";
  out << "[summarize]\n"
      << "gamma = " << (c.gamma ? num(*c.gamma) : std::string()) << "\n"
      << "lambda = " << num(c.lambda) << "\n";
  return out.str();
}

}  // namespace compsumm::cli
