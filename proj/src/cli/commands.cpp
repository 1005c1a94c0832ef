#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_map>

#include "CLI11.hpp"
#include "compsumm/experiment.hpp"
#include "compsumm/kernel.hpp"
#include "compsumm/methods.hpp"
#include "compsumm/parallel.hpp"
#include "compsumm/rng.hpp"

namespace compsumm::cli {

namespace {

namespace fs = std::filesystem;

constexpr const char* kDataHint =
    "no dataset given: set [data] corpus + vectors, usps, or usps_train + usps_test in the config, "
    "or pass --corpus/--vectors, --usps, or --usps-train/--usps-test";

std::string g10(double v) {
  if (std::isnan(v)) return "none";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

// Group names become file names; keep them portable.
std::string file_stem(const std::string& name) {
  std::string out;
  for (const char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
    out += ok ? c : '_';
  }
  return out.empty() ? "group" : out;
}

GradConfig grad_config(const RunConfig& config, bool digits) {
  GradConfig g;
  g.max_iterations = config.max_iterations;
  g.gradient_tolerance = config.tolerance;
  g.history_size = config.history;
  g.init = config.init == "auto" ? (digits ? MetaInit::kmeans : MetaInit::greedy) : parse_meta_init(config.init);
  g.seed = config.seed;
  return g;
}

std::vector<SplitPair> build_splits(const RunConfig& config, const LoadedData& data) {
  if (data.train) return make_fixed_splits(*data.train, *data.test, config.splits, config.seed);
  return make_splits(*data.pooled, config.train_fraction, config.splits, config.seed);
}

void write_matrix_row(std::ostream& out, const Matrix& m, Eigen::Index r) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? " " : "") << g10(m(r, c));
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ValidationError*>(&e)) return kConfigError;
  if (dynamic_cast<const DataError*>(&e)) return kDataError;
  return kInternalError;
}

LoadedData load_data(const RunConfig& config) {
  config.validate();
  LoadedData out;
  if (config.has_corpus()) {
    out.documents = load_corpus(config.corpus);
    const WordVectorTable vectors = load_word_vectors(config.vectors);
    EmbeddingResult embedded = embed_documents(out.documents, vectors, config.first_sentences);
    out.dropped = embedded.dropped;
    out.pooled = std::move(embedded.dataset);
  } else if (!config.usps.empty()) {
    out.digits = true;
    out.pooled = load_usps(config.usps);
  } else if (!config.usps_train.empty()) {
    out.digits = true;
    out.train = load_usps(config.usps_train);
    out.test = load_usps(config.usps_test);
  } else {
    throw ValidationError(kDataHint);
  }

  if (config.pca_variance > 0.0) {
    const PcaModel model = fit_pca(out.summary_source(), config.pca_variance);
    if (out.pooled) out.pooled = apply_pca(model, *out.pooled);
    if (out.train) out.train = apply_pca(model, *out.train);
    if (out.test) out.test = apply_pca(model, *out.test);
  }
  return out;
}

void run_summarize(const RunConfig& config, std::ostream& log) {
  if (config.methods.size() != 1 || config.m.size() != 1) {
    throw ValidationError("summarize takes exactly one method and one M");
  }
  const LoadedData loaded = load_data(config);
  const GroupedDataset& data = loaded.summary_source();
  const Method method = parse_method(config.methods[0]);
  const std::size_t M = config.m[0];

  MethodSpec spec;
  spec.method = method;
  spec.grad = grad_config(config, loaded.digits);
  spec.seed = config.seed;
  Hyperparameters hp;
  hp.gamma = config.gamma ? *config.gamma : median_gamma(data.points(), kMedianPairs, config.seed);
  hp.lambda = config.lambda;
  const Summary summary = summarise(data, spec, M, hp);

  std::unordered_map<std::string, const Document*> by_id;
  for (const auto& d : loaded.documents) by_id.emplace(d.id, &d);

  fs::create_directories(config.out);
  for (std::size_t g = 0; g < data.num_groups(); ++g) {
    const std::string& name = data.group_names()[g];
    std::ofstream out = open_out(fs::path(config.out) / (file_stem(name) + ".txt"));
    const Provenance& p = summary.provenance;
    out << "# group: " << name << "\n"
        << "# method: " << to_string(method) << "\n"
        << "# objective: " << (p.objective.empty() ? "none" : p.objective) << "\n"
        << "# optimizer: " << (p.optimizer.empty() ? "none" : p.optimizer) << "\n"
        << "# gamma: " << g10(p.gamma) << "\n"
        << "# lambda: " << g10(p.lambda) << "\n"
        << "# value: " << g10(p.value) << "\n"
        << "# M: " << M << "\n"
        << "# items: " << summary.prototypes[g].size() << "\n";
    for (const int r : summary.prototypes[g]) {
      const std::string& id = data.row_ids()[static_cast<std::size_t>(r)];
      const auto it = by_id.find(id);
      if (it == by_id.end()) {
        out << "row\t" << id << "\n";
        continue;
      }
      const Document& d = *it->second;
      out << d.id << "\t" << d.group << "\t" << d.title << "\t";
      const std::size_t k = std::min<std::size_t>(d.sentences.size(), static_cast<std::size_t>(config.first_sentences));
      for (std::size_t s = 0; s < k; ++s) out << (s ? " " : "") << d.sentences[s];
      out << "\n";
    }
  }
  log << "summarized " << data.size() << " rows in " << data.num_groups() << " groups with " << to_string(method)
      << " (M = " << M << ")";
  if (loaded.dropped) log << "; " << loaded.dropped << " documents had no known words and were dropped";
  log << "\nwrote " << data.num_groups() << " files to " << config.out << "\n";
}

void run_evaluate(const RunConfig& config, std::ostream& log) {
  const LoadedData loaded = load_data(config);
  std::vector<SplitPair> splits = build_splits(config, loaded);
  if (config.fast) {
    for (auto& s : splits) s.train = stratified_subsample(s.train, config.fast_points, derive_seed(s.seed, 3));
  }

  ExperimentOptions options;
  for (const auto& m : config.methods) options.methods.push_back(parse_method(m));
  options.Ms = config.m;
  options.classifiers.clear();
  for (const auto& c : config.classifiers) options.classifiers.push_back(parse_classifier(c));
  options.folds = config.folds;
  options.grad = grad_config(config, loaded.digits);
  options.grid.gamma = config.grid_gamma;
  options.grid.lambda = config.grid_lambda;
  options.grid.C = config.grid_c;

  const std::vector<EvalReport> reports = run_experiment(splits, options);

  fs::create_directories(config.out);
  {
    std::ofstream out = open_out(fs::path(config.out) / "results.csv");
    write_results_csv(out, reports);
  }
  {
    std::ofstream out = open_out(fs::path(config.out) / "report.txt");
    write_report_text(out, reports);
  }
  std::ostringstream table;
  write_summary_table(table, reports);
  {
    std::ofstream out = open_out(fs::path(config.out) / "table.txt");
    out << table.str();
  }
  log << table.str() << "wrote results.csv, report.txt and table.txt to " << config.out << "\n";
}

void run_prepare(const RunConfig& config, std::ostream& log) {
  config.validate();
  RunConfig raw = config;
  raw.pca_variance = 0.0;
  const LoadedData loaded = load_data(raw);
  fs::create_directories(fs::path(config.out) / "splits");

  LoadedData data = loaded;
  if (config.pca_variance > 0.0) {
    const PcaModel model = fit_pca(loaded.summary_source(), config.pca_variance);
    std::ofstream out = open_out(fs::path(config.out) / "pca_model.txt");
    out << "# components: " << model.num_components() << "\n"
        << "# target_variance: " << g10(config.pca_variance) << "\n"
        << "# target_reached: " << (model.target_reached ? "true" : "false") << "\n"
        << "explained:";
    for (const double v : model.explained_variance_ratio) out << " " << g10(v);
    out << "\nmean:";
    for (Eigen::Index c = 0; c < model.mean.size(); ++c) out << " " << g10(model.mean[c]);
    out << "\n";
    for (Eigen::Index r = 0; r < model.components.rows(); ++r) {
      out << "component " << r << ": ";
      write_matrix_row(out, model.components, r);
      out << "\n";
    }
    if (data.pooled) data.pooled = apply_pca(model, *data.pooled);
    if (data.train) data.train = apply_pca(model, *data.train);
    if (data.test) data.test = apply_pca(model, *data.test);
    log << "PCA kept " << model.num_components() << " components\n";
  }

  auto write_data = [&](const GroupedDataset& d, const std::string& file) {
    std::ofstream out = open_out(fs::path(config.out) / file);
    out << "id,group";
    for (std::size_t c = 0; c < d.dim(); ++c) out << ",x" << c;
    out << "\n";
    for (std::size_t i = 0; i < d.size(); ++i) {
      out << d.row_ids()[i] << "," << d.group_names()[static_cast<std::size_t>(d.group_of(i))];
      for (const double v : d.row(i)) out << "," << g10(v);
      out << "\n";
    }
  };
  if (data.pooled) write_data(*data.pooled, "data.csv");
  if (data.train) write_data(*data.train, "train.csv");
  if (data.test) write_data(*data.test, "test.csv");

  const std::vector<SplitPair> splits = build_splits(config, data);
  for (std::size_t s = 0; s < splits.size(); ++s) {
    std::ofstream out = open_out(fs::path(config.out) / "splits" / ("split_" + std::to_string(s) + ".txt"));
    out << "# seed: " << splits[s].seed << "\n";
    for (const auto* part : {&splits[s].train, &splits[s].test}) {
      const char* tag = part == &splits[s].train ? "train" : "test";
      for (std::size_t i = 0; i < part->size(); ++i) {
        out << tag << "\t" << part->row_ids()[i] << "\t" << part->group_names()[static_cast<std::size_t>(part->group_of(i))]
            << "\n";
      }
    }
  }
  log << "wrote " << splits.size() << " splits to " << (fs::path(config.out) / "splits").string() << "\n";
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Comparative summarisation of grouped datasets"};
  app.require_subcommand(1);

  struct Overrides {
    std::string config;
    std::string method, m, classifier, out_dir, corpus, vectors, usps, usps_train, usps_test, init;
    std::optional<std::size_t> splits, fast_points;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<double> pca_variance, gamma, lambda;
    bool fast = false;
  } o;
  bool inject_fault = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "INI run configuration");
    sub->add_option("--method", o.method, "method name, or a comma-separated list for evaluate");
    sub->add_option("--m", o.m, "prototypes per group, or a comma-separated list for evaluate");
    sub->add_option("--splits", o.splits, "number of random train/test splits");
    sub->add_option("--seed", o.seed, "base seed");
    sub->add_option("--workers", o.workers, "worker threads (1 = sequential)");
    sub->add_option("--out", o.out_dir, "output directory");
    sub->add_option("--corpus", o.corpus, "JSON-lines corpus");
    sub->add_option("--vectors", o.vectors, "word vectors in GloVe text format");
    sub->add_option("--usps", o.usps, "digits file, split randomly");
    sub->add_option("--usps-train", o.usps_train, "digits training file");
    sub->add_option("--usps-test", o.usps_test, "digits test file");
    sub->add_option("--pca-variance", o.pca_variance, "PCA variance target (0 disables)");
    sub->add_option("--classifier", o.classifier, "1nn, svm, or a comma-separated list");
    sub->add_option("--init", o.init, "gradient initialisation: auto, greedy, kmeans, random");
    sub->add_option("--gamma", o.gamma, "kernel width for summarize");
    sub->add_option("--lambda", o.lambda, "trade-off for summarize");
    sub->add_flag("--fast", o.fast, "subsample each training split");
    sub->add_option("--fast-points", o.fast_points, "training points kept by --fast");
  };
  CLI::App* summarize = app.add_subcommand("summarize", "select prototypes and write one file per group");
  CLI::App* evaluate = app.add_subcommand("evaluate", "classification-based evaluation over random splits");
  CLI::App* prepare = app.add_subcommand("prepare", "fit PCA and write the data and splits");
  CLI::App* selftest = app.add_subcommand("selftest", "run the built-in oracle checks");
  common(summarize);
  common(evaluate);
  common(prepare);
  selftest->add_option("--workers", o.workers, "worker threads (1 = sequential)");
  selftest->add_flag("--inject-gradient-fault", inject_fault, "perturb analytic gradients (checks the checker)")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  }

  try {
    if (selftest->parsed()) {
      set_worker_count(o.workers.value_or(1));
      return run_selftest(out, {inject_fault}) ? kOk : 1;
    }

    RunConfig config = o.config.empty() ? RunConfig{} : load_config(o.config);
    if (!o.method.empty()) config.methods = split_list(o.method);
    if (!o.m.empty()) {
      config.m.clear();
      for (const auto& v : split_list(o.m)) {
        std::size_t parsed = 0;
        try {
          config.m.push_back(std::stoul(v, &parsed));
        } catch (const std::exception&) {
          parsed = 0;
        }
        if (parsed != v.size()) throw ValidationError("--m: '" + v + "' is not a count");
      }
    }
    if (!o.classifier.empty()) config.classifiers = split_list(o.classifier);
    if (o.splits) config.splits = *o.splits;
    if (o.seed) config.seed = *o.seed;
    if (o.workers) config.workers = *o.workers;
    if (!o.out_dir.empty()) config.out = o.out_dir;
    auto source = [&](const std::string& corpus, const std::string& usps, const std::string& usps_train) {
      if (corpus.empty() && usps.empty() && usps_train.empty()) return;
      config.corpus = corpus;
      config.usps = usps;
      config.usps_train = usps_train;
      if (usps_train.empty()) config.usps_test.clear();
    };
    source(o.corpus, o.usps, o.usps_train);
    if (!o.vectors.empty()) config.vectors = o.vectors;
    if (!o.usps_test.empty()) config.usps_test = o.usps_test;
    if (o.pca_variance) config.pca_variance = *o.pca_variance;
    if (!o.init.empty()) config.init = o.init;
    if (o.gamma) config.gamma = *o.gamma;
    if (o.lambda) config.lambda = *o.lambda;
    if (o.fast) config.fast = true;
    if (o.fast_points) config.fast_points = *o.fast_points;
    config.validate();
    set_worker_count(config.workers);

    if (summarize->parsed()) run_summarize(config, out);
    else if (evaluate->parsed()) run_evaluate(config, out);
    else if (prepare->parsed()) run_prepare(config, out);
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace compsumm::cli
