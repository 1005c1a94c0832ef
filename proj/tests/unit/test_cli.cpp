#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "config.hpp"
#include "doctest.h"
#include "synthetic.hpp"

using namespace compsumm;
using namespace compsumm::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::initializer_list<std::string> args) {
  std::vector<std::string> storage{"compsumm"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : storage) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("compsumm_unit_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> entries(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("config round-trips through its canonical text") {
  std::istringstream in(
      "[data]\ncorpus = c.jsonl\nvectors = v.txt\npca_variance = 0.85\n"
      "[run]\nmethods = kmeans, mmd-diff-grad\nm = 2,4\nclassifiers = 1nn,svm\nsplits = 3\nseed = 17\nworkers = 2\n"
      "[grad]\ninit = kmeans\n[grid]\nlambda = 0.5, 2\n[summarize]\ngamma = 0.125\n");
  const RunConfig c = parse_config(in);
  CHECK(c.methods == std::vector<std::string>{"kmeans", "mmd-diff-grad"});
  CHECK(c.m == std::vector<std::size_t>{2, 4});
  CHECK(c.gamma == 0.125);
  CHECK(c.grid_lambda == std::vector<double>{0.5, 2.0});
  std::istringstream again(serialize_config(c));
  CHECK(parse_config(again) == c);

  RunConfig d;
  d.tolerance = 1.0 / 3.0;
  d.train_fraction = 0.7;
  std::istringstream text(serialize_config(d));
  CHECK(parse_config(text) == d);
}

TEST_CASE("config rejects unknown keys and bad values") {
  std::istringstream unknown("[run]\nsplitz = 3\n");
  CHECK_THROWS_AS(parse_config(unknown), ValidationError);
  std::istringstream section("[extra]\na = 1\n");
  CHECK_THROWS_AS(parse_config(section), ValidationError);
  std::istringstream method("[run]\nmethods = pca\n");
  CHECK_THROWS_AS(parse_config(method).validate(), ValidationError);
  std::istringstream number("[run]\nsplits = many\n");
  CHECK_THROWS_AS(parse_config(number), ValidationError);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ValidationError("x")) == 2);
  CHECK(exit_code_for(DataError("x")) == 3);
  CHECK(exit_code_for(std::runtime_error("x")) == 4);
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
}

TEST_CASE("selftest passes and notices a broken gradient") {
  const Run ok = run({"selftest"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("selftest passed") != std::string::npos);
  const Run bad = run({"selftest", "--inject-gradient-fault"});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("FAIL gradient-finite-differences") != std::string::npos);
  CHECK(bad.out.find("PASS mmd2-brute-force") != std::string::npos);
  CHECK(run({"selftest"}).code == 0);
}

TEST_CASE("missing dataset gives a usage hint") {
  const fs::path dir = fresh_dir("nodata");
  const Run r = run({"evaluate", "--out", dir.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("--corpus") != std::string::npos);
  const Run m = run({"summarize", "--usps", (dir / "missing.txt").string(), "--out", dir.string()});
  CHECK(m.code == 3);
}

TEST_CASE("summarize writes one file per group and repeats byte for byte") {
  const fs::path dir = fresh_dir("summarize");
  const auto files = synthetic::write_toy_corpus(dir, 12, 3);
  auto summarize = [&](const std::string& out, const std::string& workers) {
    return run({"summarize", "--corpus", files.corpus.string(), "--vectors", files.vectors.string(), "--method",
                "mmd-diff-grad", "--m", "2", "--workers", workers, "--out", (dir / out).string()});
  };
  REQUIRE(summarize("a", "1").code == 0);
  REQUIRE(summarize("b", "3").code == 0);
  for (const char* group : {"pro.txt", "con.txt"}) {
    const std::string a = slurp(dir / "a" / group);
    CHECK(a == slurp(dir / "b" / group));
    CHECK(entries(a).size() == 2);
    CHECK(a.find("# method: mmd-diff-grad") != std::string::npos);
  }
}

TEST_CASE("summarize rejects M larger than a group") {
  const fs::path dir = fresh_dir("toolarge");
  const auto files = synthetic::write_toy_corpus(dir, 4, 3);
  const Run r = run({"summarize", "--corpus", files.corpus.string(), "--vectors", files.vectors.string(), "--method",
                     "kmeans", "--m", "9", "--out", (dir / "o").string()});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("evaluate writes per-split rows and an aggregate") {
  const fs::path dir = fresh_dir("evaluate");
  const fs::path digits = dir / "digits.txt";
  synthetic::write_digits_like(digits, {1, 7}, 15, 0.3, 5);
  const Run r = run({"evaluate", "--usps", digits.string(), "--method", "kmeans,mmd-diff-grad", "--m", "2,3",
                     "--splits", "2", "--out", (dir / "o").string()});
  REQUIRE(r.code == 0);
  const std::string csv = slurp(dir / "o" / "results.csv");
  // header + 4 cells x (2 splits + mean)
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 4 * 3);
  CHECK(fs::exists(dir / "o" / "table.txt"));
  CHECK(fs::exists(dir / "o" / "report.txt"));
}

TEST_CASE("command line overrides the config file") {
  const fs::path dir = fresh_dir("override");
  const fs::path digits = dir / "digits.txt";
  synthetic::write_digits_like(digits, {0, 3}, 10, 0.3, 6);
  {
    std::ofstream cfg(dir / "run.ini");
    cfg << "[data]\nusps = " << digits.string() << "\n[run]\nmethods = kmedoids\nm = 50\nout = "
        << (dir / "o").string() << "\n";
  }
  CHECK(run({"summarize", "--config", (dir / "run.ini").string()}).code == 2);
  CHECK(run({"summarize", "--config", (dir / "run.ini").string(), "--m", "2"}).code == 0);
  CHECK(entries(slurp(dir / "o" / "0.txt")).size() == 2);
}

TEST_CASE("prepare writes PCA model, data and splits") {
  const fs::path dir = fresh_dir("prepare");
  const fs::path digits = dir / "digits.txt";
  synthetic::write_digits_like(digits, {2, 5}, 10, 0.3, 7);
  const Run r = run({"prepare", "--usps", digits.string(), "--pca-variance", "0.9", "--splits", "2", "--out",
                     (dir / "o").string()});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "o" / "pca_model.txt"));
  CHECK(fs::exists(dir / "o" / "data.csv"));
  CHECK(fs::exists(dir / "o" / "splits" / "split_1.txt"));
}
