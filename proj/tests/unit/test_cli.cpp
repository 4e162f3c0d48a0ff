#include <doctest.h>

#include <sstream>

#include "commands.hpp"
#include "gaitscore/error.hpp"
#include "gaitscore/pose_io.hpp"
#include "gaitscore/synth.hpp"
#include "oracles.hpp"

using namespace gaitscore;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gaitscore");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

std::vector<std::string> synth_files(const oracle::TempDir& dir, int per_class, int frames) {
  const auto r = run_cli({"synth", "--seed", "7", "--per-class", std::to_string(per_class), "--frames",
                          std::to_string(frames), "--out", (dir / "data").string()});
  REQUIRE(r.code == 0);
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(dir / "data")) files.push_back(e.path().string());
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<std::string> tiny_training_flags() {
  return {"--window", "20", "--min-tail", "10", "--filters", "4", "--epochs", "2", "--batch", "8"};
}

}  // namespace

TEST_CASE("synth writes labelled, deterministic files") {
  oracle::TempDir dir("cli_synth");
  const auto files = synth_files(dir, 2, 30);
  REQUIRE(files.size() == 8);
  CHECK(fs::path(files[0]).filename() == "synth_c0_000.pose");
  CHECK(fs::path(files[7]).filename() == "synth_c3_001.pose");
  for (std::size_t i = 0; i < files.size(); ++i) {
    const auto doc = read_pose_file(files[i]);
    CHECK(doc.sequence.label == static_cast<int>(i / 2));
    CHECK(doc.sequence.size() == 30);
  }
  const std::string first = oracle::slurp(files[5]);
  synth_files(dir, 2, 30);
  CHECK(oracle::slurp(files[5]) == first);
}

TEST_CASE("track command") {
  oracle::TempDir dir("cli_track");
  std::string det;
  for (int t = 0; t < 20; ++t) det += std::to_string(t) + " 10 10 50 120 0.9\n";
  oracle::spit(dir / "det.txt", det);

  const auto ok = run_cli({"track", (dir / "det.txt").string(), "--out", (dir / "tracks.csv").string()});
  CHECK(ok.code == 0);
  CHECK(contains(ok.out, "participant 1"));
  CHECK(fs::exists(dir / "tracks.csv"));

  oracle::spit(dir / "empty.txt", "");
  const auto empty = run_cli({"track", (dir / "empty.txt").string()});
  CHECK(empty.code != 0);
  CHECK(contains(empty.err, "no detections"));

  oracle::spit(dir / "bad.txt", "0 1 1 2 2 0.5\n1 1 1 2\n");
  const auto bad = run_cli({"track", (dir / "bad.txt").string()});
  CHECK(bad.code != 0);
  CHECK(contains(bad.err, "bad.txt:2"));

  const auto missing = run_cli({"track", (dir / "nope.txt").string()});
  CHECK(missing.code != 0);
}

TEST_CASE("train, determinism and score") {
  oracle::TempDir dir("cli_train");
  const auto files = synth_files(dir, 1, 40);
  auto train_args = [&](const std::string& out) {
    std::vector<std::string> a{"train"};
    a.insert(a.end(), files.begin(), files.end());
    for (const auto& f : tiny_training_flags()) a.push_back(f);
    a.insert(a.end(), {"--seed", "11", "--out", out});
    return a;
  };
  const auto a = run_cli(train_args((dir / "a.ckpt").string()));
  REQUIRE(a.code == 0);
  const auto b = run_cli(train_args((dir / "b.ckpt").string()));
  REQUIRE(b.code == 0);
  CHECK(oracle::slurp(dir / "a.ckpt") == oracle::slurp(dir / "b.ckpt"));
  CHECK(fs::exists(dir / "a.ckpt.loss.csv"));

  SUBCASE("score prints a label and four probabilities") {
    const auto s = run_cli({"score", files[3], "--checkpoint", (dir / "a.ckpt").string()});
    REQUIRE(s.code == 0);
    std::istringstream lines(s.out);
    std::string line, word;
    double sum = 0.0;
    int label = -1, count = 0;
    while (std::getline(lines, line)) {
      std::istringstream row(line);
      row >> word;
      if (word == "score") row >> label;
      if (word == "probabilities") {
        double p;
        while (row >> p) {
          sum += p;
          ++count;
        }
      }
    }
    CHECK(label >= 0);
    CHECK(label <= 3);
    CHECK(count == 4);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-5));
  }
  SUBCASE("score with a mismatched spec") {
    const auto s = run_cli({"score", files[0], "--checkpoint", (dir / "a.ckpt").string(), "--filters", "8"});
    CHECK(s.code != 0);
    CHECK(contains(s.err, "mismatch"));
  }
  SUBCASE("score an exam shorter than min_tail") {
    PoseDocument doc;
    doc.sequence = synth_gait(1, doc.layout, 5, 3);
    write_pose_file(dir / "short.pose", doc);
    const auto s = run_cli({"score", (dir / "short.pose").string(), "--checkpoint", (dir / "a.ckpt").string(),
                            "--min-tail", "10"});
    CHECK(s.code != 0);
    CHECK(contains(s.err, "min_tail"));
  }
  SUBCASE("different seed gives a different checkpoint") {
    auto args = train_args((dir / "c.ckpt").string());
    args[args.size() - 3] = "12";
    REQUIRE(run_cli(args).code == 0);
    CHECK(oracle::slurp(dir / "c.ckpt") != oracle::slurp(dir / "a.ckpt"));
  }
}

TEST_CASE("train error paths") {
  oracle::TempDir dir("cli_train_errors");
  const auto files = synth_files(dir, 1, 40);

  std::vector<std::string> no_seed{"train", files[0], files[3]};
  const auto r = run_cli(no_seed);
  CHECK(r.code != 0);
  CHECK(contains(r.err, "--seed"));

  PoseDocument unlabelled = read_pose_file(files[0]);
  unlabelled.sequence.label.reset();
  write_pose_file(dir / "nolabel.pose", unlabelled);
  std::vector<std::string> args{"train", files[1], (dir / "nolabel.pose").string(), "--seed", "1"};
  for (const auto& f : tiny_training_flags()) args.push_back(f);
  const auto nl = run_cli(args);
  CHECK(nl.code != 0);
  CHECK(contains(nl.err, "no label"));

  const auto bad_loss = run_cli({"train", files[0], "--seed", "1", "--loss", "hinge"});
  CHECK(bad_loss.code != 0);
  CHECK(contains(bad_loss.err, "hinge"));

  const auto no_cmd = run_cli({});
  CHECK(no_cmd.code != 0);
}

TEST_CASE("config file precedence") {
  oracle::TempDir dir("cli_config");
  const auto files = synth_files(dir, 1, 40);
  oracle::spit(dir / "cfg.json",
               R"({"seed": 3, "epochs": 4, "window": 20, "min_tail": 10, "filters": 4, "batch": 8})");

  std::vector<std::string> args{"train"};
  args.insert(args.end(), files.begin(), files.end());
  args.insert(args.end(), {"--config", (dir / "cfg.json").string(), "--out", (dir / "m.ckpt").string()});
  REQUIRE(run_cli(args).code == 0);
  // header line plus one row per epoch from the config file
  auto rows = [&] {
    const std::string csv = oracle::slurp(dir / "m.ckpt.loss.csv");
    return std::count(csv.begin(), csv.end(), '\n') - 1;
  };
  CHECK(rows() == 4);

  args.insert(args.end(), {"--epochs", "2"});
  REQUIRE(run_cli(args).code == 0);
  CHECK(rows() == 2);

  oracle::spit(dir / "bad.json", R"({"epochs": 4, "colour": "blue"})");
  const auto bad = run_cli({"train", files[0], "--config", (dir / "bad.json").string()});
  CHECK(bad.code != 0);
  CHECK(contains(bad.err, "colour"));

  oracle::spit(dir / "typed.json", R"({"epochs": "many"})");
  const auto typed = run_cli({"train", files[0], "--config", (dir / "typed.json").string()});
  CHECK(typed.code != 0);
}

TEST_CASE("evaluate writes report files") {
  oracle::TempDir dir("cli_eval");
  const auto files = synth_files(dir, 2, 40);
  std::vector<std::string> args{"evaluate"};
  args.insert(args.end(), files.begin(), files.end());
  for (const auto& f : tiny_training_flags()) args.push_back(f);
  args.insert(args.end(), {"--seed", "2", "--out", (dir / "eval").string(), "--compare-loss", "ce"});
  const auto r = run_cli(args);
  REQUIRE(r.code == 0);
  CHECK(contains(r.out, "Macro Average"));
  CHECK(contains(r.out, "Wilcoxon"));
  for (const char* name : {"report.txt", "report.json", "confusion.csv", "folds.csv"}) {
    CHECK(fs::exists(dir / "eval" / name));
  }
}

TEST_CASE("gradcheck command") {
  const auto r = run_cli({"gradcheck"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "PASS"));
}
