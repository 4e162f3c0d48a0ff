#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gaitscore/dataset.hpp"
#include "gaitscore/error.hpp"
#include "gaitscore/loocv.hpp"
#include "gaitscore/metrics.hpp"
#include "gaitscore/report.hpp"
#include "gaitscore/synth.hpp"
#include "gaitscore/wilcoxon.hpp"
#include "oracles.hpp"

using namespace gaitscore;

namespace {

Eigen::VectorXd probs(std::initializer_list<double> v) {
  Eigen::VectorXd p(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) p[i++] = x;
  return p;
}

FoldResult fold(int truth, const Eigen::VectorXd& p) {
  FoldResult f;
  f.subject_id = "s" + std::to_string(truth);
  f.truth = truth;
  f.exam_probs = p;
  f.clip_probs = {p};
  Eigen::Index best;
  p.maxCoeff(&best);
  f.predicted = static_cast<int>(best);
  return f;
}

Eigen::VectorXd one_hot_ish(int c) {
  Eigen::VectorXd p = Eigen::VectorXd::Constant(4, 0.1);
  p[c] = 0.7;
  return p;
}

}  // namespace

TEST_CASE("vote examples") {
  const std::vector<Eigen::VectorXd> majority{one_hot_ish(1), one_hot_ish(1), one_hot_ish(2)};
  CHECK(vote(majority).label == 1);

  const std::vector<Eigen::VectorXd> tie{probs({0.1, 0.45, 0.4, 0.05}), probs({0.05, 0.3, 0.6, 0.05})};
  CHECK(vote(tie).label == 2);

  const std::vector<Eigen::VectorXd> single{probs({0.2, 0.1, 0.3, 0.4})};
  const VoteResult s = vote(single);
  CHECK(s.label == 3);
  CHECK(s.probabilities == single[0]);

  const VoteResult m = vote(majority);
  CHECK((m.probabilities - (2 * one_hot_ish(1) + one_hot_ish(2)) / 3.0).norm() < 1e-15);

  CHECK_THROWS_AS(vote(std::vector<Eigen::VectorXd>{}), InputError);
}

TEST_CASE("rank AUC examples and pair-counting oracle") {
  const std::vector<double> scores{0.9, 0.8, 0.7, 0.85};
  const std::vector<bool> pos_mask{true, true, false, false};
  bool flags[4];
  std::copy(pos_mask.begin(), pos_mask.end(), flags);
  CHECK(rank_auc(scores, flags) == doctest::Approx(0.75).epsilon(1e-15));

  std::mt19937_64 gen(4);
  std::uniform_int_distribution<int> coarse(0, 5);  // many ties
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + trial % 20;
    std::vector<double> s(n);
    std::unique_ptr<bool[]> pos(new bool[n]);
    std::vector<double> p, q;
    for (int i = 0; i < n; ++i) {
      s[i] = coarse(gen) / 5.0;
      pos[i] = (gen() & 1U) != 0;
      (pos[i] ? p : q).push_back(s[i]);
    }
    const double auc = rank_auc(s, std::span<const bool>(pos.get(), n));
    if (p.empty() || q.empty()) {
      CHECK(std::isnan(auc));
    } else {
      CHECK(auc == doctest::Approx(oracle::pairwise_auc(p, q)).epsilon(1e-12));
    }
  }
}

TEST_CASE("metrics of a perfect classifier") {
  std::vector<FoldResult> folds;
  for (int c = 0; c < 4; ++c) {
    for (int i = 0; i < 3; ++i) folds.push_back(fold(c, one_hot_ish(c)));
  }
  const EvalReport r = compute_metrics(folds);
  CHECK(r.macro.f1 == 1.0);
  CHECK(r.macro.auc == 1.0);
  CHECK(r.balanced_accuracy == 1.0);
  CHECK(r.n_exams == 12);
  CHECK(r.confusion == Eigen::MatrixXi::Identity(4, 4) * 3);
}

TEST_CASE("metrics zero-division rule and hand-computed values") {
  // truth:     0 0 1 1 2 3
  // predicted: 0 1 1 1 1 3   (class 2 never predicted)
  std::vector<FoldResult> folds{fold(0, one_hot_ish(0)), fold(0, one_hot_ish(1)),
                                fold(1, one_hot_ish(1)), fold(1, one_hot_ish(1)),
                                fold(2, one_hot_ish(1)), fold(3, one_hot_ish(3))};
  const EvalReport r = compute_metrics(folds);
  CHECK(r.per_class[2].precision == 0.0);
  CHECK(r.per_class[2].recall == 0.0);
  CHECK(r.per_class[2].f1 == 0.0);
  CHECK(r.per_class[1].precision == doctest::Approx(0.5));
  CHECK(r.per_class[1].recall == doctest::Approx(1.0));
  CHECK(r.per_class[1].f1 == doctest::Approx(2.0 / 3.0));
  CHECK(r.per_class[0].f1 == doctest::Approx(2.0 / 3.0));
  CHECK(r.per_class[3].f1 == 1.0);
  CHECK(r.macro.f1 == doctest::Approx((2.0 / 3 + 2.0 / 3 + 0 + 1) / 4));
  CHECK(r.balanced_accuracy == doctest::Approx((0.5 + 1 + 0 + 1) / 4));
  CHECK(r.confusion(2, 1) == 1);
  CHECK(r.confusion.sum() == 6);
}

TEST_CASE("paired scores") {
  std::vector<FoldResult> folds{fold(0, probs({0.6, 0.2, 0.1, 0.1})), fold(2, probs({0.5, 0.1, 0.3, 0.1}))};
  CHECK(paired_scores(folds, PairingUnit::Correctness) == std::vector<double>{1.0, 0.0});
  CHECK(paired_scores(folds, PairingUnit::TrueClassProbability) == std::vector<double>{0.6, 0.3});
  CHECK(parse_pairing_unit("correct") == PairingUnit::Correctness);
  CHECK(parse_pairing_unit("prob") == PairingUnit::TrueClassProbability);
  CHECK_THROWS_AS(parse_pairing_unit("both"), InputError);
}

TEST_CASE("wilcoxon examples") {
  const std::vector<double> a{1, 2, 3, 4, 5, 6};
  const WilcoxonResult same = wilcoxon_signed_rank(a, a);
  CHECK(same.p_value == 1.0);
  CHECK(same.n == 0);

  const std::vector<double> b{0, 0, 0, 0, 0, 0};
  const WilcoxonResult r = wilcoxon_signed_rank(a, b);
  CHECK(r.exact);
  CHECK(r.statistic == 0.0);
  CHECK(r.w_minus == 0.0);
  CHECK(r.w_plus == 21.0);
  CHECK(r.p_value == doctest::Approx(0.03125).epsilon(1e-15));

  CHECK_THROWS_AS(wilcoxon_signed_rank(a, std::vector<double>{1, 2}), InputError);
}

TEST_CASE("exact wilcoxon matches sign enumeration") {
  std::mt19937_64 gen(10);
  std::uniform_int_distribution<int> len(1, 12);
  std::normal_distribution<double> d;
  std::uniform_int_distribution<int> small(-3, 3);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = len(gen);
    std::vector<double> a(n), b(n);
    const bool tied = trial % 3 == 0;  // integer data gives ties and zeros
    for (int i = 0; i < n; ++i) {
      a[i] = tied ? small(gen) : d(gen);
      b[i] = tied ? small(gen) : d(gen);
    }
    const auto expect = oracle::signed_rank_enumeration(a, b);
    const auto got = wilcoxon_signed_rank(a, b);
    REQUIRE(got.w_plus == expect.w_plus);
    REQUIRE(got.w_minus == expect.w_minus);
    REQUIRE(got.p_value == doctest::Approx(expect.p_value).epsilon(1e-12));
  }
}

TEST_CASE("normal approximation agrees with the exact test for moderate n") {
  std::mt19937_64 gen(12);
  std::normal_distribution<double> d(0.3, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(26), b(26, 0.0);
    for (auto& v : a) v = d(gen);
    const auto exact = wilcoxon_signed_rank_exact(a, b);
    const auto normal = wilcoxon_signed_rank_normal(a, b);
    CHECK(exact.statistic == normal.statistic);
    worst = std::max(worst, std::abs(exact.p_value - normal.p_value));
  }
  CHECK(worst < 0.02);
  std::vector<double> big(30, 1.0), zero(30, 0.0);
  CHECK_FALSE(wilcoxon_signed_rank(big, zero).exact);
}

namespace {

std::vector<PoseDocument> small_cohort() {
  std::vector<PoseDocument> docs;
  for (int c = 0; c < 4; ++c) {
    for (int i = 0; i < 2; ++i) {
      PoseDocument d;
      d.sequence = synth_gait(c, d.layout, 40, 100 * c + i);
      docs.push_back(d);
    }
  }
  return docs;
}

LoocvConfig small_config() {
  LoocvConfig cfg;
  cfg.preprocess.window = 20;
  cfg.preprocess.min_tail = 10;
  cfg.filters = 4;
  cfg.train.epochs = 2;
  cfg.train.batch_size = 8;
  cfg.train.seed = 5;
  return cfg;
}

}  // namespace

TEST_CASE("prepare_exam clips and crops") {
  PoseDocument d;
  d.sequence = synth_gait(3, d.layout, 45, 1);
  PreprocessConfig cfg;
  cfg.window = 20;
  cfg.min_tail = 5;
  const PreparedExam e = prepare_exam(d, cfg, 1);
  CHECK(e.clips.size() == 3);
  CHECK(e.crops.size() == 2);
  CHECK(training_samples(std::span<const PreparedExam>(&e, 1)).size() == 5);
  CHECK(clip_features(e).size() == 3);

  d.sequence = synth_gait(0, d.layout, 45, 1);
  CHECK(prepare_exam(d, cfg, 1).crops.empty());
}

TEST_CASE("loocv folds") {
  auto docs = small_cohort();
  // two exams of one subject must never be split across train and test
  docs[0].sequence.subject_id = "shared";
  docs[2].sequence.subject_id = "shared";
  const LoocvConfig cfg = small_config();

  std::vector<std::size_t> seen;
  const auto folds = loocv(docs, cfg, [&](std::size_t f, const FoldResult&) { seen.push_back(f); });
  REQUIRE(folds.size() == docs.size());
  CHECK(seen.size() == docs.size());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const auto& held = docs[f].sequence.subject_id;
    CHECK(folds[f].subject_id == held);
    CHECK(std::find(folds[f].training_subjects.begin(), folds[f].training_subjects.end(), held) ==
          folds[f].training_subjects.end());
    CHECK(folds[f].truth == *docs[f].sequence.label);
    CHECK(std::abs(folds[f].exam_probs.sum() - 1.0) < 1e-9);
  }
  CHECK(folds[0].training_subjects.size() == docs.size() - 2);
  CHECK(folds[1].training_subjects.size() == docs.size() - 1);

  SUBCASE("deterministic, including with worker threads") {
    const auto again = loocv(docs, cfg);
    LoocvConfig threaded = cfg;
    threaded.workers = 3;
    const auto parallel = loocv(docs, threaded);
    for (std::size_t f = 0; f < folds.size(); ++f) {
      CHECK(again[f].exam_probs == folds[f].exam_probs);
      CHECK(parallel[f].exam_probs == folds[f].exam_probs);
      CHECK(parallel[f].predicted == folds[f].predicted);
    }
  }
}

TEST_CASE("loocv warns when a class is missing from a training set") {
  auto docs = small_cohort();
  docs.erase(docs.begin() + 7);  // class 3 now has a single exam
  const auto folds = loocv(docs, small_config());
  REQUIRE(folds.size() == 7);
  CHECK(folds[6].warnings.size() == 1);
  CHECK(folds[6].warnings[0].find("class 3") != std::string::npos);
  CHECK(folds[0].warnings.empty());
}

TEST_CASE("loocv input validation") {
  auto docs = small_cohort();
  CHECK_THROWS_AS(loocv(std::span<const PoseDocument>(docs.data(), 1), small_config()), InputError);
  docs[3].sequence.label.reset();
  CHECK_THROWS_AS(loocv(docs, small_config()), InputError);
}

TEST_CASE("report outputs") {
  std::vector<FoldResult> folds;
  for (int c = 0; c < 4; ++c) folds.push_back(fold(c, one_hot_ish(c == 2 ? 1 : c)));
  const EvalReport r = compute_metrics(folds);

  std::ostringstream table;
  write_report_table(table, r);
  CHECK(table.str().find("Macro Average") != std::string::npos);

  Comparison cmp;
  cmp.baseline = "ce";
  cmp.pairing = "prob";
  cmp.test = wilcoxon_signed_rank(std::vector<double>{1, 2, 3, 4, 5}, std::vector<double>{0, 0, 0, 0, 0});
  cmp.baseline_report = r;
  const auto j = nlohmann::json::parse(report_json(r, folds, cmp));
  CHECK(j["n_exams"] == 4);
  CHECK(j["folds"].size() == 4);
  CHECK(j["comparison"]["baseline"] == "ce");
  CHECK(j["per_class"][2]["f1"] == 0.0);

  std::ostringstream csv;
  write_confusion_csv(csv, r);
  CHECK(csv.str().find("true\\pred") != std::string::npos);

  oracle::TempDir dir("report");
  write_report_files(dir.path() / "out", r, folds, cmp);
  for (const char* name : {"report.txt", "report.json", "confusion.csv", "folds.csv"}) {
    CHECK(std::filesystem::exists(dir.path() / "out" / name));
  }
}
