#include "gaitscore/loocv.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "gaitscore/error.hpp"
#include "gaitscore/random.hpp"

namespace gaitscore {

FoldResult score_exam(const nn::Network& model, const PreparedExam& exam) {
  FoldResult result;
  result.subject_id = exam.subject_id;
  for (const auto& features : clip_features(exam)) result.clip_probs.push_back(model.predict(features));
  const VoteResult v = vote(result.clip_probs);
  result.predicted = v.label;
  result.exam_probs = v.probabilities;
  result.truth = exam.label.value_or(-1);
  return result;
}

namespace {

FoldResult run_fold(std::size_t fold, std::span<const PreparedExam> prepared,
                    const LoocvConfig& cfg) {
  const PreparedExam& held_out = prepared[fold];
  std::vector<PreparedExam> train_exams;
  std::set<int> train_classes;
  for (const auto& exam : prepared) {
    if (exam.subject_id == held_out.subject_id) continue;
    train_exams.push_back(exam);
    train_classes.insert(*exam.label);
  }
  if (train_exams.empty()) {
    throw InputError("loocv: fold for '" + held_out.subject_id + "' has no training exams");
  }

  FoldResult placeholder;
  for (int c = 0; c < kNumClasses; ++c) {
    if (!train_classes.contains(c)) {
      placeholder.warnings.push_back("class " + std::to_string(c) +
                                     " absent from training set of fold " + held_out.subject_id);
    }
  }

  nn::TrainConfig train_cfg = cfg.train;
  train_cfg.seed = splitmix64(cfg.train.seed + 0x9E37 * (fold + 1));
  nn::ModelSpec spec;
  spec.filters = cfg.filters;
  spec.n_joints = static_cast<int>(held_out.clips.front().frames.front().size());
  spec.window = cfg.preprocess.window;
  spec.num_classes = kNumClasses;

  const auto samples = training_samples(train_exams);
  const nn::TrainResult trained = nn::train(samples, spec, train_cfg);

  FoldResult result = score_exam(trained.model, held_out);
  result.warnings = std::move(placeholder.warnings);
  for (const auto& exam : train_exams) result.training_subjects.push_back(exam.subject_id);
  return result;
}

}  // namespace

std::vector<FoldResult> loocv(std::span<const PoseDocument> exams, const LoocvConfig& cfg,
                              const FoldCallback& on_fold) {
  if (exams.size() < 2) throw InputError("loocv needs at least two exams");
  std::set<std::string> subjects;
  std::vector<PreparedExam> prepared;
  prepared.reserve(exams.size());
  for (const auto& doc : exams) {
    if (!doc.sequence.label) {
      throw InputError("loocv: exam '" + doc.sequence.subject_id + "' has no label");
    }
    prepared.push_back(prepare_exam(doc, cfg.preprocess, cfg.train.seed));
    subjects.insert(doc.sequence.subject_id);
  }
  if (subjects.size() < 2) throw InputError("loocv needs at least two subjects");

  std::vector<FoldResult> results(prepared.size());
  const int workers = std::max(1, cfg.workers);
  if (workers == 1) {
    for (std::size_t f = 0; f < prepared.size(); ++f) {
      results[f] = run_fold(f, prepared, cfg);
      if (on_fold) on_fold(f, results[f]);
    }
    return results;
  }

  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr failure;
  auto worker = [&]() {
    for (;;) {
      const std::size_t f = next.fetch_add(1);
      if (f >= prepared.size()) return;
      try {
        FoldResult r = run_fold(f, prepared, cfg);
        std::lock_guard lock(mu);
        results[f] = std::move(r);
        if (on_fold) on_fold(f, results[f]);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace gaitscore
