#include "gaitscore/dataset.hpp"

#include <algorithm>

#include "gaitscore/error.hpp"
#include "gaitscore/random.hpp"

namespace gaitscore {

void PreprocessConfig::validate() const {
  if (window < 3) throw InputError("window must be >= 3 frames");
  if (min_tail < 1) throw InputError("min_tail must be >= 1");
  if (sparse_crops < 0) throw InputError("sparse_crops must be >= 0");
  if (!(crop_fraction > 0.0 && crop_fraction <= 1.0)) throw InputError("crop_fraction must be in (0, 1]");
}

std::uint64_t hash_string(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

PreparedExam prepare_exam(const PoseDocument& doc, const PreprocessConfig& cfg,
                          std::uint64_t seed) {
  cfg.validate();
  doc.sequence.validate();
  const PoseSequence normalized = normalize_center(doc.sequence, doc.layout);

  PreparedExam exam;
  exam.subject_id = normalized.subject_id;
  exam.label = normalized.label;
  exam.clips = clip_sequence(normalized, cfg.window, cfg.min_tail);

  const bool sparse =
      exam.label && std::find(cfg.sparse_classes.begin(), cfg.sparse_classes.end(), *exam.label) !=
                        cfg.sparse_classes.end();
  if (sparse) {
    const std::uint64_t exam_seed = splitmix64(seed ^ hash_string(exam.subject_id));
    for (int c = 0; c < cfg.sparse_crops; ++c) {
      const Clip& source = exam.clips[static_cast<std::size_t>(c) % exam.clips.size()];
      auto crop = augment_crops(source, 1, cfg.crop_fraction,
                                splitmix64(exam_seed + static_cast<std::uint64_t>(c)));
      exam.crops.push_back(std::move(crop.front()));
    }
  }
  return exam;
}

std::vector<nn::TrainingSample> training_samples(std::span<const PreparedExam> exams) {
  std::vector<nn::TrainingSample> samples;
  for (const auto& exam : exams) {
    if (!exam.label) throw InputError("exam '" + exam.subject_id + "' has no label");
    for (const auto* group : {&exam.clips, &exam.crops}) {
      for (const auto& clip : *group) {
        samples.push_back({compute_features(clip), *exam.label, exam.subject_id});
      }
    }
  }
  return samples;
}

std::vector<FeatureTensor> clip_features(const PreparedExam& exam) {
  std::vector<FeatureTensor> out;
  out.reserve(exam.clips.size());
  for (const auto& clip : exam.clips) out.push_back(compute_features(clip));
  return out;
}

}  // namespace gaitscore
