#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gaitscore/dataset.hpp"
#include "gaitscore/loocv.hpp"
#include "gaitscore/metrics.hpp"
#include "gaitscore/nn/gradcheck.hpp"
#include "gaitscore/nn/train.hpp"
#include "gaitscore/report.hpp"
#include "gaitscore/tracker.hpp"

namespace gaitscore::cli {

/// Everything a subcommand may need. Filled from defaults, then the
/// --config file, then command-line flags.
struct RunConfig {
  TrackerConfig tracker;
  nn::TrainConfig train;
  PreprocessConfig preprocess;
  int filters = 32;
  std::optional<std::uint64_t> seed;
  int workers = 1;
  std::filesystem::path out;

  // evaluate
  std::optional<LossMode> compare_loss;
  PairingUnit pairing = PairingUnit::TrueClassProbability;

  // synth
  int per_class = 10;
  int frames = 300;

  /// Throws InputError when the seed is missing.
  std::uint64_t require_seed(const char* command) const;
};

struct TrackOutcome {
  std::vector<Track> tracks;
  int participant_id = 0;
  std::size_t n_frames = 0;
};

struct TrainOutcome {
  std::filesystem::path checkpoint;
  std::vector<double> loss_history;
  std::size_t n_samples = 0;
};

struct EvaluateOutcome {
  std::vector<FoldResult> folds;
  EvalReport report;
  std::optional<Comparison> comparison;
};

struct ScoreOutcome {
  std::string subject_id;
  int label = 0;
  Eigen::VectorXd probabilities;
  std::size_t n_clips = 0;
};

/// Tracks the detection stream, writes the track file to cfg.out and picks
/// the participant. Throws InputError on malformed or empty input.
TrackOutcome cmd_track(const std::filesystem::path& detections, const RunConfig& cfg);

/// Trains on every clip (and sparse-class crop) of the labelled exams and
/// writes a checkpoint to cfg.out plus `<out>.loss.csv`.
TrainOutcome cmd_train(const std::vector<std::filesystem::path>& poses, const RunConfig& cfg);

/// Leave-one-out evaluation; writes report files into the cfg.out directory.
EvaluateOutcome cmd_evaluate(const std::vector<std::filesystem::path>& poses,
                             const RunConfig& cfg);

/// Scores one exam with a checkpoint. When `expected` is set the checkpoint
/// must match that spec.
ScoreOutcome cmd_score(const std::filesystem::path& pose, const std::filesystem::path& checkpoint,
                       const RunConfig& cfg,
                       const std::optional<nn::ModelSpec>& expected = {});

/// Writes cfg.per_class synthetic exams per class into cfg.out; returns the
/// file paths in class-major order.
std::vector<std::filesystem::path> cmd_synth(const RunConfig& cfg);

/// Finite-difference check of the tiny model.
nn::GradcheckReport cmd_gradcheck(const RunConfig& cfg);

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gaitscore::cli
