#include "commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "gaitscore/error.hpp"
#include "gaitscore/nn/checkpoint.hpp"
#include "gaitscore/pose_io.hpp"
#include "gaitscore/random.hpp"
#include "gaitscore/synth.hpp"
#include "gaitscore/tracker_io.hpp"

namespace gaitscore::cli {

namespace fs = std::filesystem;

std::uint64_t RunConfig::require_seed(const char* command) const {
  if (!seed) throw InputError(std::string(command) + " requires --seed (or \"seed\" in --config)");
  return *seed;
}

namespace {

std::shared_ptr<spdlog::logger> g_log;

void init_logging(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  g_log = std::make_shared<spdlog::logger>("gaitscore", sink);
  g_log->set_pattern("[%l] %v");
  spdlog::level::level_enum level = spdlog::level::info;
  if (const char* env = std::getenv("GAITSCORE_LOG")) level = spdlog::level::from_str(env);
  g_log->set_level(level);
}

// Commands called directly (not through run()) log to stderr.
spdlog::logger& log() {
  if (!g_log) init_logging(std::cerr);
  return *g_log;
}

std::vector<PoseDocument> read_exams(const std::vector<fs::path>& paths) {
  if (paths.empty()) throw InputError("no pose files given");
  std::vector<PoseDocument> docs;
  docs.reserve(paths.size());
  for (const auto& p : paths) docs.push_back(read_pose_file(p));
  return docs;
}

void require_labels(const std::vector<PoseDocument>& docs, const std::vector<fs::path>& paths) {
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (!docs[i].sequence.label) throw InputError(paths[i].string() + ": training exam has no label");
  }
}

int common_joint_count(const std::vector<PoseDocument>& docs) {
  const int n = docs.front().layout.n_joints;
  for (const auto& d : docs) {
    if (d.layout.n_joints != n) throw InputError("exams disagree on n_joints");
  }
  return n;
}

}  // namespace

TrackOutcome cmd_track(const fs::path& detections, const RunConfig& cfg) {
  const DetectionStream stream = read_detections_file(detections);
  TrackOutcome outcome;
  outcome.n_frames = stream.size();
  outcome.tracks = track_frames(stream, cfg.tracker);
  const Track& participant = select_participant(outcome.tracks, stream.size());
  outcome.participant_id = participant.id;
  const fs::path out = cfg.out.empty() ? fs::path("tracks.csv") : cfg.out;
  write_tracks_file(out, outcome.tracks);
  log().info("{} confirmed tracks over {} frames; participant {} with {} boxes", outcome.tracks.size(),
             stream.size(), participant.id, participant.history.size());
  return outcome;
}

TrainOutcome cmd_train(const std::vector<fs::path>& poses, const RunConfig& cfg) {
  nn::TrainConfig train_cfg = cfg.train;
  train_cfg.seed = cfg.require_seed("train");
  const auto docs = read_exams(poses);
  require_labels(docs, poses);

  std::vector<PreparedExam> exams;
  for (const auto& d : docs) exams.push_back(prepare_exam(d, cfg.preprocess, train_cfg.seed));
  const auto samples = training_samples(exams);

  nn::ModelSpec spec;
  spec.filters = cfg.filters;
  spec.n_joints = common_joint_count(docs);
  spec.window = cfg.preprocess.window;

  log().info("training on {} clips from {} exams", samples.size(), exams.size());
  const auto result = nn::train(samples, spec, train_cfg, [](int epoch, double loss, double lr) {
    log().debug("epoch {} loss {:.6f} lr {:.3g}", epoch, loss, lr);
  });
  log().info("loss: first epoch {:.6f}, last epoch {:.6f}", result.loss_history.front(),
             result.loss_history.back());

  TrainOutcome outcome;
  outcome.checkpoint = cfg.out.empty() ? fs::path("model.ckpt") : cfg.out;
  outcome.loss_history = result.loss_history;
  outcome.n_samples = samples.size();
  nn::save_checkpoint(outcome.checkpoint, result.model, &result.adam);

  fs::path loss_path = outcome.checkpoint;
  loss_path += ".loss.csv";
  write_atomically(loss_path, [&](std::ostream& out) {
    out << "epoch,loss\n";
    char buf[64];
    for (std::size_t e = 0; e < result.loss_history.size(); ++e) {
      std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", e, result.loss_history[e]);
      out << buf;
    }
  });
  return outcome;
}

EvaluateOutcome cmd_evaluate(const std::vector<fs::path>& poses, const RunConfig& cfg) {
  const auto docs = read_exams(poses);
  require_labels(docs, poses);
  common_joint_count(docs);

  LoocvConfig lcfg;
  lcfg.preprocess = cfg.preprocess;
  lcfg.filters = cfg.filters;
  lcfg.train = cfg.train;
  lcfg.train.seed = cfg.require_seed("evaluate");
  lcfg.workers = cfg.workers;

  auto on_fold = [&](std::size_t f, const FoldResult& r) {
    log().info("fold {}/{} {}: true {} predicted {}", f + 1, docs.size(), r.subject_id, r.truth,
               r.predicted);
    for (const auto& w : r.warnings) log().warn("{}", w);
  };

  EvaluateOutcome outcome;
  outcome.folds = loocv(docs, lcfg, on_fold);
  outcome.report = compute_metrics(outcome.folds);

  if (cfg.compare_loss) {
    LoocvConfig base = lcfg;
    base.train.loss_mode = *cfg.compare_loss;
    log().info("baseline run with loss {}", to_string(*cfg.compare_loss));
    const auto base_folds = loocv(docs, base, on_fold);
    const auto ours = paired_scores(outcome.folds, cfg.pairing);
    const auto theirs = paired_scores(base_folds, cfg.pairing);
    Comparison cmp;
    cmp.baseline = std::string(to_string(*cfg.compare_loss));
    cmp.pairing = cfg.pairing == PairingUnit::Correctness ? "correct" : "prob";
    cmp.test = wilcoxon_signed_rank(ours, theirs);
    cmp.baseline_report = compute_metrics(base_folds);
    outcome.comparison = std::move(cmp);
  }

  const fs::path dir = cfg.out.empty() ? fs::path("eval_report") : cfg.out;
  write_report_files(dir, outcome.report, outcome.folds, outcome.comparison);
  return outcome;
}

ScoreOutcome cmd_score(const fs::path& pose, const fs::path& checkpoint, const RunConfig& cfg,
                       const std::optional<nn::ModelSpec>& expected) {
  const nn::Checkpoint ckpt = nn::load_checkpoint(checkpoint, expected);
  const nn::ModelSpec& spec = ckpt.model.spec();
  const PoseDocument doc = read_pose_file(pose);
  if (doc.layout.n_joints != spec.n_joints) {
    throw CheckpointError("checkpoint expects " + std::to_string(spec.n_joints) +
                          " joints, exam has " + std::to_string(doc.layout.n_joints));
  }
  PreprocessConfig pre = cfg.preprocess;
  pre.window = spec.window;
  pre.sparse_crops = 0;
  if (pre.min_tail > pre.window) pre.min_tail = pre.window / 2;
  const PreparedExam exam = prepare_exam(doc, pre, 0);
  const FoldResult scored = score_exam(ckpt.model, exam);

  ScoreOutcome outcome;
  outcome.subject_id = exam.subject_id;
  outcome.label = scored.predicted;
  outcome.probabilities = scored.exam_probs;
  outcome.n_clips = exam.clips.size();
  return outcome;
}

std::vector<fs::path> cmd_synth(const RunConfig& cfg) {
  const std::uint64_t seed = cfg.require_seed("synth");
  if (cfg.per_class < 0) throw InputError("--per-class must be >= 0");
  if (cfg.frames < 1) throw InputError("--frames must be >= 1");
  const fs::path dir = cfg.out.empty() ? fs::path("synth") : cfg.out;
  fs::create_directories(dir);

  std::vector<fs::path> written;
  const SkeletonLayout layout = SkeletonLayout::smpl24();
  for (int c = 0; c < kNumClasses; ++c) {
    for (int i = 0; i < cfg.per_class; ++i) {
      const std::uint64_t subject_seed =
          splitmix64(seed ^ (static_cast<std::uint64_t>(c) << 32 | static_cast<std::uint64_t>(i)));
      PoseDocument doc;
      doc.layout = layout;
      doc.sequence = synth_gait(c, layout, cfg.frames, subject_seed);
      char name[64];
      std::snprintf(name, sizeof(name), "synth_c%d_%03d", c, i);
      doc.sequence.subject_id = name;
      const fs::path path = dir / (std::string(name) + ".pose");
      write_pose_file(path, doc);
      written.push_back(path);
    }
  }
  log().info("wrote {} synthetic exams to {}", written.size(), dir.string());
  return written;
}

nn::GradcheckReport cmd_gradcheck(const RunConfig& cfg) {
  nn::GradcheckConfig gc;
  if (cfg.seed) gc.seed = *cfg.seed;
  gc.loss = cfg.train.loss;
  gc.mode = cfg.train.loss_mode;
  return nn::gradcheck(gc);
}

namespace {

/// Command-line values; unset options fall back to the config file.
struct Flags {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<int> window, min_tail, epochs, batch, filters, workers, crops;
  std::optional<int> max_age, min_hits, per_class, frames;
  std::optional<double> lambda, alpha, gamma, lr_start, lr_end, crop_fraction, iou_min;
  std::optional<std::string> loss, out, compare_loss, pairing;
};

const std::set<std::string>& config_keys() {
  static const std::set<std::string> keys{
      "seed",   "window", "min_tail", "epochs",   "batch",        "filters",
      "workers", "crops", "max_age",  "min_hits", "per_class",    "frames",
      "lambda", "alpha",  "gamma",    "lr_start", "lr_end",       "crop_fraction",
      "iou_min", "loss",  "out",      "compare_loss", "pairing"};
  return keys;
}

template <typename T>
std::optional<T> resolve(const std::optional<T>& flag, const nlohmann::json& file,
                         const char* key) {
  if (flag) return flag;
  if (file.contains(key)) {
    try {
      return file.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw InputError(std::string("config key '") + key + "' has the wrong type");
    }
  }
  return std::nullopt;
}

RunConfig build_config(const Flags& flags) {
  nlohmann::json file = nlohmann::json::object();
  if (flags.config) {
    std::ifstream in(*flags.config);
    if (!in) throw InputError("cannot open config " + *flags.config);
    try {
      file = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError("config " + *flags.config + ": " + e.what());
    }
    if (!file.is_object()) throw InputError("config must be a JSON object");
    for (const auto& [key, value] : file.items()) {
      if (!config_keys().contains(key)) throw InputError("unknown config key '" + key + "'");
    }
  }

  RunConfig cfg;
  cfg.seed = resolve(flags.seed, file, "seed");
  if (auto v = resolve(flags.window, file, "window")) cfg.preprocess.window = *v;
  if (auto v = resolve(flags.min_tail, file, "min_tail")) {
    cfg.preprocess.min_tail = *v;
  } else {
    cfg.preprocess.min_tail = std::max(1, cfg.preprocess.window / 2);
  }
  if (auto v = resolve(flags.crops, file, "crops")) cfg.preprocess.sparse_crops = *v;
  if (auto v = resolve(flags.crop_fraction, file, "crop_fraction")) cfg.preprocess.crop_fraction = *v;
  if (auto v = resolve(flags.epochs, file, "epochs")) cfg.train.epochs = *v;
  if (auto v = resolve(flags.batch, file, "batch")) cfg.train.batch_size = *v;
  if (auto v = resolve(flags.lr_start, file, "lr_start")) cfg.train.lr_start = *v;
  if (auto v = resolve(flags.lr_end, file, "lr_end")) cfg.train.lr_end = *v;
  if (auto v = resolve(flags.loss, file, "loss")) cfg.train.loss_mode = parse_loss_mode(*v);
  if (auto v = resolve(flags.lambda, file, "lambda")) cfg.train.loss.lambda = *v;
  if (auto v = resolve(flags.alpha, file, "alpha")) cfg.train.loss.alpha = *v;
  if (auto v = resolve(flags.gamma, file, "gamma")) cfg.train.loss.gamma = *v;
  if (auto v = resolve(flags.filters, file, "filters")) cfg.filters = *v;
  if (auto v = resolve(flags.workers, file, "workers")) cfg.workers = *v;
  if (auto v = resolve(flags.out, file, "out")) cfg.out = *v;
  if (auto v = resolve(flags.iou_min, file, "iou_min")) cfg.tracker.iou_min = *v;
  if (auto v = resolve(flags.max_age, file, "max_age")) cfg.tracker.max_age = *v;
  if (auto v = resolve(flags.min_hits, file, "min_hits")) cfg.tracker.min_hits = *v;
  if (auto v = resolve(flags.per_class, file, "per_class")) cfg.per_class = *v;
  if (auto v = resolve(flags.frames, file, "frames")) cfg.frames = *v;
  if (auto v = resolve(flags.compare_loss, file, "compare_loss")) cfg.compare_loss = parse_loss_mode(*v);
  if (auto v = resolve(flags.pairing, file, "pairing")) cfg.pairing = parse_pairing_unit(*v);

  cfg.preprocess.validate();
  cfg.train.validate();
  cfg.tracker.validate();
  if (cfg.filters < 1) throw InputError("--filters must be >= 1");
  if (cfg.workers < 1) throw InputError("--workers must be >= 1");
  return cfg;
}

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON config file (flags override its keys)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "Seed for every random stream");
  cmd->add_option("--out", f.out, "Output path");
}

void add_model(CLI::App* cmd, Flags& f) {
  cmd->add_option("--window", f.window, "Frames per clip (default 200)");
  cmd->add_option("--min-tail", f.min_tail, "Shortest usable remainder (default window/2)");
  cmd->add_option("--filters", f.filters, "Filter size F (default 32)");
}

void add_training(CLI::App* cmd, Flags& f) {
  add_model(cmd, f);
  cmd->add_option("--epochs", f.epochs, "Training epochs (default 600)");
  cmd->add_option("--batch", f.batch, "Mini-batch size (default 64)");
  cmd->add_option("--lr-start", f.lr_start, "Initial learning rate (default 1e-3)");
  cmd->add_option("--lr-end", f.lr_end, "Final learning rate (default 1e-6)");
  cmd->add_option("--crops", f.crops, "Extra crops per sparse-class exam (default 2)");
  cmd->add_option("--crop-fraction", f.crop_fraction, "Crop length as a fraction of the window");
  cmd->add_option("--workers", f.workers, "Parallel folds (evaluate)");
  cmd->add_option("--loss", f.loss, "ce | focal | ordinal | focal+ordinal (default)");
  cmd->add_option("--lambda", f.lambda, "Ordinal weight (default 1.0)");
  cmd->add_option("--alpha", f.alpha, "Focal alpha (default 0.25)");
  cmd->add_option("--gamma", f.gamma, "Focal gamma (default 2)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  init_logging(err);

  CLI::App app{"Gait severity scoring from 3D skeleton sequences"};
  app.require_subcommand(1);
  Flags flags;

  std::string detections;
  auto* track = app.add_subcommand("track", "Track people in a detections file and pick the participant");
  track->add_option("detections", detections, "Detections file")->required()->check(CLI::ExistingFile);
  add_common(track, flags);
  track->add_option("--iou-min", flags.iou_min, "Minimum IoU for a match (default 0.3)");
  track->add_option("--max-age", flags.max_age, "Frames a track survives unmatched (default 5)");
  track->add_option("--min-hits", flags.min_hits, "Matches before a track is reported (default 3)");

  std::vector<std::string> poses;
  auto* train = app.add_subcommand("train", "Train a model on labelled pose files");
  train->add_option("poses", poses, "Pose files")->required()->check(CLI::ExistingFile);
  add_common(train, flags);
  add_training(train, flags);

  auto* evaluate = app.add_subcommand("evaluate", "Leave-one-out evaluation with clip voting");
  evaluate->add_option("poses", poses, "Pose files")->required()->check(CLI::ExistingFile);
  add_common(evaluate, flags);
  add_training(evaluate, flags);
  evaluate->add_option("--compare-loss", flags.compare_loss,
                       "Also evaluate this loss and run a paired Wilcoxon test");
  evaluate->add_option("--pairing", flags.pairing, "Paired unit: prob (default) | correct");

  std::string pose_file, checkpoint;
  auto* score = app.add_subcommand("score", "Score one exam with a trained checkpoint");
  score->add_option("pose", pose_file, "Pose file")->required()->check(CLI::ExistingFile);
  score->add_option("--checkpoint", checkpoint, "Checkpoint file")->required()->check(CLI::ExistingFile);
  add_common(score, flags);
  add_model(score, flags);

  auto* synth = app.add_subcommand("synth", "Write synthetic labelled gait exams");
  add_common(synth, flags);
  synth->add_option("--per-class", flags.per_class, "Exams per class (default 10)");
  synth->add_option("--frames", flags.frames, "Frames per exam (default 300)");

  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference check of the backward pass");
  add_common(gradcheck, flags);
  gradcheck->add_option("--loss", flags.loss, "Loss used for the check");
  gradcheck->add_option("--lambda", flags.lambda, "Ordinal weight");
  gradcheck->add_option("--alpha", flags.alpha, "Focal alpha");
  gradcheck->add_option("--gamma", flags.gamma, "Focal gamma");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    const RunConfig cfg = build_config(flags);
    auto paths = [&] {
      std::vector<fs::path> p;
      for (const auto& s : poses) p.emplace_back(s);
      return p;
    };

    if (track->parsed()) {
      const auto result = cmd_track(detections, cfg);
      out << "participant " << result.participant_id << '\n';
    } else if (train->parsed()) {
      const auto result = cmd_train(paths(), cfg);
      out << "checkpoint " << result.checkpoint.string() << '\n';
    } else if (evaluate->parsed()) {
      const auto result = cmd_evaluate(paths(), cfg);
      write_report_table(out, result.report);
      if (result.comparison) {
        out << "Wilcoxon vs " << result.comparison->baseline << " (" << result.comparison->pairing
            << "): W=" << result.comparison->test.statistic
            << " p=" << result.comparison->test.p_value << '\n';
      }
    } else if (score->parsed()) {
      std::optional<nn::ModelSpec> expected;
      if (flags.filters || flags.window) {
        const nn::Checkpoint peek = nn::load_checkpoint(checkpoint);
        nn::ModelSpec spec = peek.model.spec();
        if (flags.filters) spec.filters = *flags.filters;
        if (flags.window) spec.window = *flags.window;
        expected = spec;
      }
      const auto result = cmd_score(pose_file, checkpoint, cfg, expected);
      out << "subject " << result.subject_id << '\n';
      out << "score " << result.label << '\n';
      out << "probabilities";
      char buf[32];
      for (Eigen::Index c = 0; c < result.probabilities.size(); ++c) {
        std::snprintf(buf, sizeof(buf), " %.6f", result.probabilities[c]);
        out << buf;
      }
      out << '\n';
    } else if (synth->parsed()) {
      const auto files = cmd_synth(cfg);
      out << "wrote " << files.size() << " files\n";
    } else if (gradcheck->parsed()) {
      const auto report = cmd_gradcheck(cfg);
      char buf[160];
      for (const auto& t : report.tensors) {
        std::snprintf(buf, sizeof(buf), "%-24s %6zu  max rel %.3e  max abs %.3e\n", t.name.c_str(),
                      t.count, t.max_rel_error, t.max_abs_error);
        out << buf;
      }
      std::snprintf(buf, sizeof(buf), "%s: max relative error %.3e (tolerance %.0e), %.2fs\n",
                    report.passed ? "PASS" : "FAIL", report.max_rel_error, 1e-4, report.seconds);
      out << buf;
      return report.passed ? 0 : 1;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace gaitscore::cli
