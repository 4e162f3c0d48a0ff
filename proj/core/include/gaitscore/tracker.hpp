#pragma once

#include <cstddef>
#include <vector>

#include "gaitscore/kalman.hpp"

namespace gaitscore {

struct TrackerConfig {
  double iou_min = 0.3;
  int max_age = 5;
  int min_hits = 3;
  KalmanNoise noise;

  /// Throws InputError when a field is out of range.
  void validate() const;
};

struct TrackObservation {
  std::size_t frame = 0;
  BoundingBox box;

  friend bool operator==(const TrackObservation&, const TrackObservation&) = default;
};

struct Track {
  int id = 0;
  KalmanBoxState kalman;
  int hits = 0;
  int age = 0;
  int time_since_update = 0;
  /// Matched detections in frame order.
  std::vector<TrackObservation> history;
};

/// Per-frame detections; index = frame number.
using DetectionStream = std::vector<std::vector<BoundingBox>>;

/// SORT-style online tracker. One instance per video; not thread-safe.
class Tracker {
 public:
  explicit Tracker(TrackerConfig cfg = {});

  /// Consumes the detections of the next frame.
  void step(const std::vector<BoundingBox>& detections);

  /// Confirmed tracks (hits >= min_hits), live and terminated, sorted by id.
  std::vector<Track> confirmed_tracks() const;
  const std::vector<Track>& live_tracks() const { return live_; }
  std::size_t frames_seen() const { return frame_; }

 private:
  TrackerConfig cfg_;
  std::vector<Track> live_;
  std::vector<Track> finished_;
  std::size_t frame_ = 0;
  int next_id_ = 1;
};

/// Runs a Tracker over a whole stream. An empty stream yields no tracks.
std::vector<Track> track_frames(const DetectionStream& detections, const TrackerConfig& cfg = {});

/// Track with the most history entries; ties go to the smaller id. Throws
/// NoParticipantError for an empty list. n_frames is only used for the
/// error message context and coverage reporting.
const Track& select_participant(const std::vector<Track>& tracks, std::size_t n_frames);

}  // namespace gaitscore
