#include "gaitscore/tracker.hpp"

#include <algorithm>
#include <string>

#include "gaitscore/error.hpp"
#include "gaitscore/hungarian.hpp"

namespace gaitscore {

void TrackerConfig::validate() const {
  if (!(iou_min >= 0.0 && iou_min <= 1.0)) throw InputError("iou_min must be in [0, 1]");
  if (max_age < 0) throw InputError("max_age must be >= 0");
  if (min_hits < 1) throw InputError("min_hits must be >= 1");
}

Tracker::Tracker(TrackerConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

void Tracker::step(const std::vector<BoundingBox>& detections) {
  for (const auto& det : detections) {
    if (!det.valid()) {
      throw InputError("invalid detection box in frame " + std::to_string(frame_));
    }
  }

  std::vector<BoundingBox> predicted;
  predicted.reserve(live_.size());
  for (auto& track : live_) {
    track.kalman = kalman_predict(track.kalman, cfg_.noise);
    ++track.age;
    ++track.time_since_update;
    predicted.push_back(track.kalman.to_box());
  }

  std::vector<char> det_used(detections.size(), 0);
  if (!live_.empty() && !detections.empty()) {
    Eigen::MatrixXd cost(live_.size(), detections.size());
    for (std::size_t t = 0; t < live_.size(); ++t) {
      for (std::size_t d = 0; d < detections.size(); ++d) {
        cost(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(d)) =
            -iou(predicted[t], detections[d]);
      }
    }
    for (const auto& [t, d] : hungarian_assign(cost)) {
      if (-cost(t, d) < cfg_.iou_min) continue;
      Track& track = live_[static_cast<std::size_t>(t)];
      const BoundingBox& det = detections[static_cast<std::size_t>(d)];
      track.kalman = kalman_update(track.kalman, det, cfg_.noise);
      track.time_since_update = 0;
      ++track.hits;
      track.history.push_back({frame_, det});
      det_used[static_cast<std::size_t>(d)] = 1;
    }
  }

  for (std::size_t d = 0; d < detections.size(); ++d) {
    if (det_used[d]) continue;
    Track track;
    track.id = next_id_++;
    track.kalman = KalmanBoxState::from_box(detections[d], cfg_.noise);
    track.hits = 1;
    track.history.push_back({frame_, detections[d]});
    live_.push_back(std::move(track));
  }

  auto expired = std::stable_partition(live_.begin(), live_.end(), [&](const Track& t) {
    return t.time_since_update <= cfg_.max_age;
  });
  for (auto it = expired; it != live_.end(); ++it) {
    if (it->hits >= cfg_.min_hits) finished_.push_back(std::move(*it));
  }
  live_.erase(expired, live_.end());
  ++frame_;
}

std::vector<Track> Tracker::confirmed_tracks() const {
  std::vector<Track> out = finished_;
  for (const auto& t : live_) {
    if (t.hits >= cfg_.min_hits) out.push_back(t);
  }
  std::sort(out.begin(), out.end(), [](const Track& a, const Track& b) { return a.id < b.id; });
  return out;
}

std::vector<Track> track_frames(const DetectionStream& detections, const TrackerConfig& cfg) {
  Tracker tracker(cfg);
  for (const auto& frame : detections) tracker.step(frame);
  return tracker.confirmed_tracks();
}

const Track& select_participant(const std::vector<Track>& tracks, std::size_t n_frames) {
  if (tracks.empty()) {
    throw NoParticipantError("no confirmed tracks in " + std::to_string(n_frames) + " frames");
  }
  const Track* best = &tracks.front();
  for (const auto& t : tracks) {
    if (t.history.size() > best->history.size() ||
        (t.history.size() == best->history.size() && t.id < best->id)) {
      best = &t;
    }
  }
  return *best;
}

}  // namespace gaitscore
