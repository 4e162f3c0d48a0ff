#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gaitscore/tracker.hpp"

namespace gaitscore {

// Detections file: one record per line, `frame_idx, x1, y1, x2, y2, score`.
// Frames without detections are simply absent. Blank lines and lines
// starting with '#' are ignored.
DetectionStream parse_detections(std::istream& in, const std::string& source_name = "<stream>");
DetectionStream read_detections_file(const std::filesystem::path& path);

/// Track file: `frame_idx, x1, y1, x2, y2, score, track_id`, ordered by frame
/// then track id.
void write_tracks(std::ostream& out, const std::vector<Track>& tracks);
void write_tracks_file(const std::filesystem::path& path, const std::vector<Track>& tracks);

}  // namespace gaitscore
