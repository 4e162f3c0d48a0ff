#include "gaitscore/tracker_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <tuple>

#include "gaitscore/error.hpp"
#include "gaitscore/pose_io.hpp"

namespace gaitscore {

DetectionStream parse_detections(std::istream& in, const std::string& source_name) {
  DetectionStream stream;
  std::string line;
  std::size_t line_no = 0;
  std::size_t records = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const std::string where = source_name + ":" + std::to_string(line_no);
    const auto values = parse_number_row(line, where);
    if (values.size() != 6) {
      throw InputError(where + ": expected 6 fields (frame_idx, x1, y1, x2, y2, score), got " +
                       std::to_string(values.size()));
    }
    const double frame = values[0];
    if (frame < 0.0 || frame != std::floor(frame) || frame > 1e9) {
      throw InputError(where + ": frame_idx must be a non-negative integer");
    }
    const BoundingBox box{values[1], values[2], values[3], values[4], values[5]};
    if (!box.valid()) throw InputError(where + ": box needs x2 > x1 and y2 > y1");
    const auto idx = static_cast<std::size_t>(frame);
    if (stream.size() <= idx) stream.resize(idx + 1);
    stream[idx].push_back(box);
    ++records;
  }
  if (records == 0) throw InputError(source_name + ": no detections");
  return stream;
}

DetectionStream read_detections_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open detections file " + path.string());
  return parse_detections(in, path.string());
}

void write_tracks(std::ostream& out, const std::vector<Track>& tracks) {
  std::vector<std::tuple<std::size_t, int, BoundingBox>> rows;
  for (const auto& t : tracks) {
    for (const auto& obs : t.history) rows.emplace_back(obs.frame, t.id, obs.box);
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });
  char buf[256];
  for (const auto& [frame, id, box] : rows) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", frame, box.x1, box.y1,
                  box.x2, box.y2, box.score, id);
    out << buf;
  }
}

void write_tracks_file(const std::filesystem::path& path, const std::vector<Track>& tracks) {
  write_atomically(path, [&](std::ostream& out) { write_tracks(out, tracks); });
}

}  // namespace gaitscore
