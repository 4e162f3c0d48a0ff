#pragma once

// Detection streams for the tracker lifecycle checks.

#include <cstddef>
#include <vector>

#include "gaitscore/kalman.hpp"
#include "gaitscore/tracker.hpp"

namespace scenario {

using gaitscore::BoundingBox;
using gaitscore::DetectionStream;

inline DetectionStream stationary(std::size_t frames) {
  return DetectionStream(frames, {BoundingBox{100, 100, 160, 260, 0.9}});
}

/// One stationary box, present for `before` frames, absent for `gap`, then
/// present again for `after`.
inline DetectionStream with_gap(std::size_t before, std::size_t gap, std::size_t after) {
  DetectionStream s = stationary(before);
  s.resize(before + gap);
  for (std::size_t t = 0; t < after; ++t) s.push_back({BoundingBox{100, 100, 160, 260, 0.9}});
  return s;
}

struct Crossing {
  DetectionStream stream;
  std::vector<BoundingBox> a, b;  // ground truth per frame
  std::size_t meet = 0;           // frame where the centres coincide in x
};

/// Two 40x80 boxes moving toward each other at 4 px/frame, vertically offset
/// by 20 px so they overlap heavily while passing. Detection order alternates
/// so list position carries no identity.
inline Crossing crossing() {
  Crossing c;
  const std::size_t frames = 41;
  c.meet = 20;
  for (std::size_t t = 0; t < frames; ++t) {
    const double ax = 4.0 * static_cast<double>(t);
    const double bx = 160.0 - 4.0 * static_cast<double>(t);
    c.a.push_back({ax, 0, ax + 40, 80, 0.9});
    c.b.push_back({bx, 20, bx + 40, 100, 0.8});
    if (t % 2 == 0) {
      c.stream.push_back({c.a.back(), c.b.back()});
    } else {
      c.stream.push_back({c.b.back(), c.a.back()});
    }
  }
  return c;
}

}  // namespace scenario
