#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gaitscore/pose.hpp"

namespace gaitscore {

/// An exam as stored on disk: the sequence plus the skeleton layout its
/// header declares.
struct PoseDocument {
  PoseSequence sequence;
  SkeletonLayout layout;
};

// Text pose format, one exam per file:
//
//   # comment
//   fps 30
//   n_joints 24
//   layout hip_left=1 hip_right=2 neck=12
//   subject_id S001
//   label 2                 (optional)
//   end_header
//   x y z x y z ...         (one row per frame, n_joints triples)
//
// Row values may be separated by whitespace and/or commas. NaN and Inf are
// rejected. Errors name the offending line.
PoseDocument parse_pose(std::istream& in, const std::string& source_name = "<stream>");
PoseDocument read_pose_file(const std::filesystem::path& path);

void write_pose(std::ostream& out, const PoseDocument& doc);
/// Writes through a temporary file and renames it into place.
void write_pose_file(const std::filesystem::path& path, const PoseDocument& doc);

/// Shared numeric-row parser: splits on whitespace/commas and rejects
/// non-finite values. Throws InputError mentioning `where`.
std::vector<double> parse_number_row(const std::string& line, const std::string& where);

/// Writes `content_writer` output to `path` atomically (tmp + rename).
template <typename Fn>
void write_atomically(const std::filesystem::path& path, Fn&& content_writer);

}  // namespace gaitscore

#include "gaitscore/detail/atomic_write.hpp"
