#include "gaitscore/pose_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "gaitscore/error.hpp"

namespace gaitscore {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

int parse_int(const std::string& text, const std::string& where) {
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw InputError(where + ": expected integer, got '" + text + "'");
  return value;
}

double parse_real(const std::string& text, const std::string& where) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw InputError(where + ": expected number, got '" + text + "'");
  if (!std::isfinite(value)) throw InputError(where + ": non-finite value '" + text + "'");
  return value;
}

std::string format_real(double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

}  // namespace

std::vector<double> parse_number_row(const std::string& line, const std::string& where) {
  std::vector<double> values;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == ',' ||
                               line[i] == '\r')) {
      ++i;
    }
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != ',' &&
           line[j] != '\r') {
      ++j;
    }
    values.push_back(parse_real(line.substr(i, j - i), where));
    i = j;
  }
  return values;
}

PoseDocument parse_pose(std::istream& in, const std::string& source_name) {
  PoseDocument doc;
  bool have_fps = false, have_joints = false, have_layout = false, have_subject = false;
  bool in_body = false;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = source_name + ":" + std::to_string(line_no);
    const std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;

    if (!in_body) {
      std::istringstream fields(text);
      std::string key;
      fields >> key;
      std::string rest;
      std::getline(fields, rest);
      rest = trim(rest);
      if (key == "end_header") {
        if (!have_fps || !have_joints || !have_layout || !have_subject) {
          throw InputError(where + ": header missing one of fps, n_joints, layout, subject_id");
        }
        in_body = true;
      } else if (key == "fps") {
        doc.sequence.fps = parse_real(rest, where);
        if (doc.sequence.fps <= 0.0) throw InputError(where + ": fps must be positive");
        have_fps = true;
      } else if (key == "n_joints") {
        doc.layout.n_joints = parse_int(rest, where);
        have_joints = true;
      } else if (key == "layout") {
        std::istringstream parts(rest);
        std::string part;
        int seen = 0;
        while (parts >> part) {
          const auto eq = part.find('=');
          if (eq == std::string::npos) throw InputError(where + ": layout entries are name=index");
          const std::string name = part.substr(0, eq);
          const int idx = parse_int(part.substr(eq + 1), where);
          if (name == "hip_left") {
            doc.layout.hip_left = idx;
          } else if (name == "hip_right") {
            doc.layout.hip_right = idx;
          } else if (name == "neck") {
            doc.layout.neck = idx;
          } else {
            throw InputError(where + ": unknown layout joint '" + name + "'");
          }
          ++seen;
        }
        if (seen != 3) throw InputError(where + ": layout needs hip_left, hip_right and neck");
        have_layout = true;
      } else if (key == "subject_id") {
        if (rest.empty()) throw InputError(where + ": empty subject_id");
        doc.sequence.subject_id = rest;
        have_subject = true;
      } else if (key == "label") {
        const int label = parse_int(rest, where);
        if (label < 0 || label >= kNumClasses) throw InputError(where + ": label outside 0..3");
        doc.sequence.label = label;
      } else {
        throw InputError(where + ": unknown header field '" + key + "'");
      }
      continue;
    }

    const auto values = parse_number_row(text, where);
    const auto expected = static_cast<std::size_t>(doc.layout.n_joints) * 3;
    if (values.size() != expected) {
      throw InputError(where + ": expected " + std::to_string(expected) + " values, got " +
                       std::to_string(values.size()));
    }
    PoseFrame frame(static_cast<std::size_t>(doc.layout.n_joints));
    for (std::size_t j = 0; j < frame.size(); ++j) {
      frame[j] = Joint3D(values[3 * j], values[3 * j + 1], values[3 * j + 2]);
    }
    doc.sequence.frames.push_back(std::move(frame));
  }

  if (!in_body) throw InputError(source_name + ": missing end_header");
  if (doc.sequence.frames.empty()) throw InputError(source_name + ": no pose rows");
  try {
    doc.layout.validate();
  } catch (const InputError& e) {
    throw InputError(source_name + ": " + e.what());
  }
  return doc;
}

PoseDocument read_pose_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open pose file " + path.string());
  return parse_pose(in, path.string());
}

void write_pose(std::ostream& out, const PoseDocument& doc) {
  const auto& seq = doc.sequence;
  out << "# gaitscore pose v1\n";
  out << "fps " << format_real(seq.fps) << '\n';
  out << "n_joints " << doc.layout.n_joints << '\n';
  out << "layout hip_left=" << doc.layout.hip_left << " hip_right=" << doc.layout.hip_right
      << " neck=" << doc.layout.neck << '\n';
  out << "subject_id " << seq.subject_id << '\n';
  if (seq.label) out << "label " << *seq.label << '\n';
  out << "end_header\n";
  for (const auto& frame : seq.frames) {
    bool first = true;
    for (const auto& j : frame) {
      for (int c = 0; c < 3; ++c) {
        if (!first) out << ' ';
        out << format_real(j[c]);
        first = false;
      }
    }
    out << '\n';
  }
}

void write_pose_file(const std::filesystem::path& path, const PoseDocument& doc) {
  doc.sequence.validate();
  write_atomically(path, [&](std::ostream& out) { write_pose(out, doc); });
}

}  // namespace gaitscore
