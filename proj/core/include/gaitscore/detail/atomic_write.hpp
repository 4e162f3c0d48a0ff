#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>

#include "gaitscore/error.hpp"

namespace gaitscore {

template <typename Fn>
void write_atomically(const std::filesystem::path& path, Fn&& content_writer) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot open " + tmp.string() + " for writing");
    content_writer(out);
    out.flush();
    if (!out) throw InputError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw InputError("cannot move " + tmp.string() + " to " + path.string());
  }
}

}  // namespace gaitscore
