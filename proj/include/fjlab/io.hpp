#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "fjlab/errors.hpp"

namespace fjlab::io {

// Shortest representation that round-trips a double through text.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// CSV with '#'-prefixed metadata lines above the header row. All output
// is deterministic: no timestamps, no locale, '.' decimal separator.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& metadata,
            const std::vector<std::string>& header) {
    out_.open(path);
    if (!out_) throw IoError("cannot open " + path.string() + " for writing");
    for (const std::string& line : metadata) out_ << "# " << line << "\n";
    write_row(header);
  }

  void write_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
    if (!out_) throw IoError("write failure");
  }

  void close() {
    out_.close();
    if (!out_) throw IoError("close failure");
  }

 private:
  std::ofstream out_;
};

inline void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failure on " + path.string());
}

}  // namespace fjlab::io
