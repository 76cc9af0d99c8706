#pragma once
// CSV emission and reading with round-trip float formatting.
//
// Every numeric artifact leaves the program through here so all outputs share
// one contract: comma separator, '.' decimal point, LF line endings, one
// header row, doubles printed shortest-round-trip via std::to_chars. Rerunning
// a command with the same config and seed must reproduce files byte for byte.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "growthlab/errors.hpp"

namespace growthlab {

inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, std::string_view what) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw IoError("not a number in " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return v;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path)
      : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw IoError("cannot open for writing: " + path.string());
  }

  template <class... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    (put(first, cells), ...);
    out_ << '\n';
    if (!out_) throw IoError("write failed: " + path_.string());
  }

  // Row with a runtime-determined column count; cells arrive preformatted.
  void row_cells(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
    if (!out_) throw IoError("write failed: " + path_.string());
  }

 private:
  template <class T>
  void put(bool& first, const T& v) {
    if (!first) out_ << ',';
    first = false;
    if constexpr (std::is_floating_point_v<T>) {
      out_ << format_double(v);
    } else if constexpr (std::is_integral_v<T> && std::is_signed_v<T>) {
      out_ << static_cast<long long>(v);
    } else if constexpr (std::is_integral_v<T>) {
      out_ << static_cast<unsigned long long>(v);
    } else {
      out_ << std::string_view(v);
    }
  }

  std::ofstream out_;
  std::filesystem::path path_;
};

// Small whole-file reader used by `report` and `compare`. Cells stay strings;
// convert with parse_double where a column is numeric.
struct CsvFile {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t col(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw IoError("missing CSV column '" + std::string(name) + "'");
  }
};

inline CsvFile read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  CsvFile file;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.empty() || line.back() == ',') cells.push_back("");
    if (first) {
      file.header = std::move(cells);
      first = false;
    } else {
      if (cells.size() != file.header.size()) {
        throw IoError("ragged CSV row in " + path.string());
      }
      file.rows.push_back(std::move(cells));
    }
  }
  if (first) throw IoError("empty CSV file: " + path.string());
  return file;
}

}  // namespace growthlab
