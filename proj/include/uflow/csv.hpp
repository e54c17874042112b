#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

namespace uflow {

// 17 significant digits: doubles round-trip exactly, output is byte-stable.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline uint64_t fnv1a(const std::string& s) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

// CSV with a header row and a trailing '# key=value' metadata block.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::vector<std::string> header)
      : out_(path), header_(std::move(header)) {
    for (size_t i = 0; i < header_.size(); ++i)
      out_ << header_[i] << (i + 1 < header_.size() ? "," : "\n");
  }
  void row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i)
      out_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
  }
  void meta(const std::string& key, const std::string& value) {
    meta_.emplace_back(key, value);
  }
  ~CsvWriter() {
    for (const auto& [k, v] : meta_) out_ << "# " << k << "=" << v << "\n";
  }

 private:
  std::ofstream out_;
  std::vector<std::string> header_;
  std::vector<std::pair<std::string, std::string>> meta_;
};

// Minimal static SVG polyline plot of one or more (x, y) series.
void svg_plot(const std::string& path, const std::string& title,
              const std::vector<std::vector<std::pair<double, double>>>& series,
              const std::vector<std::string>& labels);

}  // namespace uflow
