#pragma once

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace fracurv::detail {

/// Shortest round-trippable decimal form of a double: identical input bits
/// always yield identical bytes, which is what the reproducibility checks
/// compare.
inline std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// RFC-4180 quoting: only fields containing a comma, quote or newline get
/// wrapped, with inner quotes doubled.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
    path_ = path;
  }

  void row(std::initializer_list<std::string> fields) {
    bool first = true;
    for (const std::string& f : fields) {
      if (!first) out_ << ',';
      out_ << csv_field(f);
      first = false;
    }
    out_ << '\n';
  }

  void close() {
    out_.close();
    if (out_.fail()) throw std::runtime_error("write failed for " + path_);
  }

 private:
  std::ofstream out_;
  std::string path_;
};

}  // namespace fracurv::detail
