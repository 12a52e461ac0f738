#pragma once

#include <string>
#include <vector>

namespace lambq::cli {

/// 17 significant digits, enough to round-trip a double.
std::string cell(double v);
std::string cell(long long v);
inline std::string cell(int v) { return cell(static_cast<long long>(v)); }
inline std::string cell(long v) { return cell(static_cast<long long>(v)); }
inline std::string cell(const std::string& s) { return s; }
inline std::string cell(const char* s) { return s; }

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  template <typename... T>
  void add(const T&... v) {
    rows.push_back({cell(v)...});
  }
  std::string str() const;
};

/// A file produced by a command. Commands collect all outputs first and write them only once
/// every computation has succeeded, so a failing run leaves the directory untouched.
struct OutputFile {
  std::string name;
  std::string content;
};

void write_outputs(const std::string& dir, const std::vector<OutputFile>& files);

}  // namespace lambq::cli
