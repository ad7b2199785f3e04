#include "tkray/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace tkray {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    if (i) out += ',';
    out += t.header[i];
  }
  out += '\n';
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    bool first = true;
    if (!t.labels.empty()) {
      out += t.labels[r];
      first = false;
    }
    for (double x : t.rows[r]) {
      if (!first) out += ',';
      first = false;
      out += format_double(x);
    }
    out += '\n';
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << content;
}

}  // namespace tkray
