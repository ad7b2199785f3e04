#pragma once

#include <map>
#include <string>
#include <vector>

namespace tkray {

// Deterministic CSV tables: '.' decimal, ',' separator, LF line endings,
// 17-significant-digit floats.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  // optional leading text column (e.g. check ids); when non-empty it must
  // match rows in length and header[0] names it
  std::vector<std::string> labels;
};

std::string format_double(double x);
std::string to_csv(const Table& t);
void write_file(const std::string& path, const std::string& content);

struct CheckResult {
  std::string id;       // module.invariant_name
  std::string suite;    // module name
  int criterion;        // acceptance criterion index (0 = none)
  double residual;
  double tol;
  bool pass;
  std::string note;
};

// ordered map keyed by output file name (determinism of emission order)
using Artifacts = std::map<std::string, Table>;

}  // namespace tkray
