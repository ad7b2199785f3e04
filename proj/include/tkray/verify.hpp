#pragma once

#include "tkray/report.hpp"
#include "tkray/rwn.hpp"

namespace tkray {

struct VerifyParams {
  int n = 1024;               // polytope cells
  double window_half = 40.0;  // L
  int window_cells = 4096;    // M
  std::uint64_t seed = 20260808;
  int t_count = 33;
  double ray_t_max = 8.0;
};

struct VerifyOutput {
  std::vector<CheckResult> checks;
  Artifacts artifacts;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

std::vector<std::string> verify_suites();

// Run one suite (or "all"); every check id is module.invariant_name and the
// residual is the measured quantity the invariant bounds.
VerifyOutput run_verify(const std::string& suite, const VerifyParams& params);

}  // namespace tkray
