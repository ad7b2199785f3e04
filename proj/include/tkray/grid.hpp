#pragma once

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tkray {

using Array = Eigen::ArrayXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Default tolerances used across the library.  Primal-side sup-node
// comparisons are measured in units of the *window* spacing; dual-side mass
// and domain statements in units of the *polytope* spacing.
inline constexpr double kTolConvexRel = 1e-9;   // relative convexity-defect gate
inline constexpr double kTolMonotone = 1e-9;    // monotone-family violation gate
inline constexpr double kTolStabilize = 1e-9;   // envelope C-iteration stabilization
inline constexpr double kTolC = 5e-3;           // |c_psi| threshold for class-E flag
inline constexpr int kConstancyFactor = 5;      // constancy threshold = 5 * window h

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Uniform 1-d grid on [lo, hi] with cells+1 nodes.
struct Grid1D {
  double lo;
  double hi;
  int cells;

  Grid1D(double lo_, double hi_, int cells_) : lo(lo_), hi(hi_), cells(cells_) {
    require(lo < hi, "Grid1D: lo must be < hi");
    require(cells >= 8, "Grid1D: need at least 8 cells");
  }

  int nodes() const { return cells + 1; }
  double h() const { return (hi - lo) / cells; }
  double node(int i) const { return lo + i * h(); }

  Array all_nodes() const {
    Array xs(nodes());
    for (int i = 0; i < nodes(); ++i) xs[i] = node(i);
    return xs;
  }

  // Largest node index with node(i) <= x (clamped to [0, cells]).
  int floor_index(double x) const {
    int i = static_cast<int>(std::floor((x - lo) / h()));
    if (i < 0) i = 0;
    if (i > cells) i = cells;
    return i;
  }

  bool operator==(const Grid1D& o) const {
    return lo == o.lo && hi == o.hi && cells == o.cells;
  }
  bool operator!=(const Grid1D& o) const { return !(*this == o); }
};

inline Grid1D unit_polytope_grid(int n_cells) { return Grid1D(0.0, 1.0, n_cells); }
inline Grid1D log_window(double half_width, int n_cells) {
  return Grid1D(-half_width, half_width, n_cells);
}

// Deterministic splitmix64 generator; used wherever "random" data is needed
// so that runs are reproducible bit-for-bit across platforms.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() {  // in [0, 1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
};

}  // namespace tkray
