#pragma once

#include "tkray/grid.hpp"

namespace tkray {

// Extended-real grid function: values are finite or +inf, the finite set is a
// contiguous node block, and at least one node is finite.  +inf participates
// in min/max with the usual absorption; arithmetic that would produce
// inf - inf is a programming error and is rejected at operation boundaries.
struct ExtGridFn {
  Grid1D grid;
  Array v;
  int first_finite = -1;
  int last_finite = -1;

  ExtGridFn(Grid1D g, Array values) : grid(g), v(std::move(values)) {
    require(static_cast<int>(v.size()) == grid.nodes(),
            "ExtGridFn: value count must match grid nodes");
    for (int i = 0; i < v.size(); ++i) {
      double x = v[i];
      require(!std::isnan(x) && x != -kInf, "ExtGridFn: values must be finite or +inf");
      if (x < kInf) {
        if (first_finite < 0) first_finite = i;
        last_finite = i;
      }
    }
    require(first_finite >= 0, "ExtGridFn: needs at least one finite value");
    for (int i = first_finite; i <= last_finite; ++i)
      require(v[i] < kInf, "ExtGridFn: finite set must be contiguous");
  }

  bool all_finite() const { return first_finite == 0 && last_finite == grid.cells; }
  double dom_lo() const { return grid.node(first_finite); }
  double dom_hi() const { return grid.node(last_finite); }
  double dom_width() const { return dom_hi() - dom_lo(); }
  double finite_abs_max() const {
    double m = 0.0;
    for (int i = first_finite; i <= last_finite; ++i) m = std::max(m, std::abs(v[i]));
    return m;
  }
};

// max over interior nodes of max(0, -(second difference)); 0 iff discretely
// convex.  Nodes adjacent to +inf are unconstrained (affine-to-vertical is
// convex).
double convexity_defect(const ExtGridFn& f);

// Largest discretely convex minorant (lower hull of the finite graph points,
// monotone-chain sweep); +inf is preserved outside the finite hull span.
// Idempotent; equals the input when the input is already convex.
ExtGridFn convex_envelope(const ExtGridFn& f);

// Lower hull of the finite entries of `vals` over uniform node positions
// given by `grid`; non-finite gaps between finite entries are filled by the
// hull.  This is the raw kernel behind convex_envelope; it accepts data whose
// finite set is not contiguous (e.g. a pointwise min of two functions with
// disjoint domains).
Array lower_hull(const Grid1D& grid, const Array& vals);

// Pointwise min with +inf absorption (raw array; the result's finite set may
// be non-contiguous until a hull is taken).
Array min_raw(const Array& a, const Array& b);

// Pointwise ops staying in ExtGridFn.
ExtGridFn shifted_fn(const ExtGridFn& f, double c);  // f + c on the finite set

}  // namespace tkray
