#pragma once

#include "tkray/ext_grid_fn.hpp"

namespace tkray {

// Asymptotic slopes of a window function's affine tails.  Both lie in the
// closed slope domain of the represented convex function.
struct SlopeData {
  double left;
  double right;
};

// Convex grid function on a truncated window [-L, L] plus exact affine-tail
// metadata.  The tail line on each side passes through the edge node
// (tail_offset_* chosen so the extension is continuous); the extended
// function is convex, which pins tail slopes to minorize/majorize the edge
// discrete slopes.  tail_mismatch_* records how far the tail slope sits from
// the limiting discrete slope at the window edge (0 for data whose
// asymptotics are fully resolved by the window).
struct PrimalFunction {
  Grid1D window;
  Array v;  // finite everywhere
  SlopeData tails;
  double tail_offset_left;   // tail line: tails.left * x + tail_offset_left
  double tail_offset_right;  // tail line: tails.right * x + tail_offset_right
  double tail_mismatch_left = 0.0;
  double tail_mismatch_right = 0.0;

  PrimalFunction(Grid1D w, Array values, SlopeData t);

  double edge_slope_left() const { return (v[1] - v[0]) / window.h(); }
  double edge_slope_right() const {
    int n = window.cells;
    return (v[n] - v[n - 1]) / window.h();
  }
  // Piecewise-linear evaluation with tail extension.
  double value_at(double x) const;
};

double convexity_defect(const PrimalFunction& f);

// Window grid function with declared affine tails but *no* convexity
// requirement: the obstacle inputs of the psh envelopes.
struct ObstacleFn {
  Grid1D window;
  Array v;  // finite
  SlopeData tails;

  ObstacleFn(Grid1D w, Array values, SlopeData t) : window(w), v(std::move(values)), tails(t) {
    require(static_cast<int>(v.size()) == window.nodes(), "ObstacleFn: size mismatch");
    for (int i = 0; i < v.size(); ++i)
      require(std::isfinite(v[i]), "ObstacleFn: values must be finite");
  }
};

// g(p) = sup_x (p x - f(x)) over the piecewise-affine extension of f
// including its tails, evaluated at the target nodes; +inf exactly outside
// [tails.left, tails.right].  Exact for convex piecewise-affine input, which
// is what makes dual-route oracle agreement sharp.  Rejects input whose
// convexity defect exceeds tol_convex (relative to the value scale).
ExtGridFn legendre(const PrimalFunction& f, const Grid1D& target);
ExtGridFn legendre_brute(const PrimalFunction& f, const Grid1D& target);

// f(x) = sup_{p in dom g} (p x - g(p)); tails set exactly from the endpoints
// of dom(g).
PrimalFunction legendre_inv(const ExtGridFn& g, const Grid1D& window);
PrimalFunction legendre_inv_brute(const ExtGridFn& g, const Grid1D& window);

// Conjugate of a (possibly non-convex) obstacle: equals the conjugate of its
// convex hull; computed hull-first in linear time.
ExtGridFn legendre_obstacle(const ObstacleFn& b, const Grid1D& target);

// Pointwise min of two obstacles over a common window; the tails follow
// whichever side is asymptotically lower.
ObstacleFn min_obstacle(const ObstacleFn& a, const ObstacleFn& b);

ObstacleFn as_obstacle(const PrimalFunction& f);
ObstacleFn shifted_obstacle(const ObstacleFn& b, double c);

}  // namespace tkray
