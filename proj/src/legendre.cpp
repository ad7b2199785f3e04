#include "tkray/legendre.hpp"

namespace tkray {

PrimalFunction::PrimalFunction(Grid1D w, Array values, SlopeData t)
    : window(w), v(std::move(values)), tails(t) {
  require(static_cast<int>(v.size()) == window.nodes(), "PrimalFunction: size mismatch");
  for (int i = 0; i < v.size(); ++i)
    require(std::isfinite(v[i]), "PrimalFunction: values must be finite");
  require(tails.left <= tails.right + 1e-15, "PrimalFunction: tail slopes out of order");

  double scale = std::max(1.0, v.abs().maxCoeff());
  double defect = 0.0;
  for (int i = 1; i < window.cells; ++i) {
    double second = v[i - 1] - 2.0 * v[i] + v[i + 1];
    defect = std::max(defect, -second);
  }
  require(defect <= kTolConvexRel * scale, "PrimalFunction: window values not convex");

  // Convexity of the extended function: tails must not overshoot the edge
  // slopes.  The gap (slope under-resolution at this window) is recorded.
  double sl = edge_slope_left(), sr = edge_slope_right();
  require(tails.left <= sl + kTolConvexRel * scale,
          "PrimalFunction: left tail slope exceeds edge slope");
  require(tails.right >= sr - kTolConvexRel * scale,
          "PrimalFunction: right tail slope below edge slope");
  tail_mismatch_left = std::max(0.0, sl - tails.left);
  tail_mismatch_right = std::max(0.0, tails.right - sr);

  tail_offset_left = v[0] - tails.left * window.node(0);
  tail_offset_right = v[window.cells] - tails.right * window.node(window.cells);
}

double PrimalFunction::value_at(double x) const {
  if (x <= window.lo) return tails.left * x + tail_offset_left;
  if (x >= window.hi) return tails.right * x + tail_offset_right;
  int i = window.floor_index(x);
  if (i >= window.cells) i = window.cells - 1;
  double x0 = window.node(i);
  double lam = (x - x0) / window.h();
  return (1.0 - lam) * v[i] + lam * v[i + 1];
}

double convexity_defect(const PrimalFunction& f) {
  double worst = 0.0;
  for (int i = 1; i < f.window.cells; ++i) {
    double second = f.v[i - 1] - 2.0 * f.v[i] + f.v[i + 1];
    worst = std::max(worst, -second);
  }
  return worst;
}

namespace {

// Shared conjugation kernel: values `v` on nodes i0..i1 of `src` (convex
// there), feasible slope interval [slo, shi]; evaluates sup_x(p x - f(x)) at
// every node of `target`.  Two-pointer over the ascending discrete slopes.
Array conj_kernel(const Grid1D& src, const Array& v, int i0, int i1, double slo, double shi,
                  const Grid1D& target) {
  Array out = Array::Constant(target.nodes(), kInf);
  double h = src.h();
  int j = i0;
  for (int k = 0; k < target.nodes(); ++k) {
    double p = target.node(k);
    if (p < slo || p > shi) continue;
    while (j < i1 && v[j + 1] - v[j] < p * h) ++j;
    out[k] = p * src.node(j) - v[j];
  }
  return out;
}

Array conj_kernel_brute(const Grid1D& src, const Array& v, int i0, int i1, double slo,
                        double shi, const Grid1D& target) {
  Array out = Array::Constant(target.nodes(), kInf);
  for (int k = 0; k < target.nodes(); ++k) {
    double p = target.node(k);
    if (p < slo || p > shi) continue;
    double best = -kInf;
    for (int i = i0; i <= i1; ++i) best = std::max(best, p * src.node(i) - v[i]);
    out[k] = best;
  }
  return out;
}

void check_convex_for_transform(const PrimalFunction& f) {
  double scale = std::max(1.0, f.v.abs().maxCoeff());
  require(convexity_defect(f) <= kTolConvexRel * scale,
          "legendre: input exceeds convexity tolerance (take convex_envelope first)");
}

}  // namespace

ExtGridFn legendre(const PrimalFunction& f, const Grid1D& target) {
  check_convex_for_transform(f);
  return ExtGridFn(target,
                   conj_kernel(f.window, f.v, 0, f.window.cells, f.tails.left, f.tails.right,
                               target));
}

ExtGridFn legendre_brute(const PrimalFunction& f, const Grid1D& target) {
  check_convex_for_transform(f);
  return ExtGridFn(target, conj_kernel_brute(f.window, f.v, 0, f.window.cells, f.tails.left,
                                             f.tails.right, target));
}

PrimalFunction legendre_inv(const ExtGridFn& g, const Grid1D& window) {
  double scale = std::max(1.0, g.finite_abs_max());
  require(convexity_defect(g) <= kTolConvexRel * scale,
          "legendre_inv: dual data not convex on its domain");
  Array vals =
      conj_kernel(g.grid, g.v, g.first_finite, g.last_finite, -kInf, kInf, window);
  return PrimalFunction(window, std::move(vals), SlopeData{g.dom_lo(), g.dom_hi()});
}

PrimalFunction legendre_inv_brute(const ExtGridFn& g, const Grid1D& window) {
  double scale = std::max(1.0, g.finite_abs_max());
  require(convexity_defect(g) <= kTolConvexRel * scale,
          "legendre_inv: dual data not convex on its domain");
  Array vals = conj_kernel_brute(g.grid, g.v, g.first_finite, g.last_finite, -kInf, kInf,
                                 window);
  return PrimalFunction(window, std::move(vals), SlopeData{g.dom_lo(), g.dom_hi()});
}

ExtGridFn legendre_obstacle(const ObstacleFn& b, const Grid1D& target) {
  require(b.tails.left <= b.tails.right,
          "legendre_obstacle: no admissible minorant (tail slopes cross)");
  Array hull = lower_hull(b.window, b.v);
  return ExtGridFn(target, conj_kernel(b.window, hull, 0, b.window.cells, b.tails.left,
                                       b.tails.right, target));
}

ObstacleFn min_obstacle(const ObstacleFn& a, const ObstacleFn& b) {
  require(a.window == b.window, "min_obstacle: windows differ");
  Array vals = a.v.min(b.v);
  // Asymptotically lower branch wins on each side: as x -> -inf the larger
  // slope is lower, as x -> +inf the smaller slope is lower.  Equal slopes
  // compare offsets (edge values stand in, tails being edge-continuous).
  double sl, sr;
  if (a.tails.left != b.tails.left)
    sl = std::max(a.tails.left, b.tails.left);
  else
    sl = a.tails.left;
  if (a.tails.right != b.tails.right)
    sr = std::min(a.tails.right, b.tails.right);
  else
    sr = a.tails.right;
  return ObstacleFn(a.window, std::move(vals), SlopeData{sl, sr});
}

ObstacleFn as_obstacle(const PrimalFunction& f) {
  return ObstacleFn(f.window, f.v, f.tails);
}

ObstacleFn shifted_obstacle(const ObstacleFn& b, double c) {
  return ObstacleFn(b.window, b.v + c, b.tails);
}

}  // namespace tkray
