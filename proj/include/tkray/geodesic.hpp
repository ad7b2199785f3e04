#pragma once

#include "tkray/energy.hpp"

namespace tkray {

// Weak geodesic segments.  The construction is dual-affine interpolation of
// the endpoint symbols, which makes the energy profile exactly affine in t;
// the independent check is the jointly-convex upper-envelope solve
// (hcma_oracle) on the (t, x) grid.
struct GeodesicPath {
  std::shared_ptr<const ToricGeometry> geom;
  Grid1D window;
  std::vector<double> ts;
  std::vector<ExtGridFn> duals;
  std::vector<PrimalFunction> primals;  // lenient conjugates on `window`
  double m = 0.0;  // inf difference quotient over the full sample range
  double M = 0.0;  // sup difference quotient over the full sample range
};

// Build a path object from per-sample symbols (computes primals and the
// cached quotient statistics).
GeodesicPath assemble_path(std::shared_ptr<const ToricGeometry> geom, const Grid1D& window,
                           std::vector<double> ts, std::vector<ExtGridFn> duals);

std::vector<double> uniform_samples(double a, double b, int count);

GeodesicPath segment(const ToricPotential& phi0, const ToricPotential& phi1,
                     const std::vector<double>& ts, const Grid1D& window);

struct HcmaResult {
  GeodesicPath path;
  bool converged;
  double residual;
  int sweeps;
};
// Perron-style oracle: largest function on the (t, x) grid, jointly convex
// along axis and diagonal stencil lines, matching the endpoint primals at
// t in {0, 1} and chord data on the lateral edges.  Values sweep downward
// monotonically from the chord interpolant; fixed-point tolerance 1e-9,
// cap 200 sweeps.
HcmaResult hcma_oracle(const ToricPotential& phi0, const ToricPotential& phi1, int t_count,
                       const Grid1D& window);

struct DiffQuotients {
  double inf;
  double sup;
};
// Difference quotients (u~_a - u~_b)/(a - b) over window nodes plus the exact
// tail limits from the dual values at the domain endpoints (infinite when the
// tail slopes differ).  a and b must be sample points.
DiffQuotients diff_quotients(const GeodesicPath& path, double a, double b);

bool is_constant_path(const GeodesicPath& path);

// Translation / re-scaling to quotient statistics (M, m) = (0, -1); constant
// paths are returned unchanged, linear non-constant paths are purely
// rescaled to slope of unit size.
GeodesicPath normalize(const GeodesicPath& path);

// max(phi - t, psi); requires psi <= phi.
ToricPotential subgeodesic_gamma(const ToricPotential& phi, const ToricPotential& psi,
                                 double t);

std::vector<double> energy_profile(const GeodesicPath& path);

// max over samples of the deviation of am(t) from its endpoint chord
double max_chord_deviation(const std::vector<double>& ts, const std::vector<double>& am);

}  // namespace tkray
