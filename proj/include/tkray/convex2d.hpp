#pragma once

#include "tkray/grid.hpp"

#include <Eigen/Dense>

namespace tkray {

// Masked product grid: a box [gx] x [gy] with either the full box or the
// unit-simplex mask {p + q <= 1}.  Supports the dim-2 smoke paths only.
struct Grid2D {
  Grid1D gx;
  Grid1D gy;
  bool simplex_mask;

  Grid2D(Grid1D x, Grid1D y, bool simplex) : gx(x), gy(y), simplex_mask(simplex) {}
  bool in_mask(int i, int j) const {
    if (!simplex_mask) return true;
    return gx.node(i) + gy.node(j) <= 1.0 + 1e-12;
  }
};

struct ExtGridFn2 {
  Grid2D grid;
  Eigen::ArrayXXd v;  // (nx, ny); +inf outside mask or domain

  ExtGridFn2(Grid2D g, Eigen::ArrayXXd values) : grid(g), v(std::move(values)) {
    require(v.rows() == grid.gx.nodes() && v.cols() == grid.gy.nodes(),
            "ExtGridFn2: shape mismatch");
    bool any = false;
    for (Eigen::Index i = 0; i < v.rows(); ++i)
      for (Eigen::Index j = 0; j < v.cols(); ++j) {
        require(!std::isnan(v(i, j)) && v(i, j) != -kInf, "ExtGridFn2: bad value");
        any = any || v(i, j) < kInf;
      }
    require(any, "ExtGridFn2: needs a finite value");
  }
};

// Iterated directional convexification (axis + diagonal sweeps) to a fixed
// point; tolerance 1e-10, iteration cap 10 * max(nx, ny).
struct Envelope2DResult {
  ExtGridFn2 fn;
  int sweeps;
  bool converged;
  double residual;
};
Envelope2DResult convex_envelope_2d(const ExtGridFn2& f);

double convexity_defect_2d(const ExtGridFn2& f);  // worst axis-line defect

// Area of the finite domain (cell counting, half-cells on the simplex
// diagonal), used for dim-2 Monge-Ampere mass.
double finite_domain_area(const ExtGridFn2& f);

}  // namespace tkray
