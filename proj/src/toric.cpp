#include "tkray/toric.hpp"

#include <cmath>
#include <sstream>

namespace tkray {

namespace {

double entropy_term(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

Array entropy_symbol(const Grid1D& g) {
  Array v(g.nodes());
  for (int i = 0; i < g.nodes(); ++i) {
    double p = g.node(i);
    v[i] = entropy_term(p) + entropy_term(1.0 - p);
  }
  return v;
}

}  // namespace

std::shared_ptr<const ToricGeometry> ToricGeometry::make_dim1(int n_cells) {
  Grid1D p = unit_polytope_grid(n_cells);
  auto geom = std::shared_ptr<ToricGeometry>(
      new ToricGeometry(1, p, ExtGridFn(p, entropy_symbol(p))));
  return geom;
}

std::shared_ptr<const ToricGeometry> ToricGeometry::make_dim2(int n_cells) {
  Grid1D p = unit_polytope_grid(n_cells);
  auto geom = std::shared_ptr<ToricGeometry>(
      new ToricGeometry(2, p, ExtGridFn(p, entropy_symbol(p))));
  Grid2D g2(p, p, /*simplex=*/true);
  Eigen::ArrayXXd v(p.nodes(), p.nodes());
  v.setConstant(kInf);
  for (int i = 0; i < p.nodes(); ++i)
    for (int j = 0; j < p.nodes(); ++j)
      if (g2.in_mask(i, j)) {
        double a = p.node(i), b = p.node(j);
        v(i, j) = entropy_term(a) + entropy_term(b) + entropy_term(1.0 - a - b);
      }
  geom->polytope2 = g2;
  geom->g0_2 = ExtGridFn2(g2, std::move(v));
  return geom;
}

ToricPotential::ToricPotential(std::shared_ptr<const ToricGeometry> g, ExtGridFn d)
    : geom(std::move(g)), dual(std::move(d)) {
  require(geom != nullptr, "ToricPotential: null geometry");
  require(geom->dim == 1, "ToricPotential: dim-1 ctor on non dim-1 geometry");
  require(dual.grid == geom->polytope, "ToricPotential: dual grid mismatch");
  double scale = std::max(1.0, dual.finite_abs_max());
  require(convexity_defect(dual) <= kTolConvexRel * scale,
          "ToricPotential: dual symbol not convex");
}

ToricPotential::ToricPotential(std::shared_ptr<const ToricGeometry> g, ExtGridFn2 d)
    : geom(std::move(g)),
      dual(geom->polytope, Array::Zero(geom->polytope.nodes())),
      dual2(std::move(d)) {
  require(geom->dim == 2, "ToricPotential: dim-2 ctor on non dim-2 geometry");
}

// --- zoo ---------------------------------------------------------------------

ToricPotential zoo_zero(std::shared_ptr<const ToricGeometry> geom) {
  if (geom->dim == 2) return ToricPotential(geom, *geom->g0_2);
  return ToricPotential(geom, geom->g0);
}

ToricPotential zoo_const(std::shared_ptr<const ToricGeometry> geom, double c) {
  if (geom->dim == 2) {
    Eigen::ArrayXXd v = geom->g0_2->v;
    for (Eigen::Index i = 0; i < v.rows(); ++i)
      for (Eigen::Index j = 0; j < v.cols(); ++j)
        if (v(i, j) < kInf) v(i, j) -= c;
    return ToricPotential(geom, ExtGridFn2(*geom->polytope2, std::move(v)));
  }
  return ToricPotential(geom, shifted_fn(geom->g0, -c));
}

ToricPotential zoo_nu(std::shared_ptr<const ToricGeometry> geom, double nu) {
  require(geom->dim == 1, "zoo_nu: dim 1 only");
  require(nu >= 0.0 && nu < 1.0, "zoo_nu: nu in [0,1)");
  const Grid1D& P = geom->polytope;
  Array v = geom->g0.v;
  for (int i = 0; i < P.nodes(); ++i)
    if (P.node(i) < nu - 1e-12) v[i] = kInf;
  return ToricPotential(geom, ExtGridFn(P, std::move(v)));
}

ToricPotential zoo_einf(std::shared_ptr<const ToricGeometry> geom) {
  require(geom->dim == 1, "zoo_einf: dim 1 only");
  const Grid1D& P = geom->polytope;
  Array v = geom->g0.v;
  for (int i = 0; i < P.nodes(); ++i) {
    double p = P.node(i);
    v[i] = (p > 0.0) ? v[i] + 1.0 / p - 1.0 : kInf;
  }
  return ToricPotential(geom, ExtGridFn(P, std::move(v)));
}

ToricPotential zoo_bump(std::shared_ptr<const ToricGeometry> geom, std::uint64_t seed) {
  require(geom->dim == 1, "zoo_bump: dim 1 only");
  Rng rng(seed);
  // Analytic convex perturbation so the same seed denotes the same potential
  // at every resolution (needed by refinement studies).
  double a = rng.uniform(0.05, 0.35);    // quadratic weight
  double c = rng.uniform(0.2, 0.8);      // quadratic center
  double b = rng.uniform(0.02, 0.15);    // exponential weight
  double s = rng.uniform(-3.0, 3.0);     // exponential rate
  double lin = rng.uniform(-0.15, 0.15); // linear tilt
  double off = rng.uniform(-0.5, 0.5);
  const Grid1D& P = geom->polytope;
  Array v = geom->g0.v;
  for (int i = 0; i < P.nodes(); ++i) {
    double p = P.node(i);
    v[i] += a * (p - c) * (p - c) + b * std::exp(s * (p - c)) + lin * p + off;
  }
  return ToricPotential(geom, ExtGridFn(P, std::move(v)));
}

std::vector<ZooEntry> zoo_catalog() {
  return {
      {"zero", "reference potential (dual = g0)"},
      {"const", "constant potential c (dual = g0 - c); param = c"},
      {"nu", "vertex singularity of Lelong number nu, mass 1 - nu; param = nu"},
      {"einf", "unbounded, zero Lelong number, full mass (dual = g0 + 1/p - 1)"},
      {"bump", "bounded analytic perturbation of the reference; param ignored, seeded"},
  };
}

ToricPotential zoo_make(std::shared_ptr<const ToricGeometry> geom, const std::string& kind,
                        double param, std::uint64_t seed) {
  if (kind == "zero") return zoo_zero(geom);
  if (kind == "const") return zoo_const(geom, param);
  if (kind == "nu") return zoo_nu(geom, param);
  if (kind == "einf") return zoo_einf(geom);
  if (kind == "bump") return zoo_bump(geom, seed);
  throw std::invalid_argument("unknown zoo potential kind: " + kind);
}

// --- operations ----------------------------------------------------------------

PrimalFunction to_primal(const ToricPotential& pot, const Grid1D& window, TailPolicy policy) {
  require(pot.geom->dim == 1, "to_primal: dim 1 only");
  PrimalFunction f = legendre_inv(pot.dual, window);
  if (policy == TailPolicy::strict) {
    const double tol_slope = 1e-4;
    double mism = std::max(f.tail_mismatch_left, f.tail_mismatch_right);
    if (mism > tol_slope) {
      // Estimate the half-width at which an exponentially-resolved tail would
      // match: mismatch ~ e^{-L} for reference-type symbols.
      double hint = std::max(window.hi, -std::log(tol_slope) + window.hi);
      std::ostringstream os;
      os << "to_primal: window too small to resolve tail slopes (mismatch " << mism
         << "); increase the window half-width (>= " << hint
         << " for exponential tails) or use TailPolicy::lenient";
      throw std::invalid_argument(os.str());
    }
  }
  return f;
}

TildeView tilde_view(const ToricPotential& pot, const Grid1D& window) {
  PrimalFunction f = to_primal(pot, window, TailPolicy::lenient);
  PrimalFunction f0 = legendre_inv(pot.geom->g0, window);
  TildeView tv{f.v - f0.v, 0.0, 0.0};
  const ExtGridFn& g = pot.dual;
  const ExtGridFn& g0 = pot.geom->g0;
  tv.left_limit = (g.first_finite == g0.first_finite)
                      ? -(g.v[g.first_finite] - g0.v[g0.first_finite])
                      : -kInf;
  tv.right_limit = (g.last_finite == g0.last_finite)
                       ? -(g.v[g.last_finite] - g0.v[g0.last_finite])
                       : -kInf;
  return tv;
}

ToricPotential toric_max(const ToricPotential& a, const ToricPotential& b) {
  require(a.geom == b.geom, "toric_max: same geometry required");
  if (a.geom->dim == 2) {
    Eigen::ArrayXXd m = a.dual2->v.min(b.dual2->v);
    Envelope2DResult env = convex_envelope_2d(ExtGridFn2(*a.geom->polytope2, std::move(m)));
    return ToricPotential(a.geom, env.fn);
  }
  Array m = min_raw(a.dual.v, b.dual.v);
  return ToricPotential(a.geom, ExtGridFn(a.dual.grid, lower_hull(a.dual.grid, m)));
}

ToricPotential cutoff(const ToricPotential& psi, double l, const ToricPotential& base) {
  require(l >= 0.0, "cutoff: l >= 0");
  require(base.bounded(), "cutoff: base must be bounded");
  return toric_max(shifted(base, -l), psi);
}

ToricPotential shifted(const ToricPotential& pot, double c) {
  if (pot.geom->dim == 2) {
    Eigen::ArrayXXd v = pot.dual2->v;
    for (Eigen::Index i = 0; i < v.rows(); ++i)
      for (Eigen::Index j = 0; j < v.cols(); ++j)
        if (v(i, j) < kInf) v(i, j) -= c;
    return ToricPotential(pot.geom, ExtGridFn2(*pot.geom->polytope2, std::move(v)));
  }
  return ToricPotential(pot.geom, shifted_fn(pot.dual, -c));
}

bool leq(const ToricPotential& a, const ToricPotential& b, double tol) {
  require(a.geom == b.geom, "leq: same geometry required");
  const Array& ga = a.dual.v;
  const Array& gb = b.dual.v;
  for (int i = 0; i < ga.size(); ++i) {
    if (ga[i] == kInf) continue;            // +inf dominates any requirement
    if (gb[i] == kInf) return false;        // would need dual(a) infinite too
    if (ga[i] < gb[i] - tol) return false;
  }
  return true;
}

double sup_dist(const ToricPotential& a, const ToricPotential& b, const Grid1D& window) {
  PrimalFunction fa = to_primal(a, window, TailPolicy::lenient);
  PrimalFunction fb = to_primal(b, window, TailPolicy::lenient);
  return (fa.v - fb.v).abs().maxCoeff();
}

MeasureReport ma_measure(const ToricPotential& pot, const Grid1D& window) {
  if (pot.geom->dim == 2) {
    double mass = ma_mass_2d(pot);
    return MeasureReport{Array(), mass, pot.geom->vol - mass};
  }
  PrimalFunction f = to_primal(pot, window, TailPolicy::lenient);
  double h = window.h();
  Array density = Array::Zero(window.nodes());
  for (int i = 1; i < window.cells; ++i) {
    double second = f.v[i - 1] - 2.0 * f.v[i] + f.v[i + 1];
    density[i] = std::max(0.0, second) / (h * h);
  }
  // Interior kinks sum to (edge slope difference); the corrections below add
  // the tail-to-edge jumps so the total equals the dual-domain width exactly.
  double interior = f.edge_slope_right() - f.edge_slope_left();
  double corr_left = f.edge_slope_left() - f.tails.left;
  double corr_right = f.tails.right - f.edge_slope_right();
  double mass = interior + corr_left + corr_right;
  return MeasureReport{std::move(density), mass, pot.geom->vol - mass};
}

double lelong(const ToricPotential& psi, Vertex v) {
  require(psi.geom->dim == 1, "lelong: dim 1 only");
  return v == Vertex::low ? psi.dual.dom_lo() - 0.0 : 1.0 - psi.dual.dom_hi();
}

double grad_at(const ToricPotential& pot, double x) {
  const ExtGridFn& g = pot.dual;
  double h = g.grid.h();
  int i = g.first_finite;
  // largest node whose left slope is <= x (subgradient containment)
  while (i < g.last_finite && g.v[i + 1] - g.v[i] <= x * h) ++i;
  return g.grid.node(i);
}

double ma_mass_2d(const ToricPotential& pot) {
  require(pot.geom->dim == 2 && pot.dual2.has_value(), "ma_mass_2d: dim 2 only");
  return 2.0 * finite_domain_area(*pot.dual2);
}

}  // namespace tkray
