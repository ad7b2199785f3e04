#pragma once

#include "tkray/convex2d.hpp"
#include "tkray/legendre.hpp"

#include <memory>
#include <optional>

namespace tkray {

// Torus-invariant dictionary.
//
// Every invariant potential is stored through its Legendre dual ("symbol") on
// the moment polytope P.  Conventions, fixed once for the whole library:
//
//   * log coordinate x = log|z| on the open orbit; the window grid lives in x.
//   * dim 1: P = [0, 1]; the reference symbol is the Bernoulli entropy
//     g0(p) = p log p + (1-p) log(1-p), whose conjugate is the reference
//     primal f0(x) = log(1 + e^x).  Total mass is normalized to vol = 1.
//   * dim 2: P = unit simplex {p + q <= 1} with the analogous entropy symbol;
//     mass-only smoke support.
//   * A potential phi corresponds to the convex primal f = f0 + phi~ with
//     gradient range in P; its symbol is g = f^*.  Order reversal is exact:
//     psi <= phi  <=>  dual(psi) >= dual(phi) pointwise.
//   * The invariant Monge-Ampere measure has primal density f'' dx; its total
//     (non-pluripolar) mass equals the width of dom(dual).  Boundedness of
//     phi is equivalent to dual finite on all of P.
//   * Lelong numbers at the two torus-fixed points are the slope deficits of
//     dom(dual): inf dom at the low vertex, 1 - sup dom at the high vertex
//     (with the x = log|z| normalization).
struct ToricGeometry {
  int dim;
  Grid1D polytope;           // dim 1 grid on [0,1] (also the x-axis grid of dim 2)
  ExtGridFn g0;              // dim-1 reference symbol (entropy), finite on P
  std::optional<Grid2D> polytope2;
  std::optional<ExtGridFn2> g0_2;
  double vol = 1.0;

  static std::shared_ptr<const ToricGeometry> make_dim1(int n_cells);
  static std::shared_ptr<const ToricGeometry> make_dim2(int n_cells);

 private:
  ToricGeometry(int d, Grid1D p, ExtGridFn g) : dim(d), polytope(p), g0(std::move(g)) {}
};

struct ToricPotential {
  std::shared_ptr<const ToricGeometry> geom;
  ExtGridFn dual;  // convex symbol on the polytope grid
  std::optional<ExtGridFn2> dual2;

  ToricPotential(std::shared_ptr<const ToricGeometry> g, ExtGridFn d);
  ToricPotential(std::shared_ptr<const ToricGeometry> g, ExtGridFn2 d);

  bool bounded() const { return geom->dim == 1 ? dual.all_finite() : true; }
};

// --- canonical potential zoo -------------------------------------------------
// ZERO: the reference.  CONST(c): shifted reference.  NU(nu): Lelong number
// nu at the low vertex (dual +inf below nu), not of full mass.  EINF:
// unbounded with zero Lelong number and full mass (dual = g0 + 1/p - 1).
// BUMP(seed): bounded analytic perturbation, resolution-independent.
ToricPotential zoo_zero(std::shared_ptr<const ToricGeometry> geom);
ToricPotential zoo_const(std::shared_ptr<const ToricGeometry> geom, double c);
ToricPotential zoo_nu(std::shared_ptr<const ToricGeometry> geom, double nu);
ToricPotential zoo_einf(std::shared_ptr<const ToricGeometry> geom);
ToricPotential zoo_bump(std::shared_ptr<const ToricGeometry> geom, std::uint64_t seed);

struct ZooEntry {
  std::string name;
  std::string description;
};
std::vector<ZooEntry> zoo_catalog();
ToricPotential zoo_make(std::shared_ptr<const ToricGeometry> geom, const std::string& kind,
                        double param, std::uint64_t seed);

// --- operations ---------------------------------------------------------------

enum class TailPolicy { strict, lenient };

// Evaluation map: the full primal f = conjugate of the symbol on the given
// window, tails taken exactly from the endpoints of dom(dual).  strict policy
// rejects windows too small to resolve the asymptotic slopes (with a
// required-L hint in the message); lenient records the mismatch instead,
// which is what sublevel/asymptote diagnostics on sublinear singularities
// need.
PrimalFunction to_primal(const ToricPotential& pot, const Grid1D& window,
                         TailPolicy policy = TailPolicy::strict);

// Relative values phi~ = f - f0 on the window plus exact tail limits
// (finite number when the tail slopes match the reference's, else -inf).
struct TildeView {
  Array values;
  double left_limit;   // lim_{x->-inf} phi~ (may be -inf)
  double right_limit;  // lim_{x->+inf} phi~ (may be -inf)
  double sup() const {
    double s = values.maxCoeff();
    if (std::isfinite(left_limit)) s = std::max(s, left_limit);
    if (std::isfinite(right_limit)) s = std::max(s, right_limit);
    return s;
  }
  double inf() const {
    double s = values.minCoeff();
    s = std::min(s, left_limit);
    s = std::min(s, right_limit);
    return s;
  }
};
TildeView tilde_view(const ToricPotential& pot, const Grid1D& window);

// Pointwise max of potentials: dual = convex_envelope(min of duals).
ToricPotential toric_max(const ToricPotential& a, const ToricPotential& b);

// Canonical cutoff against a bounded base: max(base - l, psi).
ToricPotential cutoff(const ToricPotential& psi, double l, const ToricPotential& base);

// pot + c
ToricPotential shifted(const ToricPotential& pot, double c);

// a <= b as potentials (dual(a) >= dual(b) up to rounding)
bool leq(const ToricPotential& a, const ToricPotential& b, double tol = 1e-9);

// sup-node |a~ - b~| over the window
double sup_dist(const ToricPotential& a, const ToricPotential& b, const Grid1D& window);

struct MeasureReport {
  Array density;   // second differences / h^2 at interior window nodes
  double mass;     // total mass incl. boundary slope corrections
  double deficit;  // vol - mass
};
MeasureReport ma_measure(const ToricPotential& pot, const Grid1D& window);

enum class Vertex { low, high };
double lelong(const ToricPotential& psi, Vertex v);

// Largest maximizer slope of sup_p (p x - dual(p)); the distribution function
// of the Monge-Ampere measure.  mass((-inf, x]) = grad_at(pot, x) - dom_lo.
double grad_at(const ToricPotential& pot, double x);

// dim-2 smoke: total mass = n! * area(dom(dual2)).
double ma_mass_2d(const ToricPotential& pot);

}  // namespace tkray
