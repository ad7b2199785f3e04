#include "tkray/envelopes.hpp"

#include <cmath>
#include <sstream>

namespace tkray {

namespace {

// phi~-space obstacle of a potential: window values of f - f0 with the tails
// of f measured against the reference slopes (0 on the left, 1 on the right).
ObstacleFn tilde_obstacle(const ToricPotential& pot, const Grid1D& window,
                          const PrimalFunction& f0) {
  PrimalFunction f = to_primal(pot, window, TailPolicy::lenient);
  return ObstacleFn(window, f.v - f0.v,
                    SlopeData{f.tails.left - 0.0, f.tails.right - 1.0});
}

}  // namespace

ToricPotential proj(const ObstacleFn& b0, std::shared_ptr<const ToricGeometry> geom) {
  require(geom->dim == 1, "proj: dim 1 only");
  const Grid1D& P = geom->polytope;
  PrimalFunction f0 = legendre_inv(geom->g0, b0.window);
  // total obstacle f0 + b0 with combined tail slopes
  ObstacleFn total(b0.window, f0.v + b0.v,
                   SlopeData{0.0 + b0.tails.left, 1.0 + b0.tails.right});
  require(total.tails.left <= 1.0 && total.tails.right >= 0.0,
          "proj: obstacle admits no potential minorant (slope range misses P)");
  ExtGridFn dual = legendre_obstacle(total, P);
  return ToricPotential(geom, dual);
}

ToricPotential p_pair(const ToricPotential& psi, double c, const ToricPotential& phi,
                      const Grid1D& window) {
  require(psi.geom == phi.geom, "p_pair: same geometry required");
  PrimalFunction f0 = legendre_inv(psi.geom->g0, window);
  ObstacleFn a = shifted_obstacle(tilde_obstacle(psi, window, f0), c);
  ObstacleFn b = tilde_obstacle(phi, window, f0);
  return proj(min_obstacle(a, b), psi.geom);
}

EnvelopeResult p_bracket(const ToricPotential& psi, const ToricPotential& phi,
                         const std::vector<double>& c_schedule, const Grid1D& window) {
  require(psi.geom == phi.geom && psi.geom->dim == 1, "p_bracket: dim-1 pair");
  require(phi.bounded(), "p_bracket: phi must be bounded");
  require(!c_schedule.empty(), "p_bracket: empty schedule");

  // (a) paper-faithful route: P(psi + C, phi) increasing in C, stabilization
  // declared when successive iterates agree to 1e-9 at all dual nodes.
  std::optional<double> stab;
  std::optional<ToricPotential> prev;
  std::optional<ToricPotential> last;
  for (double c : c_schedule) {
    ToricPotential it = p_pair(psi, c, phi, window);
    if (prev.has_value() && !stab.has_value()) {
      const Array& a = prev->dual.v;
      const Array& b = it.dual.v;
      double diff = 0.0;
      for (int i = 0; i < a.size(); ++i) {
        if (a[i] == kInf && b[i] == kInf) continue;
        if (a[i] == kInf || b[i] == kInf) {
          diff = kInf;
          break;
        }
        diff = std::max(diff, std::abs(a[i] - b[i]));
      }
      if (diff <= kTolStabilize) stab = c;
    }
    prev = it;
    last = std::move(it);
  }

  // (b) closed form: dual(phi) on dom(dual(psi)), +inf outside, closed hull.
  Array closed = Array::Constant(psi.geom->polytope.nodes(), kInf);
  for (int i = psi.dual.first_finite; i <= psi.dual.last_finite; ++i)
    closed[i] = phi.dual.v[i];
  ToricPotential closed_pot(psi.geom,
                            ExtGridFn(psi.geom->polytope,
                                      lower_hull(psi.geom->polytope, closed)));

  double gap = sup_dist(closed_pot, *last, window);
  double tol = kConstancyFactor * window.h();
  if (!stab.has_value() && gap > tol) {
    std::ostringstream os;
    os << "p_bracket: no stabilization within the schedule and the two routes disagree"
       << " (gap " << gap << "): inconsistent envelope";
    throw std::runtime_error(os.str());
  }
  return EnvelopeResult{std::move(closed_pot), std::move(*last), c_schedule, stab, gap};
}

ECheckReport e_check(const ToricPotential& psi, const ToricPotential& phi,
                     const Grid1D& window) {
  require(phi.bounded(), "e_check: phi must be bounded");
  EClassReport cls = is_in_E(psi, window, dyadic_schedule(1.0, 64.0));
  if (!cls.consistent)
    throw std::runtime_error("e_check: mass and energy-slope class criteria disagree");
  EnvelopeResult env = p_bracket(psi, phi, dyadic_schedule(1.0, 64.0), window);
  double gap = sup_dist(env.result, phi, window);
  double tol = kConstancyFactor * window.h();
  double nu = std::max(lelong(psi, Vertex::low), lelong(psi, Vertex::high));
  double expected = 0.5 * nu * window.hi;
  bool ok = cls.in_e ? (gap <= tol) : (gap >= expected);
  if (!ok)
    throw std::runtime_error(
        "e_check: envelope gap contradicts the class-E verdict (dictionary bug)");
  return ECheckReport{cls.in_e, gap, ok, expected};
}

double maximality_defect(const ToricPotential& psi, const ToricPotential& phi,
                         const Grid1D& window) {
  require(psi.geom->dim == 1, "maximality_defect: dim 1 only");
  EnvelopeResult env = p_bracket(psi, phi, dyadic_schedule(1.0, 64.0), window);
  PrimalFunction fe = to_primal(env.result, window, TailPolicy::lenient);
  PrimalFunction fp = to_primal(phi, window, TailPolicy::lenient);
  double h = window.h();
  double defect = 0.0;
  for (int i = 1; i < window.cells; ++i) {
    double mass = std::max(0.0, fe.v[i - 1] - 2.0 * fe.v[i] + fe.v[i + 1]) / h;
    defect += std::abs(fe.v[i] - fp.v[i]) * mass;
  }
  // edge lumps
  defect += std::abs(fe.v[0] - fp.v[0]) *
            std::max(0.0, fe.edge_slope_left() - fe.tails.left);
  defect += std::abs(fe.v[window.cells] - fp.v[window.cells]) *
            std::max(0.0, fe.tails.right - fe.edge_slope_right());
  return defect;
}

}  // namespace tkray
