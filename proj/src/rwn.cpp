#include "tkray/rwn.hpp"

#include <cmath>

namespace tkray {

namespace {

constexpr double kDivergenceRate = 1e-9;  // per unit t

}

std::optional<ExtGridFn> ray_legendre_dual(const std::vector<double>& ts,
                                           const std::vector<ExtGridFn>& duals, double tau) {
  require(ts.size() == duals.size() && ts.size() >= 2, "ray_legendre_dual: bad samples");
  const Grid1D& P = duals.front().grid;
  const std::size_t n = ts.size();
  Array out = Array::Constant(P.nodes(), -kInf);
  Array prev_best = Array::Constant(P.nodes(), -kInf);
  std::vector<int> argmax(P.nodes(), 0);
  for (std::size_t k = 0; k < n; ++k) {
    for (int i = 0; i < P.nodes(); ++i) {
      double g = duals[k].v[i];
      if (g == kInf) continue;
      double val = g + ts[k] * tau;
      if (val > out[i]) {
        prev_best[i] = out[i];
        out[i] = val;
        argmax[i] = static_cast<int>(k);
      }
    }
  }
  // divergence marking: sup attained at the last sample and still climbing
  bool any_finite = false;
  double dt_last = ts[n - 1] - ts[n - 2];
  for (int i = 0; i < P.nodes(); ++i) {
    if (out[i] == -kInf) {
      out[i] = kInf;  // never finite along the path
      continue;
    }
    if (argmax[i] == static_cast<int>(n - 1) &&
        out[i] - prev_best[i] > kDivergenceRate * std::max(dt_last, 1e-6)) {
      out[i] = kInf;
      continue;
    }
    any_finite = true;
  }
  if (!any_finite) return std::nullopt;
  return ExtGridFn(P, lower_hull(P, out));
}

ToricPotential ray_legendre(const GeodesicPath& path, double tau) {
  auto d = ray_legendre_dual(path.ts, path.duals, tau);
  require(d.has_value(), "ray_legendre: transform is identically -inf at this tau");
  double scale = std::max(1.0, d->finite_abs_max());
  require(convexity_defect(*d) <= kTolConvexRel * scale,
          "ray_legendre: transform not convex (t-range too short)");
  return ToricPotential(path.geom, *d);
}

ToricPotential ray_legendre(const RayApprox& ray, double tau) {
  return ray_legendre(ray.path, tau);
}

TestCurve test_curve(const ToricPotential& phi, const ToricPotential& psi,
                     const std::vector<double>& taus, const Grid1D& window, int t_count) {
  require(phi.geom == psi.geom && phi.geom->dim == 1, "test_curve: dim-1 pair");
  require(phi.bounded(), "test_curve: phi must be bounded");
  require(leq(psi, phi), "test_curve: psi <= phi required");

  // t-range: a uniform head deep enough for the window oscillation of psi,
  // then a geometric tail reaching the saturation depth of every polytope
  // node (a node at distance p from the vertex saturates only at t ~ 2/p, so
  // full-mass singular classes need depth ~ N).
  double nu = std::max(lelong(psi, Vertex::low), lelong(psi, Vertex::high));
  double t_base = std::max(16.0, 1.25 * nu * window.hi + 8.0);
  int count = std::max(t_count, static_cast<int>(std::ceil(t_base / 0.125)) + 1);
  std::vector<double> ts = uniform_samples(0.0, t_base, count);
  double t_deep = 4.0 * phi.geom->polytope.cells;
  for (double t = t_base * 1.05; t < t_deep; t *= 1.05) ts.push_back(t);
  ts.push_back(t_deep);
  std::vector<ExtGridFn> duals;
  duals.reserve(ts.size());
  for (double t : ts)
    duals.push_back(t <= 1e-15 ? toric_max(phi, psi).dual
                               : cutoff(psi, t, phi).dual);

  TestCurve tc;
  tc.taus = taus;
  tc.c_bound = 1.0;
  for (double tau : taus) tc.duals.push_back(ray_legendre_dual(ts, duals, tau));
  return tc;
}

RwnRay rwn_ray(const ToricPotential& phi, const ToricPotential& psi,
               const std::vector<double>& taus, const std::vector<double>& ts,
               const Grid1D& window, const std::vector<double>& c_schedule) {
  TestCurve raw = test_curve(phi, psi, taus, window);

  // maximize: psi~_tau = P_[gamma*_tau](phi)
  TestCurve maxed;
  maxed.taus = raw.taus;
  maxed.c_bound = raw.c_bound;
  for (std::size_t i = 0; i < raw.taus.size(); ++i) {
    if (!raw.duals[i].has_value()) {
      maxed.duals.push_back(std::nullopt);
      continue;
    }
    ToricPotential elem(phi.geom, *raw.duals[i]);
    EnvelopeResult env = p_bracket(elem, phi, c_schedule, window);
    maxed.duals.push_back(env.result.dual);
  }

  // invert: dual_t = closed hull of inf over tau of (dual(psi~_tau) - t tau)
  const Grid1D& P = phi.geom->polytope;
  std::vector<ExtGridFn> duals;
  duals.reserve(ts.size());
  for (double t : ts) {
    Array m = Array::Constant(P.nodes(), kInf);
    for (std::size_t i = 0; i < maxed.taus.size(); ++i) {
      if (!maxed.duals[i].has_value()) continue;
      const Array& g = maxed.duals[i]->v;
      double shift = -t * maxed.taus[i];
      for (int j = 0; j < P.nodes(); ++j)
        if (g[j] < kInf) m[j] = std::min(m[j], g[j] + shift);
    }
    duals.emplace_back(P, lower_hull(P, m));
  }
  GeodesicPath path = assemble_path(phi.geom, window, ts, std::move(duals));
  std::vector<double> profile = energy_profile(path);
  return RwnRay{phi, psi, std::move(maxed), std::move(path), std::move(profile)};
}

RayDistance compare_rays(const GeodesicPath& a, const GeodesicPath& b) {
  require(a.ts.size() == b.ts.size(), "compare_rays: mismatched sampling");
  for (std::size_t k = 0; k < a.ts.size(); ++k)
    require(std::abs(a.ts[k] - b.ts[k]) <= 1e-12, "compare_rays: mismatched sampling");
  require(a.window == b.window, "compare_rays: mismatched windows");
  double primal = 0.0, dual = 0.0;
  for (std::size_t k = 0; k < a.ts.size(); ++k) {
    primal = std::max(primal, (a.primals[k].v - b.primals[k].v).abs().maxCoeff());
    const Array& ga = a.duals[k].v;
    const Array& gb = b.duals[k].v;
    for (int i = 0; i < ga.size(); ++i)
      if (ga[i] < kInf && gb[i] < kInf) dual = std::max(dual, std::abs(ga[i] - gb[i]));
  }
  return RayDistance{primal, dual};
}

std::vector<double> default_tau_samples(int count, double lo, double hi) {
  return uniform_samples(lo, hi, count);
}

}  // namespace tkray
