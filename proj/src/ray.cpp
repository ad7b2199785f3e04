#include "tkray/ray.hpp"

#include <cmath>

namespace tkray {

RayApprox build_ray(const ToricPotential& phi, const ToricPotential& psi,
                    const std::vector<double>& l_schedule, const std::vector<double>& ts,
                    const Grid1D& window, double gap_tol) {
  require(phi.geom == psi.geom && phi.geom->dim == 1, "build_ray: dim-1 pair");
  require(phi.bounded(), "build_ray: phi must be bounded");
  require(leq(psi, phi), "build_ray: psi <= phi required");
  require(l_schedule.size() >= 2, "build_ray: need at least two schedule entries");
  require(!ts.empty() && ts.front() >= 0.0, "build_ray: t-samples start at 0");

  const Grid1D& P = phi.geom->polytope;
  const Array& gphi = phi.dual.v;

  // subgeodesic extension duals, used for schedule entries with l < t
  std::vector<Array> gamma_t(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k)
    gamma_t[k] = ts[k] <= 1e-15 ? gphi : cutoff(psi, ts[k], phi).dual.v;

  double violation = 0.0;
  double gap = 0.0;
  std::vector<Array> prev_primal(ts.size());
  std::vector<Array> cur_dual(ts.size(), Array());

  for (std::size_t li = 0; li < l_schedule.size(); ++li) {
    double l = l_schedule[li];
    Array gl = cutoff(psi, l, phi).dual.v;
    gap = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
      double t = ts[k];
      Array g;
      if (t <= 1e-15)
        g = gphi;
      else if (l >= t)
        g = gphi + (t / l) * (gl - gphi);
      else
        g = gamma_t[k];
      PrimalFunction f = legendre_inv(ExtGridFn(P, g), window);
      if (li > 0) {
        double inc = (f.v - prev_primal[k]).maxCoeff();
        double dec = (prev_primal[k] - f.v).maxCoeff();
        gap = std::max(gap, inc);
        violation = std::max(violation, dec);
      }
      prev_primal[k] = f.v;
      cur_dual[k] = std::move(g);
    }
  }

  std::vector<ExtGridFn> duals;
  duals.reserve(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k)
    duals.emplace_back(P, lower_hull(P, cur_dual[k]));  // closed hull = usc step

  GeodesicPath path = assemble_path(phi.geom, window, ts, std::move(duals));
  std::vector<double> profile = energy_profile(path);
  RayApprox ray{phi,   psi,       window, ts, l_schedule, std::move(path),
                gap,   violation, gap <= gap_tol,          std::move(profile)};
  return ray;
}

RayEnergyProfile ray_energy_profile(const RayApprox& ray) {
  require(ray.converged, "ray_energy_profile: ray did not converge at its schedule");
  const std::vector<double>& ts = ray.ts;
  const std::vector<double>& am = ray.am_profile;
  double n = static_cast<double>(ts.size());
  double st = 0, sa = 0, stt = 0, sta = 0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    st += ts[k];
    sa += am[k];
    stt += ts[k] * ts[k];
    sta += ts[k] * am[k];
  }
  double denom = n * stt - st * st;
  double slope = (n * sta - st * sa) / denom;
  double intercept = (sa - slope * st) / n;
  double dev = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k)
    dev = std::max(dev, std::abs(am[k] - (intercept + slope * ts[k])));
  return RayEnergyProfile{ts, am, slope, intercept, dev};
}

bool ray_constant(const RayApprox& ray) { return is_constant_path(ray.path); }

MembershipReport membership_check(const RayApprox& ray, const GeodesicPath* competitor) {
  MembershipReport rep{};
  double thresh = kConstancyFactor * ray.window.h();

  // (a) emanation: sup-node distance at the first positive sample bounded by
  // the Lipschitz rate
  PrimalFunction fphi = to_primal(ray.phi, ray.window, TailPolicy::lenient);
  std::size_t k1 = 1;
  while (k1 + 1 < ray.ts.size() && ray.ts[k1] <= 1e-15) ++k1;
  rep.v0_gap = (ray.path.primals[k1].v - fphi.v).abs().maxCoeff();
  double lip = std::max(std::abs(ray.path.M), std::abs(ray.path.m));
  rep.emanates = rep.v0_gap <= (lip + thresh) * ray.ts[k1] + thresh;

  // (b) floor: dual of the last sample <= dual(psi) + tol wherever psi is finite
  {
    const Array& gl = ray.path.duals.back().v;
    const Array& gp = ray.psi.dual.v;
    bool ok = true;
    for (int i = 0; i < gl.size(); ++i)
      if (gp[i] < kInf && gl[i] > gp[i] + thresh) ok = false;
    rep.floor_ok = ok;
  }

  // (c) normalized or constant
  rep.M = ray.path.M;
  rep.m = ray.path.m;
  rep.normalized_ok =
      ray_constant(ray) || (std::abs(rep.M) <= thresh && std::abs(rep.m + 1.0) <= thresh);

  // (d) optional competitor: must itself qualify for R(phi, psi)
  rep.competitor_valid = false;
  rep.below_competitor = true;
  rep.competitor_gap = 0.0;
  if (competitor != nullptr) {
    const GeodesicPath& c = *competitor;
    bool valid = c.ts.size() == ray.ts.size();
    if (valid)
      for (std::size_t k = 0; k < ray.ts.size(); ++k)
        valid = valid && std::abs(c.ts[k] - ray.ts[k]) <= 1e-12;
    if (valid) {
      double c0_gap = (c.primals.front().v - fphi.v).abs().maxCoeff();
      bool normalized = (std::abs(c.M) <= thresh && std::abs(c.m + 1.0) <= thresh) ||
                        is_constant_path(c);
      // floor of the competitor: last sample >= psi
      bool floor_ok = true;
      const Array& gl = c.duals.back().v;
      const Array& gp = ray.psi.dual.v;
      for (int i = 0; i < gl.size(); ++i)
        if (gp[i] < kInf && gl[i] > gp[i] + thresh) floor_ok = false;
      valid = c0_gap <= thresh && normalized && floor_ok;
    }
    rep.competitor_valid = valid;
    if (valid) {
      double worst = -kInf;
      for (std::size_t k = 0; k < ray.ts.size(); ++k)
        worst = std::max(worst,
                         (ray.path.primals[k].v - c.primals[k].v).maxCoeff());
      rep.competitor_gap = worst;
      rep.below_competitor = worst <= thresh;
    }
  }
  return rep;
}

double v_infinity_lelong(const RayApprox& ray) {
  const std::size_t n = ray.ts.size();
  require(n >= 2, "v_infinity_lelong: need two samples");
  const Array& ga = ray.path.duals[n - 1].v;
  const Array& gb = ray.path.duals[n - 2].v;
  double dt = ray.ts[n - 1] - ray.ts[n - 2];
  const Grid1D& P = ray.phi.geom->polytope;
  for (int i = 0; i < ga.size(); ++i) {
    double rate = (ga[i] - gb[i]) / dt;
    if (rate <= 1e-9) return P.node(i);  // first non-divergent node
  }
  return 1.0;
}

}  // namespace tkray
