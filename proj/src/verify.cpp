#include "tkray/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace tkray {

namespace {

struct Ctx {
  VerifyParams p;
  std::shared_ptr<const ToricGeometry> geom;
  Grid1D window;
  std::vector<double> l_small;   // {1..64}
  std::vector<double> l_big;     // {1..2^20}
  std::vector<double> ray_ts;
  std::map<std::string, RayApprox> ray_cache;

  explicit Ctx(const VerifyParams& params)
      : p(params),
        geom(ToricGeometry::make_dim1(params.n)),
        window(log_window(params.window_half, params.window_cells)),
        l_small(dyadic_schedule(1.0, 64.0)),
        l_big(dyadic_schedule(1.0, 1048576.0)),
        ray_ts(uniform_samples(0.0, params.ray_t_max, params.t_count)) {}

  double hw() const { return window.h(); }
  double hp() const { return geom->polytope.h(); }
  double primal_tol() const { return kConstancyFactor * hw(); }

  ToricPotential zoo(const std::string& kind, double param = 0.0,
                     std::uint64_t salt = 0) const {
    return zoo_make(geom, kind, param, p.seed + salt);
  }

  // shift psi below phi (node-wise dual ordering)
  ToricPotential below(const ToricPotential& psi, const ToricPotential& phi) const {
    double c = 0.0;
    for (int i = psi.dual.first_finite; i <= psi.dual.last_finite; ++i)
      if (phi.dual.v[i] < kInf) c = std::max(c, phi.dual.v[i] - psi.dual.v[i]);
    return shifted(psi, -c);
  }

  const RayApprox& ray_fixture(const std::string& key, const ToricPotential& phi,
                               const ToricPotential& psi) {
    auto it = ray_cache.find(key);
    if (it != ray_cache.end()) return it->second;
    RayApprox ray = build_ray(phi, psi, l_big, ray_ts, window, primal_tol());
    return ray_cache.emplace(key, std::move(ray)).first->second;
  }

  std::map<std::string, RwnRay> rwn_cache;
  const RwnRay& rwn_fixture(const std::string& key, const ToricPotential& phi,
                            const ToricPotential& psi, int tau_count) {
    auto it = rwn_cache.find(key);
    if (it != rwn_cache.end()) return it->second;
    RwnRay r = rwn_ray(phi, psi, default_tau_samples(tau_count), ray_ts, window,
                       dyadic_schedule(1.0, 64.0));
    return rwn_cache.emplace(key, std::move(r)).first->second;
  }
};

struct ZooCase {
  std::string name;
  std::string kind;
  double param;
};

const std::vector<ZooCase>& c_zoo() {
  static const std::vector<ZooCase> z = {{"const", "const", -2.0},
                                         {"nu01", "nu", 0.1},
                                         {"nu03", "nu", 0.3},
                                         {"nu06", "nu", 0.6},
                                         {"einf", "einf", 0.0}};
  return z;
}

CheckResult make_result(const std::string& id, const std::string& suite, int criterion,
                        double residual, double tol, std::string note = "") {
  return CheckResult{id, suite, criterion, residual, tol,
                     residual <= tol && std::isfinite(residual), std::move(note)};
}

// ---------------------------------------------------------------- convex_core

CheckResult check_fast_brute(Ctx& c, Artifacts*) {
  double worst = 0.0;
  for (int k = 0; k < 6; ++k) {
    ToricPotential pot = c.zoo("bump", 0.0, 100 + k);
    PrimalFunction f = to_primal(pot, c.window);
    ExtGridFn fast = legendre(f, c.geom->polytope);
    ExtGridFn brute = legendre_brute(f, c.geom->polytope);
    for (int i = 0; i < fast.v.size(); ++i) {
      if (fast.v[i] == kInf || brute.v[i] == kInf) continue;
      double denom = std::max(1.0, std::abs(brute.v[i]));
      worst = std::max(worst, std::abs(fast.v[i] - brute.v[i]) / denom);
    }
    PrimalFunction g1 = legendre_inv(pot.dual, c.window);
    PrimalFunction g2 = legendre_inv_brute(pot.dual, c.window);
    for (int i = 0; i < g1.v.size(); ++i) {
      double denom = std::max(1.0, std::abs(g2.v[i]));
      worst = std::max(worst, std::abs(g1.v[i] - g2.v[i]) / denom);
    }
  }
  return make_result("convex_core.fast_brute_agreement", "convex_core", 0, worst, 1e-12);
}

CheckResult check_order_reversal(Ctx& c, Artifacts*) {
  double worst = 0.0;
  for (int k = 0; k < 4; ++k) {
    ToricPotential pa = c.zoo("bump", 0.0, 110 + k);
    ToricPotential pb = c.below(c.zoo("bump", 0.0, 114 + k), pa);  // pb <= pa
    PrimalFunction fa = to_primal(pa, c.window);
    PrimalFunction fb = to_primal(pb, c.window);
    worst = std::max(worst, (fb.v - fa.v).maxCoeff());  // pb <= pa on the window
    ExtGridFn ca = legendre(fa, c.geom->polytope);
    ExtGridFn cb = legendre(fb, c.geom->polytope);
    worst = std::max(worst, (ca.v - cb.v).maxCoeff());  // conjugates reversed
  }
  return make_result("convex_core.order_reversal", "convex_core", 0, worst, 1e-10);
}

CheckResult check_involution(Ctx& c, Artifacts*) {
  double worst = 0.0;
  for (int k = 0; k < 4; ++k) {
    ToricPotential pot = c.zoo("bump", 0.0, 120 + k);
    PrimalFunction f = to_primal(pot, c.window);
    PrimalFunction f2 = legendre_inv(legendre(f, c.geom->polytope), c.window);
    worst = std::max(worst, (f.v - f2.v).abs().maxCoeff());
  }
  return make_result("convex_core.involution", "convex_core", 0, worst, 1e-10);
}

CheckResult check_shift_covariance(Ctx& c, Artifacts*) {
  double worst = 0.0;
  ToricPotential pot = c.zoo("bump", 0.0, 130);
  PrimalFunction f = to_primal(pot, c.window);
  ExtGridFn base = legendre(f, c.geom->polytope);
  for (double shift : {-3.0, 1.0, 7.0}) {
    PrimalFunction g(f.window, f.v + shift, f.tails);
    ExtGridFn moved = legendre(g, c.geom->polytope);
    for (int i = 0; i < base.v.size(); ++i) {
      if (base.v[i] == kInf) continue;
      worst = std::max(worst, std::abs(moved.v[i] - (base.v[i] - shift)));
    }
  }
  return make_result("convex_core.shift_covariance", "convex_core", 0, worst, 1e-12);
}

CheckResult check_envelope_dominance(Ctx& c, Artifacts*) {
  double worst = 0.0;
  Rng rng(c.p.seed + 300);
  const Grid1D& P = c.geom->polytope;
  for (int k = 0; k < 5; ++k) {
    Array v(P.nodes());
    for (int i = 0; i < P.nodes(); ++i) v[i] = rng.uniform(-1.0, 1.0);
    ExtGridFn raw(P, v);
    ExtGridFn env = convex_envelope(raw);
    worst = std::max(worst, (env.v - raw.v).maxCoeff());      // env <= input
    worst = std::max(worst, convexity_defect(env));           // convex output
    ExtGridFn env2 = convex_envelope(env);
    worst = std::max(worst, (env.v - env2.v).abs().maxCoeff());  // idempotent
  }
  return make_result("convex_core.envelope_dominance", "convex_core", 0, worst, 1e-12);
}

// --------------------------------------------------------------------- toric

CheckResult check_toric_order(Ctx& c, Artifacts*) {
  double worst = 0.0;
  ToricPotential phi = c.zoo("bump", 0.0, 140);
  ToricPotential lower = shifted(phi, -2.0);
  if (!leq(lower, phi) || leq(phi, lower)) worst = 1.0;
  TildeView a = tilde_view(lower, c.window);
  TildeView b = tilde_view(phi, c.window);
  worst = std::max(worst, (a.values - b.values).maxCoeff());  // lower~ <= phi~
  return make_result("toric.order_reversal", "toric", 0, worst, 1e-10);
}

CheckResult check_toric_max_oracle(Ctx& c, Artifacts*) {
  double worst = 0.0;
  ToricPotential phi = shifted(c.zoo("bump", 0.0, 150), -3.0);
  ToricPotential psi = c.zoo("nu", 0.35);
  ToricPotential mx = toric_max(phi, psi);
  // primal-side oracle: pointwise max of the primals, re-encoded
  PrimalFunction fa = to_primal(phi, c.window, TailPolicy::lenient);
  PrimalFunction fb = to_primal(psi, c.window, TailPolicy::lenient);
  Array pm = fa.v.max(fb.v);
  SlopeData tails{std::min(fa.tails.left, fb.tails.left),
                  std::max(fa.tails.right, fb.tails.right)};
  ExtGridFn dual_oracle =
      legendre_obstacle(ObstacleFn(c.window, pm, tails), c.geom->polytope);
  ToricPotential oracle(c.geom, dual_oracle);
  worst = sup_dist(mx, oracle, c.window);
  // associativity / commutativity, node-exact
  ToricPotential other = c.zoo("const", -1.0);
  ToricPotential ab = toric_max(toric_max(phi, psi), other);
  ToricPotential ba = toric_max(phi, toric_max(psi, other));
  for (int i = 0; i < ab.dual.v.size(); ++i) {
    if (ab.dual.v[i] == kInf && ba.dual.v[i] == kInf) continue;
    worst = std::max(worst, std::abs(ab.dual.v[i] - ba.dual.v[i]));
  }
  double tol = 2.0 * c.hw();
  return make_result("toric.max_oracle", "toric", 0, worst, tol);
}

CheckResult check_cutoff_monotone(Ctx& c, Artifacts*) {
  double worst = 0.0;
  ToricPotential psi = c.zoo("nu", 0.3);
  ToricPotential base = c.zoo("zero");
  PrimalFunction fpsi = to_primal(psi, c.window, TailPolicy::lenient);
  Array prev;
  for (double l : c.l_small) {
    ToricPotential gl = cutoff(psi, l, base);
    PrimalFunction f = to_primal(gl, c.window, TailPolicy::lenient);
    if (prev.size()) worst = std::max(worst, (f.v - prev).maxCoeff());  // decreasing in l
    worst = std::max(worst, (fpsi.v - f.v).maxCoeff());                 // >= psi
    prev = f.v;
  }
  // convergence down to psi on the window
  worst = std::max(worst, (prev - fpsi.v).abs().maxCoeff());
  return make_result("toric.cutoff_monotone", "toric", 0, worst, 1e-9);
}

CheckResult check_mass_dom(Ctx& c, Artifacts*) {
  double worst = 0.0;
  for (const ZooCase& z : c_zoo()) {
    ToricPotential pot = c.zoo(z.kind, z.param);
    MeasureReport mr = ma_measure(pot, c.window);
    worst = std::max(worst, std::abs(mr.mass - pot.dual.dom_width()));
    if (pot.bounded()) worst = std::max(worst, std::abs(mr.mass - c.geom->vol));
  }
  return make_result("toric.mass_dom_width", "toric", 0, worst, c.hp() * (1 + 1e-9));
}

CheckResult check_lelong(Ctx& c, Artifacts*) {
  double worst = 0.0;
  ToricPotential psi = c.zoo("nu", 0.3);
  double nu = lelong(psi, Vertex::low);
  worst = std::max(worst, std::abs(nu - 0.3) - c.hp());  // node rounding allowance
  worst = std::max(worst, std::abs(lelong(psi, Vertex::high)));
  // class invariance: a deeper singularity at any shift never raises it
  for (double C : {5.0, 20.0}) {
    ToricPotential pert = toric_max(shifted(psi, -C), shifted(c.zoo("nu", 0.6), -1.0));
    worst = std::max(worst, std::abs(lelong(pert, Vertex::low) - nu));
  }
  // a bounded floor zeroes the Lelong number but the window asymptote still
  // fits nu while the floor sits beyond the window
  ToricPotential floored = toric_max(psi, c.zoo("const", -25.0));
  worst = std::max(worst, std::abs(lelong(floored, Vertex::low)));
  PrimalFunction f = to_primal(floored, c.window, TailPolicy::lenient);
  double fit = (f.v[20] - f.v[4]) / (c.window.node(20) - c.window.node(4));
  worst = std::max(worst, std::abs(fit - nu) - 2 * c.hw());
  worst = std::max(worst, std::abs(lelong(c.zoo("einf"), Vertex::low)) - c.hp());
  return make_result("toric.lelong_invariance", "toric", 0, std::max(0.0, worst), 1e-12);
}

// -------------------------------------------------------------------- energy

CheckResult check_shift_rule(Ctx& c, Artifacts*) {
  double worst = 0.0;
  for (int k = 0; k < 3; ++k) {
    ToricPotential pot = c.zoo("bump", 0.0, 160 + k);
    double a0 = am(pot);
    for (double s : {-3.0, 1.0, 7.0})
      worst = std::max(worst, std::abs(am(shifted(pot, s)) - a0 - s));
  }
  return make_result("energy.shift_rule", "energy", 0, worst, 1e-9);
}

CheckResult check_energy_monotone(Ctx& c, Artifacts*) {
  double worst = 0.0;
  for (int k = 0; k < 4; ++k) {
    ToricPotential phi = c.zoo("bump", 0.0, 170 + k);
    ToricPotential lower = c.below(c.zoo("bump", 0.0, 180 + k), phi);
    worst = std::max(worst, am(lower) - am(phi));
  }
  return make_result("energy.monotonicity", "energy", 0, worst, 1e-10);
}

CheckResult check_strict_domination(Ctx& c, Artifacts*) {
  // ordered pairs with a definite gap must separate in energy; equal-energy
  // ordered pairs must be equal at window scale
  double worst = 0.0;
  for (int k = 0; k < 3; ++k) {
    ToricPotential phi = c.zoo("bump", 0.0, 190 + k);
    ToricPotential lower = shifted(c.below(c.zoo("bump", 0.0, 195 + k), phi), -0.1);
    double gap = am(phi) - am(lower);
    if (gap < 1e-6) worst = std::max(worst, 1e-6 - gap);
    if (gap <= 1e-9) {
      double sd = sup_dist(phi, lower, c.window);
      if (sd > c.primal_tol()) worst = std::max(worst, sd);
    }
  }
  return make_result("energy.strict_domination", "energy", 0, worst, 1e-12);
}

CheckResult check_energy_two_path(Ctx& c, Artifacts*) {
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    ToricPotential pot = c.zoo("bump", 0.0, 200 + k);
    worst = std::max(worst, std::abs(am(pot) - am_mixed(pot, c.window).value));
  }
  return make_result("energy.two_path", "energy", 0, worst, 5e-3);
}

CheckResult check_difference_form(Ctx& c, Artifacts*) {
  double worst = 0.0;
  for (int k = 0; k < 5; ++k) {
    ToricPotential u = c.zoo("bump", 0.0, 220 + k);
    ToricPotential v = c.zoo("bump", 0.0, 230 + k);
    worst = std::max(worst,
                     std::abs((am(u) - am(v)) - am_difference_form(u, v, c.window)));
  }
  return make_result("energy.difference_form", "energy", 0, worst, 5e-3);
}

CheckResult check_nonpositive_bounds(Ctx& c, Artifacts*) {
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    ToricPotential pot = c.zoo("bump", 0.0, 240 + k);
    TildeView tv = tilde_view(pot, c.window);
    ToricPotential neg = shifted(pot, -tv.sup());
    AmBounds b = am_bounds_check(neg, c.window);
    if (!b.ok) worst = std::max(worst, std::max(b.lhs - b.mid, b.mid - b.rhs));
  }
  return make_result("energy.nonpositive_bounds", "energy", 4, worst, 1e-12);
}

CheckResult check_c_two_path(Ctx& c, Artifacts* art) {
  double worst = 0.0;
  std::string note;
  ToricPotential base = c.zoo("zero");
  ToricPotential bump_base = c.zoo("bump", 0.0, 250);
  for (const ZooCase& z : c_zoo()) {
    ToricPotential psi = c.below(c.zoo(z.kind, z.param), base);
    EnergyReport rep = c_both(psi, base, c.l_small, c.window);
    double cs = *rep.c_energy_slope;
    double cm = *rep.c_mass_deficit;
    worst = std::max(worst, std::abs(cs - cm) - 1e-2);
    if (z.kind == "nu") worst = std::max(worst, std::abs(cs + z.param / 2.0) - 1e-2);
    if (z.kind == "einf") worst = std::max(worst, std::abs(cs) - 1e-3);
    if (z.kind == "const") worst = std::max(worst, std::abs(cs) - 1e-6);
    // base independence
    EnergyReport alt = c_of(psi, CMethod::energy_slope, c.below(bump_base, base),
                            c.l_small, c.window);
    worst = std::max(worst, std::abs(cs - *alt.c_energy_slope) - 2e-3);
    if (z.name == "nu03" && art != nullptr) {
      Table t;
      t.header = {"l", "am_over_l", "mass_deficit_c"};
      for (const auto& row : rep.per_l) t.rows.push_back({row[0], row[1], row[2]});
      (*art)["c_study.csv"] = std::move(t);
    }
  }
  return make_result("energy.c_two_path", "energy", 5, std::max(0.0, worst), 1e-12);
}

CheckResult check_c_sequence_shape(Ctx& c, Artifacts*) {
  // the cutoff energy l -> am(gamma_l) is convex and decreasing; its mean
  // slopes (the reported ratios) sit in [-1, 0] and increase to the limit
  double worst = 0.0;
  ToricPotential base = c.zoo("zero");
  for (const std::string kind : {std::string("nu"), std::string("einf")}) {
    ToricPotential psi = kind == "nu" ? c.zoo("nu", 0.3) : c.zoo("einf");
    EnergyReport rep = c_of(psi, CMethod::energy_slope, base, c.l_small, c.window);
    std::vector<double> ams;
    for (const auto& row : rep.per_l) ams.push_back(row[1] * row[0]);
    for (std::size_t k = 1; k < ams.size(); ++k)
      worst = std::max(worst, ams[k] - ams[k - 1]);  // decreasing
    for (std::size_t k = 2; k < ams.size(); ++k) {
      double l0 = rep.per_l[k - 2][0], l1 = rep.per_l[k - 1][0], l2 = rep.per_l[k][0];
      double lam = (l1 - l0) / (l2 - l0);
      worst = std::max(worst, ams[k - 1] - ((1 - lam) * ams[k - 2] + lam * ams[k]));
    }
    for (std::size_t k = 0; k < rep.per_l.size(); ++k) {
      worst = std::max(worst, rep.per_l[k][1]);           // ratio <= 0
      worst = std::max(worst, -1.0 - rep.per_l[k][1]);    // ratio >= -1
      if (k) worst = std::max(worst, rep.per_l[k - 1][1] - rep.per_l[k][1]);
    }
  }
  return make_result("energy.c_sequence_shape", "energy", 0, worst, 1e-9);
}

CheckResult check_class_flags(Ctx& c, Artifacts*) {
  double worst = 0.0;
  auto expect = [&](const ToricPotential& psi, bool in_e) {
    EClassReport r = is_in_E(psi, c.window, c.l_small);
    if (r.in_e != in_e || !r.consistent) worst = 1.0;
  };
  expect(c.zoo("zero"), true);
  expect(c.zoo("const", -5.0), true);
  expect(c.zoo("nu", 0.3), false);
  expect(c.zoo("einf"), true);
  return make_result("energy.class_flags", "energy", 0, worst, 0.5);
}

// ----------------------------------------------------------------- geodesics

CheckResult check_energy_affinity(Ctx& c, Artifacts* art) {
  double worst = 0.0;
  std::vector<double> ts = uniform_samples(0.0, 1.0, c.p.t_count);
  for (int k = 0; k < 20; ++k) {
    ToricPotential a = c.zoo("bump", 0.0, 300 + 2 * k);
    ToricPotential b = c.zoo("bump", 0.0, 301 + 2 * k);
    GeodesicPath path = segment(a, b, ts, c.window);
    std::vector<double> prof = energy_profile(path);
    double dev = max_chord_deviation(ts, prof);
    worst = std::max(worst, dev);
    if (k == 0 && art != nullptr) {
      Table t;
      t.header = {"t", "am", "am_chord_dev"};
      for (std::size_t j = 0; j < ts.size(); ++j) {
        double lam = (ts[j] - ts.front()) / (ts.back() - ts.front());
        double chord = (1 - lam) * prof.front() + lam * prof.back();
        t.rows.push_back({ts[j], prof[j], prof[j] - chord});
      }
      (*art)["energy_profile.csv"] = std::move(t);
    }
  }
  return make_result("geodesics.energy_affinity", "geodesics", 1, worst, 5e-3);
}

CheckResult check_oracle_agreement(Ctx& c, Artifacts*) {
  std::vector<double> errs;
  std::vector<double> hs;
  for (int k = 0; k < 3; ++k) {
    int n = 256 << k;
    auto geom = ToricGeometry::make_dim1(n);
    Grid1D window = log_window(20.0, n);
    int t_count = (16 << k) + 1;
    ToricPotential a = zoo_make(geom, "bump", 0.0, c.p.seed + 310);
    ToricPotential b = zoo_make(geom, "bump", 0.0, c.p.seed + 311);
    HcmaResult hr = hcma_oracle(a, b, t_count, window);
    GeodesicPath exact = segment(a, b, hr.path.ts, window);
    double err = 0.0;
    for (std::size_t j = 0; j < hr.path.ts.size(); ++j)
      err = std::max(err,
                     (hr.path.primals[j].v - exact.primals[j].v).abs().maxCoeff());
    errs.push_back(err);
    hs.push_back(window.h());
  }
  double r1 = errs[0] / errs[1];
  double r2 = errs[1] / errs[2];
  bool ok = errs[2] <= 10.0 * hs[2] && r1 >= 1.7 && r2 >= 1.7;
  std::string note = "errs=" + format_double(errs[0]) + "," + format_double(errs[1]) +
                     "," + format_double(errs[2]) + " ratios=" + format_double(r1) + "," +
                     format_double(r2);
  return CheckResult{"geodesics.oracle_agreement", "geodesics", 2,
                     ok ? 0.0 : std::min(r1, r2), ok ? 1.0 : 0.0, ok, note};
}

// quotient invariance + Lipschitz over one path; returns worst violation
double quotient_spread_violation(const GeodesicPath& path, double tol, Table* table) {
  double inf_lo = kInf, inf_hi = -kInf, sup_lo = kInf, sup_hi = -kInf;
  double worst = 0.0;
  for (std::size_t ia = 0; ia < path.ts.size(); ++ia)
    for (std::size_t ib = ia + 1; ib < path.ts.size(); ++ib) {
      DiffQuotients q = diff_quotients(path, path.ts[ib], path.ts[ia]);
      inf_lo = std::min(inf_lo, q.inf);
      inf_hi = std::max(inf_hi, q.inf);
      sup_lo = std::min(sup_lo, q.sup);
      sup_hi = std::max(sup_hi, q.sup);
      if (table != nullptr)
        table->rows.push_back({path.ts[ib], path.ts[ia], q.inf, q.sup});
    }
  worst = std::max(worst, (inf_hi - inf_lo) - tol);
  worst = std::max(worst, (sup_hi - sup_lo) - tol);
  // Lipschitz with the cached full-range constants
  double lip = std::max(std::abs(path.M), std::abs(path.m)) + tol;
  for (std::size_t ia = 0; ia < path.ts.size(); ++ia)
    for (std::size_t ib = ia + 1; ib < path.ts.size(); ++ib) {
      double bound = lip * (path.ts[ib] - path.ts[ia]);
      double d = (path.primals[ib].v - path.primals[ia].v).abs().maxCoeff();
      worst = std::max(worst, d - bound);
    }
  return worst;
}

CheckResult check_quotient_invariance(Ctx& c, Artifacts* art) {
  double worst = 0.0;
  std::vector<double> ts = uniform_samples(0.0, 1.0, c.p.t_count);
  for (int k = 0; k < 3; ++k) {
    ToricPotential a = c.zoo("bump", 0.0, 320 + 2 * k);
    ToricPotential b = c.zoo("bump", 0.0, 321 + 2 * k);
    GeodesicPath path = segment(a, b, ts, c.window);
    Table* tp = nullptr;
    Table t;
    if (k == 0 && art != nullptr) {
      t.header = {"a", "b", "inf_q", "sup_q"};
      tp = &t;
    }
    worst = std::max(worst, quotient_spread_violation(path, c.primal_tol(), tp));
    if (tp != nullptr) (*art)["quotients.csv"] = std::move(t);
  }
  // rays too
  ToricPotential phi = c.zoo("zero");
  for (const std::string name : {std::string("nu03"), std::string("einf")}) {
    const ZooCase* z = nullptr;
    for (const auto& zc : c_zoo())
      if (zc.name == name) z = &zc;
    ToricPotential psi = c.below(c.zoo(z->kind, z->param), phi);
    const RayApprox& ray = c.ray_fixture(name, phi, psi);
    worst = std::max(worst, quotient_spread_violation(ray.path, c.primal_tol(), nullptr));
  }
  return make_result("geodesics.quotient_invariance", "geodesics", 3,
                     std::max(0.0, worst), 1e-12);
}

CheckResult check_endpoint_derivative(Ctx& c, Artifacts*) {
  ToricPotential a = c.zoo("bump", 0.0, 330);
  ToricPotential b = c.zoo("bump", 0.0, 331);
  std::vector<double> ts = {0.0, 0.01, 0.02, 0.98, 0.99, 1.0};
  GeodesicPath path = segment(a, b, ts, c.window);
  GeodesicPath full = segment(a, b, {0.0, 1.0}, c.window);
  DiffQuotients whole = diff_quotients(full, 1.0, 0.0);
  double q1 = diff_quotients(path, 0.01, 0.0).inf;
  double q2 = diff_quotients(path, 0.02, 0.0).inf;
  double inf_extrap = 2.0 * q1 - q2;
  double s1 = diff_quotients(path, 1.0, 0.99).sup;
  double s2 = diff_quotients(path, 1.0, 0.98).sup;
  double sup_extrap = 2.0 * s1 - s2;
  double worst = std::max(std::abs(inf_extrap - whole.inf), std::abs(sup_extrap - whole.sup));
  return make_result("geodesics.endpoint_derivative", "geodesics", 0, worst,
                     c.primal_tol());
}

CheckResult check_interval_monotonicity(Ctx& c, Artifacts*) {
  ToricPotential p0 = c.zoo("bump", 0.0, 340);
  ToricPotential p1 = c.zoo("bump", 0.0, 341);
  std::vector<double> ts = uniform_samples(0.0, 1.0, c.p.t_count);
  GeodesicPath path = segment(p0, p1, ts, c.window);
  double a = ts[4], b = ts[16], cc = ts[28];
  double worst = 0.0;
  worst = std::max(worst, diff_quotients(path, cc, a).inf -
                              diff_quotients(path, cc, b).inf);  // (iii)
  worst = std::max(worst, diff_quotients(path, b, a).sup -
                              diff_quotients(path, cc, a).sup);  // (iv)
  return make_result("geodesics.interval_monotonicity", "geodesics", 0,
                     std::max(0.0, worst), c.primal_tol());
}

CheckResult check_restriction(Ctx& c, Artifacts*) {
  ToricPotential p0 = c.zoo("bump", 0.0, 350);
  ToricPotential p1 = c.zoo("bump", 0.0, 351);
  std::vector<double> ts = uniform_samples(0.0, 1.0, 17);
  GeodesicPath path = segment(p0, p1, ts, c.window);
  // re-run on the interior pair (ts[4], ts[12]) and compare interior samples
  ToricPotential ua(c.geom, path.duals[4]);
  ToricPotential ub(c.geom, path.duals[12]);
  std::vector<double> sub = uniform_samples(0.0, 1.0, 9);  // maps onto ts[4..12]
  GeodesicPath inner = segment(ua, ub, sub, c.window);
  double worst = 0.0;
  for (int j = 0; j <= 8; ++j)
    worst = std::max(worst, (inner.primals[j].v - path.primals[4 + j].v).abs().maxCoeff());
  return make_result("geodesics.restriction", "geodesics", 0, worst, 1e-9);
}

CheckResult check_normalization(Ctx& c, Artifacts*) {
  double worst = 0.0;
  std::vector<double> ts = uniform_samples(0.0, 1.0, c.p.t_count);
  ToricPotential p0 = c.zoo("bump", 0.0, 360);
  // widen the second endpoint so the quotient spread clears the resolution
  Array wide = 3.0 * c.zoo("bump", 0.0, 361).dual.v - 2.0 * c.geom->g0.v;
  ToricPotential p1 =
      shifted(ToricPotential(c.geom, ExtGridFn(c.geom->polytope, wide)), -1.5);
  GeodesicPath norm = normalize(segment(p0, p1, ts, c.window));
  worst = std::max(worst, std::abs(norm.M));
  worst = std::max(worst, std::abs(norm.m + 1.0));
  // linear path phi - 2t rescales to slope -1
  GeodesicPath lin = segment(p0, shifted(p0, -2.0), ts, c.window);
  GeodesicPath lin_norm = normalize(lin);
  worst = std::max(worst, std::abs(lin_norm.m + 1.0));
  worst = std::max(worst, std::abs(lin_norm.M + 1.0));
  // constant path unchanged
  GeodesicPath flat = segment(p0, p0, ts, c.window);
  GeodesicPath flat_norm = normalize(flat);
  worst = std::max(worst, (flat_norm.primals[5].v - flat.primals[5].v).abs().maxCoeff());
  return make_result("geodesics.normalization", "geodesics", 0, worst, c.primal_tol());
}

CheckResult check_bern_estimate(Ctx& c, Artifacts*) {
  double worst = 0.0;
  std::vector<double> ts = uniform_samples(0.0, 1.0, 17);
  ToricPotential p0 = c.zoo("bump", 0.0, 370);
  ToricPotential p1 = c.zoo("bump", 0.0, 371);
  GeodesicPath path = segment(p0, p1, ts, c.window);
  double A = std::max(std::abs(path.M), std::abs(path.m)) + 1.0;
  PrimalFunction f0 = to_primal(p0, c.window);
  PrimalFunction f1 = to_primal(p1, c.window);
  for (std::size_t k = 0; k < ts.size(); ++k) {
    double t = ts[k];
    const Array& u = path.primals[k].v;
    Array lowerb = (f0.v - A * t).max(f1.v - A * (1.0 - t));
    Array chord = (1.0 - t) * f0.v + t * f1.v;
    worst = std::max(worst, (lowerb - u).maxCoeff());
    worst = std::max(worst, (u - chord).maxCoeff());
  }
  return make_result("geodesics.bern_estimate", "geodesics", 0, worst, 1e-9);
}

CheckResult check_gamma_energy(Ctx& c, Artifacts*) {
  ToricPotential phi = c.zoo("zero");
  ToricPotential psi = c.zoo("nu", 0.3);
  std::vector<double> ts = uniform_samples(0.0, 8.0, 17);
  std::vector<double> prof;
  for (double t : ts) prof.push_back(am(subgeodesic_gamma(phi, psi, t)));
  double worst = 0.0;
  for (std::size_t k = 1; k < prof.size(); ++k)
    worst = std::max(worst, prof[k] - prof[k - 1]);  // non-increasing
  for (std::size_t k = 2; k < prof.size(); ++k)
    worst = std::max(worst, prof[k - 1] - 0.5 * (prof[k - 2] + prof[k]));  // convex
  double final_slope = (prof.back() - prof[prof.size() - 2]) / (ts.back() - ts[ts.size() - 2]);
  EnergyReport cr = c_of(psi, CMethod::energy_slope, phi, c.l_small, c.window);
  worst = std::max(worst, std::abs(final_slope - *cr.c_energy_slope) - 1e-2);
  return make_result("geodesics.gamma_energy", "geodesics", 0, std::max(0.0, worst), 1e-9);
}

// ---------------------------------------------------------------------- rays

struct RayCase {
  std::string name;
  ToricPotential phi;
  ToricPotential psi;
  bool expect_in_e;
};

std::vector<RayCase> ray_zoo(Ctx& c) {
  ToricPotential zero = c.zoo("zero");
  ToricPotential bump = c.zoo("bump", 0.0, 380);
  std::vector<RayCase> out;
  out.push_back({"const", zero, c.zoo("const", -5.0), true});
  out.push_back({"nu01", zero, c.zoo("nu", 0.1), false});
  out.push_back({"nu03", zero, c.zoo("nu", 0.3), false});
  out.push_back({"nu06", zero, c.zoo("nu", 0.6), false});
  out.push_back({"einf", zero, c.zoo("einf"), true});
  out.push_back({"bumpphi_nu03", bump, c.below(c.zoo("nu", 0.3), bump), false});
  return out;
}

CheckResult check_ray_monotone(Ctx& c, Artifacts*) {
  double worst = 0.0;
  for (RayCase& rc : ray_zoo(c)) {
    const RayApprox& ray = c.ray_fixture(rc.name, rc.phi, rc.psi);
    worst = std::max(worst, ray.monotone_violation);
    if (!ray.converged) worst = std::max(worst, 1.0);
  }
  return make_result("rays.monotone_family", "rays", 6, worst, kTolMonotone);
}

CheckResult check_ray_energy_law(Ctx& c, Artifacts* art) {
  double worst = 0.0;
  for (RayCase& rc : ray_zoo(c)) {
    const RayApprox& ray = c.ray_fixture(rc.name, rc.phi, rc.psi);
    EnergyReport cr = c_of(rc.psi, CMethod::energy_slope, rc.phi, c.l_big, c.window);
    double cpsi = *cr.c_energy_slope;
    double aphi = am(rc.phi);
    for (std::size_t k = 0; k < ray.ts.size(); ++k)
      worst = std::max(worst,
                       std::abs(ray.am_profile[k] - aphi - cpsi * ray.ts[k]) - 1e-2);
    if (rc.name == "nu03" && art != nullptr) {
      Table t;
      t.header = {"t", "am", "am_chord_dev"};
      for (std::size_t k = 0; k < ray.ts.size(); ++k)
        t.rows.push_back({ray.ts[k], ray.am_profile[k],
                          ray.am_profile[k] - (aphi + cpsi * ray.ts[k])});
      (*art)["ray_energy_profile.csv"] = std::move(t);
    }
    // slope of the LS fit matches c as well
    RayEnergyProfile prof = ray_energy_profile(ray);
    worst = std::max(worst, std::abs(prof.slope - cpsi) - 1e-2);
    worst = std::max(worst, std::abs(prof.intercept - aphi) - 5e-3);
  }
  return make_result("rays.energy_law", "rays", 6, std::max(0.0, worst), 1e-12);
}

CheckResult check_tri_equivalence(Ctx& c, Artifacts*) {
  double worst = 0.0;
  std::string note;
  for (RayCase& rc : ray_zoo(c)) {
    const RayApprox& ray = c.ray_fixture(rc.name, rc.phi, rc.psi);
    bool constant = ray_constant(ray);
    bool in_e = is_in_E(rc.psi, c.window, c.l_small).in_e;
    EnergyReport cr = c_of(rc.psi, CMethod::energy_slope, rc.phi, c.l_big, c.window);
    bool c_zero = std::abs(*cr.c_energy_slope) <= kTolC;
    if (constant != in_e || in_e != c_zero || in_e != rc.expect_in_e) {
      worst = 1.0;
      note += rc.name + " ";
    }
  }
  return CheckResult{"rays.tri_equivalence", "rays", 6, worst, 0.5, worst <= 0.5, note};
}

CheckResult check_ray_sandwich(Ctx& c, Artifacts*) {
  double worst = 0.0;
  for (RayCase& rc : ray_zoo(c)) {
    const RayApprox& ray = c.ray_fixture(rc.name, rc.phi, rc.psi);
    for (std::size_t k = 0; k < ray.ts.size(); ++k) {
      const Array& g = ray.path.duals[k].v;
      worst = std::max(worst, (rc.phi.dual.v - g).maxCoeff());  // v_t <= phi
      if (ray.ts[k] > 0) {
        Array ggam = cutoff(rc.psi, ray.ts[k], rc.phi).dual.v;
        worst = std::max(worst, (g - ggam).maxCoeff());  // v_t >= gamma_t
      }
    }
    // decreasing in t (dual side increasing)
    for (std::size_t k = 1; k < ray.ts.size(); ++k)
      worst = std::max(worst,
                       (ray.path.duals[k - 1].v - ray.path.duals[k].v).maxCoeff());
  }
  return make_result("rays.sandwich_decreasing", "rays", 0, worst, 1e-9);
}

CheckResult check_ray_membership(Ctx& c, Artifacts*) {
  double worst = 0.0;
  ToricPotential zero = c.zoo("zero");
  {
    const RayApprox& ray = c.ray_fixture("nu03", zero, c.zoo("nu", 0.3));
    const RayApprox& comp = c.ray_fixture("nu02_comp", zero, c.zoo("nu", 0.2));
    MembershipReport rep = membership_check(ray, &comp.path);
    if (!rep.emanates || !rep.floor_ok || !rep.normalized_ok) worst = 1.0;
    if (!rep.competitor_valid || !rep.below_competitor) worst = 1.0;
    double nu_inf = v_infinity_lelong(ray);
    if (nu_inf > 0.3 + 2 * c.hp()) worst = 1.0;
  }
  {
    const RayApprox& ray = c.ray_fixture("einf", zero, c.zoo("einf"));
    MembershipReport rep = membership_check(ray, nullptr);
    if (!rep.emanates || !rep.floor_ok || !rep.normalized_ok) worst = 1.0;
  }
  return make_result("rays.membership", "rays", 0, worst, 0.5);
}

// ----------------------------------------------------------------- envelopes

CheckResult check_proj_algebra(Ctx& c, Artifacts*) {
  double worst = 0.0;
  double hw2 = c.hw() * c.hw();  // window re-sampling allowance
  PrimalFunction f0 = legendre_inv(c.geom->g0, c.window);
  // closure: one application stays within the re-sampling dust of the
  // potential; the second application is node-exact on the first's output
  for (int k = 0; k < 3; ++k) {
    ToricPotential pot = c.zoo("bump", 0.0, 390 + k);
    PrimalFunction f = to_primal(pot, c.window);
    ObstacleFn ob(c.window, f.v - f0.v, SlopeData{f.tails.left, f.tails.right - 1.0});
    ToricPotential once = proj(ob, c.geom);
    for (int i = 0; i < once.dual.v.size(); ++i)
      worst = std::max(worst, std::abs(once.dual.v[i] - pot.dual.v[i]) - hw2);
    PrimalFunction f1 = to_primal(once, c.window);
    ObstacleFn ob1(c.window, f1.v - f0.v,
                   SlopeData{f1.tails.left, f1.tails.right - 1.0});
    ToricPotential twice = proj(ob1, c.geom);
    for (int i = 0; i < twice.dual.v.size(); ++i)
      worst = std::max(worst, std::abs(twice.dual.v[i] - once.dual.v[i]));
  }
  // obstacle bound + monotonicity
  Rng rng(c.p.seed + 400);
  Array w(c.window.nodes());
  for (int i = 0; i < w.size(); ++i) w[i] = rng.uniform(-0.5, 0.5);
  ObstacleFn b0(c.window, w, SlopeData{-2.0, 2.0});
  ObstacleFn b1(c.window, w + 0.25, SlopeData{-2.0, 2.0});
  ToricPotential e0 = proj(b0, c.geom);
  ToricPotential e1 = proj(b1, c.geom);
  TildeView t0 = tilde_view(e0, c.window);
  TildeView t1 = tilde_view(e1, c.window);
  worst = std::max(worst, (t0.values - w).maxCoeff());           // proj <= b0
  worst = std::max(worst, (t0.values - t1.values).maxCoeff());   // monotone
  // idempotence of proj on its own output (node-exact)
  ObstacleFn again(c.window, t0.values, SlopeData{0.0, 0.0});
  ToricPotential e00 = proj(again, c.geom);
  for (int i = 0; i < e00.dual.v.size(); ++i)
    if (e0.dual.v[i] < kInf)
      worst = std::max(worst, std::abs(e00.dual.v[i] - e0.dual.v[i]));
  // pair envelope identity: dual(P(min(phi~, phi'~))) = max of duals
  ToricPotential pa = c.zoo("bump", 0.0, 401);
  ToricPotential pb = c.zoo("bump", 0.0, 402);
  PrimalFunction fa = to_primal(pa, c.window);
  PrimalFunction fb = to_primal(pb, c.window);
  ObstacleFn mo = min_obstacle(
      ObstacleFn(c.window, fa.v - f0.v, SlopeData{0.0, 0.0}),
      ObstacleFn(c.window, fb.v - f0.v, SlopeData{0.0, 0.0}));
  ToricPotential pmin = proj(mo, c.geom);
  Array dual_max = pa.dual.v.max(pb.dual.v);
  for (int i = 0; i < dual_max.size(); ++i)
    worst = std::max(worst, std::abs(pmin.dual.v[i] - dual_max[i]) - hw2);
  // slope clipping: zero obstacle with steep tails projects to the reference
  ObstacleFn steep(c.window, Array::Zero(c.window.nodes()), SlopeData{-2.0, 2.0});
  ToricPotential clip = proj(steep, c.geom);
  worst = std::max(worst, (clip.dual.v - c.geom->g0.v).abs().maxCoeff() - hw2);
  return make_result("envelopes.proj_algebra", "envelopes", 9, std::max(0.0, worst),
                     1e-9);
}

CheckResult check_bracket_two_path(Ctx& c, Artifacts*) {
  double worst = 0.0;
  ToricPotential zero = c.zoo("zero");
  ToricPotential bump = c.zoo("bump", 0.0, 410);
  std::vector<std::pair<ToricPotential, ToricPotential>> cases = {
      {c.zoo("const", -5.0), zero},
      {c.zoo("nu", 0.3), zero},
      {c.below(c.zoo("nu", 0.6), bump), bump},
      {c.zoo("einf"), zero},
      {c.below(c.zoo("einf"), bump), bump},
  };
  for (auto& [psi, phi] : cases) {
    EnvelopeResult env = p_bracket(psi, phi, c.l_small, c.window);
    worst = std::max(worst, env.closed_form_gap);
  }
  return make_result("envelopes.bracket_two_path", "envelopes", 9, worst, c.primal_tol());
}

CheckResult check_shift_invariance(Ctx& c, Artifacts*) {
  double worst = 0.0;
  ToricPotential zero = c.zoo("zero");
  ToricPotential psi = c.zoo("nu", 0.3);
  EnvelopeResult base = p_bracket(psi, zero, c.l_small, c.window);
  for (double s : {-3.0, 7.0}) {
    EnvelopeResult moved = p_bracket(shifted(psi, s), zero, c.l_small, c.window);
    const Array& a = base.result.dual.v;
    const Array& b = moved.result.dual.v;
    for (int i = 0; i < a.size(); ++i) {
      if (a[i] == kInf && b[i] == kInf) continue;
      if (a[i] == kInf || b[i] == kInf) {
        worst = std::max(worst, 1.0);
        continue;
      }
      worst = std::max(worst, std::abs(a[i] - b[i]));
    }
  }
  return make_result("envelopes.shift_invariance", "envelopes", 9, worst, 1e-12);
}

CheckResult check_c_monotone_envelope(Ctx& c, Artifacts*) {
  double worst = 0.0;
  ToricPotential zero = c.zoo("zero");
  ToricPotential psi = c.zoo("nu", 0.3);
  Array prev;
  for (double C : c.l_small) {
    ToricPotential e = p_pair(psi, C, zero, c.window);
    PrimalFunction f = to_primal(e, c.window, TailPolicy::lenient);
    if (prev.size()) worst = std::max(worst, (prev - f.v).maxCoeff());  // non-decreasing
    prev = f.v;
  }
  return make_result("envelopes.c_monotone", "envelopes", 0, worst, 1e-9);
}

CheckResult check_e_characterization(Ctx& c, Artifacts*) {
  double worst = 0.0;
  ToricPotential zero = c.zoo("zero");
  ToricPotential bump = c.zoo("bump", 0.0, 420);
  auto expect = [&](const ToricPotential& psi, const ToricPotential& phi, bool in_e) {
    ECheckReport r = e_check(psi, phi, c.window);
    if (r.in_e != in_e || !r.verdict_ok) worst = 1.0;
    return r;
  };
  expect(c.zoo("einf"), zero, true);
  expect(c.below(c.zoo("einf"), bump), bump, true);
  expect(c.zoo("const", -5.0), bump, true);
  ECheckReport nu = expect(c.zoo("nu", 0.3), zero, false);
  if (nu.gap < 0.3 * c.p.window_half * 0.5) worst = 1.0;
  return make_result("envelopes.e_characterization", "envelopes", 7, worst, 0.5);
}

CheckResult check_maximality(Ctx& c, Artifacts*) {
  double worst = 0.0;
  ToricPotential zero = c.zoo("zero");
  std::vector<std::pair<ToricPotential, double>> cases = {
      {c.zoo("const", -5.0), 1.0},
      {c.zoo("nu", 0.3), 0.7},
      {c.zoo("einf"), 1.0},
  };
  for (auto& [psi, mass] : cases) {
    double defect = maximality_defect(psi, zero, c.window);
    worst = std::max(worst, defect - c.primal_tol() * mass);
  }
  return make_result("envelopes.maximality", "envelopes", 7, std::max(0.0, worst), 1e-12);
}

CheckResult check_domination_spot(Ctx& c, Artifacts*) {
  ToricPotential zero = c.zoo("zero");
  ToricPotential psi = c.zoo("einf");
  EnvelopeResult env = p_bracket(psi, zero, c.l_small, c.window);
  TildeView tv_env = tilde_view(env.result, c.window);
  TildeView tv_phi = tilde_view(zero, c.window);
  double worst = (tv_phi.values - tv_env.values).maxCoeff();
  return make_result("envelopes.domination_spot", "envelopes", 0, worst, c.primal_tol());
}

// ------------------------------------------------------------------------ rwn

CheckResult check_fixed_point(Ctx& c, Artifacts*) {
  double worst = 0.0;
  ToricPotential zero = c.zoo("zero");
  const RayApprox& ray = c.ray_fixture("nu03", zero, c.zoo("nu", 0.3));
  for (double tau : {0.0, -0.5}) {
    ToricPotential star = ray_legendre(ray, tau);
    for (double C : {2.0, 8.0, 32.0}) {
      ToricPotential env = p_pair(star, C, zero, c.window);
      worst = std::max(worst, sup_dist(env, star, c.window));
    }
  }
  return make_result("rwn.legendre_fixed_point", "rwn", 7, worst, c.primal_tol());
}

CheckResult check_tc_identities(Ctx& c, Artifacts*) {
  double worst = 0.0;
  ToricPotential zero = c.zoo("zero");
  std::vector<double> taus = {-1.5, -1.0, -0.5, 0.0, 0.1, 0.25};
  for (const ZooCase& z : c_zoo()) {
    ToricPotential psi = c.below(c.zoo(z.kind, z.param), zero);
    TestCurve tc = test_curve(zero, psi, taus, c.window);
    // tau <= -1: the curve equals phi node-exactly
    for (int j : {0, 1}) {
      require(tc.duals[j].has_value(), "tc: unexpectedly BOTTOM");
      worst = std::max(worst, (tc.duals[j]->v - zero.dual.v).abs().maxCoeff());
    }
    // tau = 0: the curve equals psi over the window
    require(tc.duals[3].has_value(), "tc: tau=0 BOTTOM");
    ToricPotential tau0(c.geom, *tc.duals[3]);
    worst = std::max(worst, sup_dist(tau0, psi, c.window));
    // tau > 0: BOTTOM
    if (tc.duals[4].has_value() || tc.duals[5].has_value()) worst = std::max(worst, 1.0);
  }
  return make_result("rwn.tc_identities", "rwn", 8, worst, c.primal_tol());
}

CheckResult check_tc_concavity(Ctx& c, Artifacts*) {
  double worst = 0.0;
  ToricPotential zero = c.zoo("zero");
  ToricPotential psi = c.zoo("nu", 0.3);
  std::vector<double> taus = uniform_samples(-1.25, 0.0, 26);
  TestCurve tc = test_curve(zero, psi, taus, c.window);
  std::vector<Array> vals;
  for (auto& d : tc.duals) {
    require(d.has_value(), "concavity: BOTTOM in range");
    vals.push_back(to_primal(ToricPotential(c.geom, *d), c.window, TailPolicy::lenient).v);
  }
  for (std::size_t k = 1; k + 1 < vals.size(); ++k) {
    Array mid = 0.5 * (vals[k - 1] + vals[k + 1]) - vals[k];  // concave: <= 0
    worst = std::max(worst, mid.maxCoeff());
  }
  return make_result("rwn.tc_concavity", "rwn", 0, worst, c.primal_tol());
}

CheckResult check_roundtrip(Ctx& c, Artifacts*) {
  double worst = 0.0;
  ToricPotential zero = c.zoo("zero");
  ToricPotential psi = c.zoo("nu", 0.3);
  const RwnRay& rwn = c.rwn_fixture("nu03", zero, psi, std::max(65, c.p.n / 4 + 1));
  for (double tau : {-1.2, -0.6, -0.2, 0.0}) {
    // nearest tau sample
    std::size_t best = 0;
    for (std::size_t i = 1; i < rwn.curve.taus.size(); ++i)
      if (std::abs(rwn.curve.taus[i] - tau) < std::abs(rwn.curve.taus[best] - tau))
        best = i;
    if (!rwn.curve.duals[best].has_value()) continue;
    ToricPotential expect(c.geom, *rwn.curve.duals[best]);
    ToricPotential got = ray_legendre(rwn.path, rwn.curve.taus[best]);
    worst = std::max(worst, sup_dist(got, expect, c.window));
  }
  return make_result("rwn.roundtrip", "rwn", 0, worst, 2.0 * c.primal_tol());
}

CheckResult check_rwn_ordering(Ctx& c, Artifacts*) {
  ToricPotential zero = c.zoo("zero");
  ToricPotential psi = c.zoo("nu", 0.3);
  const RwnRay& rwn = c.rwn_fixture("nu03", zero, psi, std::max(65, c.p.n / 4 + 1));
  const RayApprox& build = c.ray_fixture("nu03", zero, psi);
  double worst = -kInf;
  for (std::size_t k = 0; k < rwn.path.ts.size(); ++k)
    worst = std::max(worst,
                     (rwn.path.primals[k].v - build.path.primals[k].v).maxCoeff());
  return make_result("rwn.ordering", "rwn", 0, worst, c.primal_tol());
}

CheckResult check_rwn_geodesic_criterion(Ctx& c, Artifacts*) {
  ToricPotential zero = c.zoo("zero");
  ToricPotential psi = c.zoo("nu", 0.3);
  const RwnRay& rwn = c.rwn_fixture("nu03", zero, psi, std::max(65, c.p.n / 4 + 1));
  double dev = max_chord_deviation(rwn.path.ts, rwn.am_profile);
  return make_result("rwn.geodesic_criterion", "rwn", 0, dev, 1e-2);
}

CheckResult check_ray_equality(Ctx& c, Artifacts* art) {
  double worst_abs = 0.0;
  double worst_ratio = kInf;
  std::string note;
  // refinement study on the singular zoo; absolute bound on the whole zoo
  std::vector<std::pair<std::string, double>> nus = {{"nu03", 0.3}, {"nu06", 0.6}};
  for (auto& [name, nu] : nus) {
    std::vector<double> gaps;
    for (int k = 0; k < 3; ++k) {
      int n = 256 << k;
      auto geom = ToricGeometry::make_dim1(n);
      Grid1D window = log_window(c.p.window_half, 4 * n);
      std::vector<double> ts = uniform_samples(0.0, c.p.ray_t_max, c.p.t_count);
      ToricPotential phi = zoo_zero(geom);
      ToricPotential psi = zoo_nu(geom, nu);
      std::vector<double> lsched = dyadic_schedule(1.0, 4096.0);
      RayApprox build = build_ray(phi, psi, lsched, ts, window,
                                  kConstancyFactor * window.h());
      RwnRay rwn = rwn_ray(phi, psi, default_tau_samples(n / 4 + 1), ts, window,
                           dyadic_schedule(1.0, 64.0));
      RayDistance d = compare_rays(build.path, rwn.path);
      gaps.push_back(d.primal_gap);
      if (k == 2) {
        worst_abs = std::max(worst_abs, d.primal_gap - 10.0 * window.h());
        if (name == "nu03" && art != nullptr) {
          Table t;
          t.header = {"t", "gap"};
          for (std::size_t j = 0; j < ts.size(); ++j) {
            double g = (build.path.primals[j].v - rwn.path.primals[j].v).abs().maxCoeff();
            t.rows.push_back({ts[j], g});
          }
          (*art)["ray_equality.csv"] = std::move(t);
        }
      }
    }
    worst_ratio = std::min({worst_ratio, gaps[0] / gaps[1], gaps[1] / gaps[2]});
    note += name + " gaps=" + format_double(gaps[0]) + "," + format_double(gaps[1]) +
            "," + format_double(gaps[2]) + "; ";
  }
  // constant-ray zoo: absolute bound only (schedule floor, not grid-limited)
  ToricPotential zero = c.zoo("zero");
  for (const std::string name : {std::string("const"), std::string("einf")}) {
    ToricPotential psi = name == "const" ? c.zoo("const", -1.0) : c.zoo("einf");
    const RayApprox& build = c.ray_fixture("eq_" + name, zero, psi);
    const RwnRay& rwn =
        c.rwn_fixture("eq_" + name, zero, psi, std::max(65, c.p.n / 4 + 1));
    RayDistance d = compare_rays(build.path, rwn.path);
    worst_abs = std::max(worst_abs, d.primal_gap - 10.0 * c.hw());
  }
  bool ok = worst_abs <= 0.0 && worst_ratio >= 1.5;
  return CheckResult{"rwn.ray_equality", "rwn", 8, ok ? 0.0 : std::max(worst_abs, 1.0),
                     0.5, ok, note + "min_ratio=" + format_double(worst_ratio)};
}

// ---------------------------------------------------------------- dim2 smoke

CheckResult check_dim2_smoke(Ctx& c, Artifacts*) {
  double worst = 0.0;
  auto geom2 = ToricGeometry::make_dim2(48);
  ToricPotential zero2 = zoo_zero(geom2);
  worst = std::max(worst, std::abs(ma_mass_2d(zero2) - 1.0) - 0.1);
  worst = std::max(worst, std::abs(am(zero2)));
  ToricPotential c2 = zoo_const(geom2, 2.0);
  worst = std::max(worst, std::abs(am(c2) - 2.0) - 0.02);
  ToricPotential mx = toric_max(zero2, c2);
  worst = std::max(worst, std::abs(am(mx) - 2.0) - 0.02);
  return make_result("toric.dim2_smoke", "toric", 0, std::max(0.0, worst), 1e-9);
}

using CheckFn = std::function<CheckResult(Ctx&, Artifacts*)>;

struct Entry {
  std::string suite;
  CheckFn fn;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> r = {
      {"convex_core", check_fast_brute},
      {"convex_core", check_order_reversal},
      {"convex_core", check_involution},
      {"convex_core", check_shift_covariance},
      {"convex_core", check_envelope_dominance},
      {"toric", check_toric_order},
      {"toric", check_toric_max_oracle},
      {"toric", check_cutoff_monotone},
      {"toric", check_mass_dom},
      {"toric", check_lelong},
      {"toric", check_dim2_smoke},
      {"energy", check_shift_rule},
      {"energy", check_energy_monotone},
      {"energy", check_strict_domination},
      {"energy", check_energy_two_path},
      {"energy", check_difference_form},
      {"energy", check_nonpositive_bounds},
      {"energy", check_c_two_path},
      {"energy", check_c_sequence_shape},
      {"energy", check_class_flags},
      {"geodesics", check_energy_affinity},
      {"geodesics", check_oracle_agreement},
      {"geodesics", check_quotient_invariance},
      {"geodesics", check_endpoint_derivative},
      {"geodesics", check_interval_monotonicity},
      {"geodesics", check_restriction},
      {"geodesics", check_normalization},
      {"geodesics", check_bern_estimate},
      {"geodesics", check_gamma_energy},
      {"rays", check_ray_monotone},
      {"rays", check_ray_energy_law},
      {"rays", check_tri_equivalence},
      {"rays", check_ray_sandwich},
      {"rays", check_ray_membership},
      {"envelopes", check_proj_algebra},
      {"envelopes", check_bracket_two_path},
      {"envelopes", check_shift_invariance},
      {"envelopes", check_c_monotone_envelope},
      {"envelopes", check_e_characterization},
      {"envelopes", check_maximality},
      {"envelopes", check_domination_spot},
      {"rwn", check_fixed_point},
      {"rwn", check_tc_identities},
      {"rwn", check_tc_concavity},
      {"rwn", check_roundtrip},
      {"rwn", check_rwn_ordering},
      {"rwn", check_rwn_geodesic_criterion},
      {"rwn", check_ray_equality},
  };
  return r;
}

}  // namespace

std::vector<std::string> verify_suites() {
  return {"convex_core", "toric", "energy", "geodesics", "rays", "envelopes", "rwn"};
}

VerifyOutput run_verify(const std::string& suite, const VerifyParams& params) {
  Ctx ctx(params);
  VerifyOutput out;
  for (const Entry& e : registry()) {
    if (suite != "all" && suite != e.suite) continue;
    try {
      out.checks.push_back(e.fn(ctx, &out.artifacts));
    } catch (const std::exception& ex) {
      out.checks.push_back(CheckResult{"<exception>", e.suite, 0, kInf, 0.0, false,
                                       ex.what()});
    }
  }
  // checks table artifact
  Table t;
  t.header = {"id", "criterion", "residual", "tol", "pass"};
  for (const CheckResult& cr : out.checks) {
    t.labels.push_back(cr.id);
    t.rows.push_back({static_cast<double>(cr.criterion), cr.residual, cr.tol,
                      cr.pass ? 1.0 : 0.0});
  }
  out.artifacts["checks.csv"] = std::move(t);
  return out;
}

}  // namespace tkray
