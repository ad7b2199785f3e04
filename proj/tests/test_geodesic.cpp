#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tkray/geodesic.hpp"

#include <cmath>

using namespace tkray;

namespace {
const int kN = 512;
auto geom() {
  static auto g = ToricGeometry::make_dim1(kN);
  return g;
}
Grid1D window() { return log_window(40.0, 2048); }
double tol5h() { return 5 * window().h(); }
}  // namespace

TEST_CASE("identical endpoints give a constant path") {
  ToricPotential phi = zoo_bump(geom(), 1);
  GeodesicPath p = segment(phi, phi, uniform_samples(0, 1, 9), window());
  CHECK(is_constant_path(p));
  CHECK(std::abs(p.M) <= 1e-12);
  CHECK(std::abs(p.m) <= 1e-12);
}

TEST_CASE("shifted endpoint gives the linear path") {
  ToricPotential phi = zoo_bump(geom(), 2);
  GeodesicPath p = segment(phi, shifted(phi, -1.0), uniform_samples(0, 1, 9), window());
  CHECK(p.M == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(p.m == doctest::Approx(-1.0).epsilon(1e-12));
  DiffQuotients q = diff_quotients(p, 0.25, 0.75);
  CHECK(q.inf == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(q.sup == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("energy is affine along segments") {
  for (std::uint64_t s = 0; s < 6; ++s) {
    ToricPotential a = zoo_bump(geom(), 10 + 2 * s);
    ToricPotential b = zoo_bump(geom(), 11 + 2 * s);
    std::vector<double> ts = uniform_samples(0, 1, 33);
    GeodesicPath p = segment(a, b, ts, window());
    CHECK(max_chord_deviation(ts, energy_profile(p)) <= 5e-3);
  }
}

TEST_CASE("chord bounds from the envelope construction") {
  ToricPotential a = zoo_bump(geom(), 20);
  ToricPotential b = zoo_bump(geom(), 21);
  std::vector<double> ts = uniform_samples(0, 1, 9);
  GeodesicPath p = segment(a, b, ts, window());
  double A = std::max(std::abs(p.M), std::abs(p.m)) + 1.0;
  PrimalFunction f0 = to_primal(a, window());
  PrimalFunction f1 = to_primal(b, window());
  for (std::size_t k = 0; k < ts.size(); ++k) {
    double t = ts[k];
    Array lower = (f0.v - A * t).max(f1.v - A * (1 - t));
    Array chord = (1 - t) * f0.v + t * f1.v;
    CHECK((lower - p.primals[k].v).maxCoeff() <= 1e-10);
    CHECK((p.primals[k].v - chord).maxCoeff() <= 1e-10);
  }
}

TEST_CASE("oracle agrees with the dual-affine construction and refines") {
  std::vector<double> errs;
  for (int k = 0; k < 3; ++k) {
    int n = 128 << k;
    auto g = ToricGeometry::make_dim1(n);
    Grid1D w = log_window(20.0, 2 * n);
    ToricPotential a = zoo_bump(g, 77);
    ToricPotential b = zoo_bump(g, 78);
    HcmaResult hr = hcma_oracle(a, b, (8 << k) + 1, w);
    CHECK(hr.converged);
    GeodesicPath exact = segment(a, b, hr.path.ts, w);
    double err = 0.0;
    for (std::size_t j = 0; j < hr.path.ts.size(); ++j)
      err = std::max(err, (hr.path.primals[j].v - exact.primals[j].v).abs().maxCoeff());
    errs.push_back(err);
  }
  CHECK(errs[0] / errs[1] >= 1.7);
  CHECK(errs[1] / errs[2] >= 1.7);
}

TEST_CASE("oracle is exact on already jointly convex data") {
  ToricPotential phi = zoo_bump(geom(), 30);
  HcmaResult hr = hcma_oracle(phi, shifted(phi, -1.0), 9, log_window(20.0, 512));
  GeodesicPath exact = segment(phi, shifted(phi, -1.0), hr.path.ts, log_window(20.0, 512));
  for (std::size_t j = 0; j < hr.path.ts.size(); ++j)
    CHECK((hr.path.primals[j].v - exact.primals[j].v).abs().maxCoeff() <= 1e-9);
}

TEST_CASE("difference quotients are pair independent") {
  ToricPotential a = zoo_bump(geom(), 40);
  ToricPotential b = zoo_bump(geom(), 41);
  std::vector<double> ts = uniform_samples(0, 1, 33);
  GeodesicPath p = segment(a, b, ts, window());
  DiffQuotients q1 = diff_quotients(p, 0.40625, 0.09375);   // (0.1, 0.4)-ish samples
  DiffQuotients q2 = diff_quotients(p, 0.90625, 0.5);
  CHECK(std::abs(q1.inf - q2.inf) <= tol5h());
  CHECK(std::abs(q1.sup - q2.sup) <= tol5h());
  CHECK_THROWS(diff_quotients(p, 0.40625, 0.40625));
  CHECK_THROWS(diff_quotients(p, 0.123, 0.0));  // not a sample
}

TEST_CASE("Lipschitz bound holds at all nodes") {
  ToricPotential a = zoo_bump(geom(), 50);
  ToricPotential b = zoo_bump(geom(), 51);
  std::vector<double> ts = uniform_samples(0, 1, 17);
  GeodesicPath p = segment(a, b, ts, window());
  double lip = std::max(std::abs(p.M), std::abs(p.m)) + tol5h();
  for (std::size_t i = 0; i < ts.size(); ++i)
    for (std::size_t j = i + 1; j < ts.size(); ++j)
      CHECK((p.primals[j].v - p.primals[i].v).abs().maxCoeff() <=
            lip * (ts[j] - ts[i]) + 1e-12);
}

TEST_CASE("endpoint derivative matches the endpoint difference") {
  ToricPotential a = zoo_bump(geom(), 60);
  ToricPotential b = zoo_bump(geom(), 61);
  GeodesicPath p = segment(a, b, {0.0, 0.01, 0.02, 1.0}, window());
  double q1 = diff_quotients(p, 0.01, 0.0).inf;
  double q2 = diff_quotients(p, 0.02, 0.0).inf;
  GeodesicPath full = segment(a, b, {0.0, 1.0}, window());
  double expect = diff_quotients(full, 1.0, 0.0).inf;  // inf(phi1 - phi0)
  CHECK(2 * q1 - q2 == doctest::Approx(expect).epsilon(tol5h()));
}

TEST_CASE("quotients tighten from the correct side when shrinking") {
  ToricPotential a = zoo_bump(geom(), 70);
  ToricPotential b = zoo_bump(geom(), 71);
  std::vector<double> ts = uniform_samples(0, 1, 33);
  GeodesicPath p = segment(a, b, ts, window());
  double ta = ts[4], tb = ts[16], tc = ts[28];
  CHECK(diff_quotients(p, tc, tb).inf >= diff_quotients(p, tc, ta).inf - tol5h());
  CHECK(diff_quotients(p, tb, ta).sup <= diff_quotients(p, tc, ta).sup + tol5h());
}

TEST_CASE("restriction reproduces the path") {
  ToricPotential a = zoo_bump(geom(), 80);
  ToricPotential b = zoo_bump(geom(), 81);
  std::vector<double> ts = uniform_samples(0, 1, 17);
  GeodesicPath p = segment(a, b, ts, window());
  GeodesicPath inner = segment(ToricPotential(geom(), p.duals[4]),
                               ToricPotential(geom(), p.duals[12]),
                               uniform_samples(0, 1, 9), window());
  for (int j = 0; j <= 8; ++j)
    CHECK((inner.primals[j].v - p.primals[4 + j].v).abs().maxCoeff() <= 1e-9);
}

TEST_CASE("normalization lands on (0, -1)") {
  ToricPotential a = zoo_bump(geom(), 90);
  // widen the endpoint difference so the path is clearly non-linear
  Array wide = 3.0 * zoo_bump(geom(), 91).dual.v - 2.0 * geom()->g0.v;
  ToricPotential b = shifted(ToricPotential(geom(), ExtGridFn(geom()->polytope, wide)),
                             -2.0);
  GeodesicPath p = segment(a, b, uniform_samples(0, 1, 33), window());
  REQUIRE(p.M - p.m > tol5h());
  GeodesicPath n = normalize(p);
  CHECK(std::abs(n.M) <= tol5h());
  CHECK(std::abs(n.m + 1.0) <= tol5h());
  // pure rescale for the linear path
  GeodesicPath lin = segment(a, shifted(a, -2.0), uniform_samples(0, 1, 9), window());
  GeodesicPath ln = normalize(lin);
  CHECK(ln.m == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(ln.ts.back() == doctest::Approx(2.0));
  // constant path unchanged
  GeodesicPath flat = segment(a, a, uniform_samples(0, 1, 9), window());
  GeodesicPath fn = normalize(flat);
  CHECK((fn.primals[3].v - flat.primals[3].v).abs().maxCoeff() == 0.0);
}

TEST_CASE("subgeodesic energy is convex non-increasing with slope near c") {
  ToricPotential phi = zoo_zero(geom());
  ToricPotential psi = zoo_nu(geom(), 0.3);
  CHECK_THROWS(subgeodesic_gamma(psi, phi, 1.0));  // ordering violated
  CHECK((subgeodesic_gamma(phi, psi, 0.0).dual.v - phi.dual.v).abs().maxCoeff() <=
        1e-12);
  // saturation: psi = phi - 1, t = 3 -> phi - 1
  ToricPotential lower = shifted(phi, -1.0);
  ToricPotential g3 = subgeodesic_gamma(phi, lower, 3.0);
  CHECK((g3.dual.v - lower.dual.v).abs().maxCoeff() <= 1e-12);
  std::vector<double> ts = uniform_samples(0, 8, 17);
  std::vector<double> prof;
  for (double t : ts) prof.push_back(am(subgeodesic_gamma(phi, psi, t)));
  for (std::size_t k = 1; k < prof.size(); ++k) CHECK(prof[k] <= prof[k - 1] + 1e-12);
  for (std::size_t k = 2; k < prof.size(); ++k)
    CHECK(prof[k - 1] <= 0.5 * (prof[k - 2] + prof[k]) + 1e-12);
  double slope = (prof.back() - prof[prof.size() - 2]) / (ts[1] - ts[0]);
  CHECK(slope == doctest::Approx(-0.15).epsilon(0.02));
}

TEST_CASE("boundary limits are attained at the Lipschitz rate") {
  ToricPotential a = zoo_bump(geom(), 95);
  ToricPotential b = zoo_bump(geom(), 96);
  std::vector<double> ts = uniform_samples(0, 1, 33);
  GeodesicPath p = segment(a, b, ts, window());
  PrimalFunction fa = to_primal(a, window());
  double lip = std::max(std::abs(p.M), std::abs(p.m)) + tol5h();
  for (int k = 1; k <= 3; ++k)
    CHECK((p.primals[k].v - fa.v).abs().maxCoeff() <= lip * ts[k] + 1e-12);
}
