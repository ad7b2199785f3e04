#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tkray/rwn.hpp"

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
std::vector<double> ts() { return uniform_samples(0.0, 8.0, 17); }
std::vector<double> csched() { return dyadic_schedule(1.0, 64.0); }
}  // namespace

TEST_CASE("transform of a constant ray returns phi for tau <= 0") {
  ToricPotential phi = zoo_bump(geom(), 7);
  GeodesicPath flat = segment(phi, phi, uniform_samples(0, 1, 9), window());
  for (double tau : {-1.0, -0.25, 0.0}) {
    ToricPotential star = ray_legendre(flat, tau);
    CHECK((star.dual.v - phi.dual.v).abs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("transform of the linear path saturates at tau = -1") {
  ToricPotential phi = zoo_bump(geom(), 8);
  GeodesicPath lin = segment(phi, shifted(phi, -1.0), uniform_samples(0, 1, 9), window());
  ToricPotential star = ray_legendre(lin, -1.0);
  CHECK((star.dual.v - phi.dual.v).abs().maxCoeff() <= 1e-10);
}

TEST_CASE("test curve identities for the shifted pair") {
  ToricPotential phi = zoo_zero(geom());
  ToricPotential psi = shifted(phi, -1.0);
  std::vector<double> taus = {-1.5, -1.0, -0.75, -0.5, -0.25, 0.0, 0.1, 0.25};
  TestCurve tc = test_curve(phi, psi, taus, window());
  // tau <= -1: phi node-exact
  for (int j : {0, 1})
    CHECK((tc.duals[j]->v - phi.dual.v).abs().maxCoeff() <= 1e-10);
  // interior: gamma*_tau = phi - 1 - tau (closed form from the 1-d oracle)
  for (int j : {2, 3, 4}) {
    double tau = taus[j];
    Array expect = phi.dual.v + (1.0 + tau);
    CHECK((tc.duals[j]->v - expect).abs().maxCoeff() <= 1e-9);
  }
  // tau = 0: psi
  CHECK((tc.duals[5]->v - psi.dual.v).abs().maxCoeff() <= 1e-9);
  // tau > 0: BOTTOM
  CHECK(!tc.duals[6].has_value());
  CHECK(!tc.duals[7].has_value());
}

TEST_CASE("test curve of a vertex singularity scales the slope") {
  ToricPotential phi = zoo_zero(geom());
  ToricPotential psi = zoo_nu(geom(), 0.3);
  std::vector<double> taus = {-1.5, -0.5, 0.0, 0.25};
  TestCurve tc = test_curve(phi, psi, taus, window());
  CHECK((tc.duals[0]->v - phi.dual.v).abs().maxCoeff() <= 1e-10);
  // tau = -0.5: the pointwise 1-d minimization gives (1 + tau) psi~, with the
  // dual domain shrunk to [nu (1 + tau), 1]
  REQUIRE(tc.duals[1].has_value());
  CHECK(tc.duals[1]->dom_lo() == doctest::Approx(0.15).epsilon(0.05));
  {
    PrimalFunction f0 = legendre_inv(geom()->g0, window());
    PrimalFunction fpsi = to_primal(psi, window(), TailPolicy::lenient);
    PrimalFunction felem = to_primal(ToricPotential(geom(), *tc.duals[1]), window(),
                                     TailPolicy::lenient);
    Array expect = 0.5 * (fpsi.v - f0.v);
    CHECK(((felem.v - f0.v) - expect).abs().maxCoeff() <= tol5h());
  }
  // tau = 0 reproduces psi on the window
  ToricPotential tau0(geom(), *tc.duals[2]);
  CHECK(sup_dist(tau0, psi, window()) <= tol5h());
  CHECK(!tc.duals[3].has_value());
  // concavity in tau at each node (closed form is linear in tau)
  std::vector<double> dense = uniform_samples(-1.0, 0.0, 11);
  TestCurve tcd = test_curve(phi, psi, dense, window());
  std::vector<Array> vals;
  for (auto& d : tcd.duals)
    vals.push_back(to_primal(ToricPotential(geom(), *d), window(),
                             TailPolicy::lenient).v);
  for (std::size_t k = 1; k + 1 < vals.size(); ++k)
    CHECK((0.5 * (vals[k - 1] + vals[k + 1]) - vals[k]).maxCoeff() <= tol5h());
}

TEST_CASE("maximized ray of a bounded psi is constant") {
  ToricPotential phi = zoo_zero(geom());
  ToricPotential psi = shifted(phi, -1.0);
  RwnRay r = rwn_ray(phi, psi, default_tau_samples(65), ts(), window(), csched());
  for (std::size_t k = 0; k < r.path.ts.size(); ++k)
    CHECK(sup_dist(ToricPotential(geom(), r.path.duals[k]), phi, window()) <= tol5h());
}

TEST_CASE("maximized ray of the full-mass class is constant") {
  ToricPotential phi = zoo_zero(geom());
  RwnRay r = rwn_ray(phi, zoo_einf(geom()), default_tau_samples(129), ts(), window(),
                     csched());
  for (std::size_t k = 0; k < r.path.ts.size(); ++k)
    CHECK(sup_dist(ToricPotential(geom(), r.path.duals[k]), phi, window()) <= tol5h());
}

TEST_CASE("both ray constructions agree for the vertex singularity") {
  ToricPotential phi = zoo_zero(geom());
  ToricPotential psi = zoo_nu(geom(), 0.3);
  RayApprox build = build_ray(phi, psi, dyadic_schedule(1.0, 4096.0), ts(), window(),
                              tol5h());
  RwnRay rwn = rwn_ray(phi, psi, default_tau_samples(129), ts(), window(), csched());
  RayDistance d = compare_rays(build.path, rwn.path);
  CHECK(d.primal_gap <= 10 * window().h());
  // emanation
  CHECK(sup_dist(ToricPotential(geom(), rwn.path.duals.front()), phi, window()) <=
        1e-9);
  // rwn sits below the build ray (the lower envelope of the ray family)
  for (std::size_t k = 0; k < rwn.path.ts.size(); ++k)
    CHECK((rwn.path.primals[k].v - build.path.primals[k].v).maxCoeff() <= tol5h());
  // geodesic criterion: energy affine along the rwn ray
  CHECK(max_chord_deviation(rwn.path.ts, rwn.am_profile) <= 1e-2);
}

TEST_CASE("transform of the constructed ray is a fixed point of the envelope") {
  ToricPotential phi = zoo_zero(geom());
  ToricPotential psi = zoo_nu(geom(), 0.3);
  RayApprox ray = build_ray(phi, psi, dyadic_schedule(1.0, 1048576.0), ts(), window(),
                            tol5h());
  for (double tau : {0.0, -0.5}) {
    ToricPotential star = ray_legendre(ray, tau);
    for (double C : {2.0, 8.0, 32.0}) {
      ToricPotential env = p_pair(star, C, phi, window());
      CHECK(sup_dist(env, star, window()) <= tol5h());
    }
  }
}

TEST_CASE("roundtrip: transforming the rwn ray recovers the maximized curve") {
  ToricPotential phi = zoo_zero(geom());
  ToricPotential psi = zoo_nu(geom(), 0.3);
  RwnRay rwn = rwn_ray(phi, psi, default_tau_samples(129), ts(), window(), csched());
  for (std::size_t i = 0; i < rwn.curve.taus.size(); i += 16) {
    if (!rwn.curve.duals[i].has_value()) continue;
    ToricPotential expect(geom(), *rwn.curve.duals[i]);
    ToricPotential got = ray_legendre(rwn.path, rwn.curve.taus[i]);
    CHECK(sup_dist(got, expect, window()) <= 10 * window().h());
  }
}

TEST_CASE("mismatched sampling is rejected") {
  ToricPotential phi = zoo_zero(geom());
  GeodesicPath a = segment(phi, shifted(phi, -1.0), uniform_samples(0, 1, 9), window());
  GeodesicPath b = segment(phi, shifted(phi, -1.0), uniform_samples(0, 1, 17), window());
  CHECK_THROWS(compare_rays(a, b));
}
