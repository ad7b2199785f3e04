#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tkray/ray.hpp"

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
std::vector<double> big_sched() { return dyadic_schedule(1.0, 1048576.0); }
std::vector<double> ts() { return uniform_samples(0.0, 8.0, 17); }

RayApprox make(const ToricPotential& phi, const ToricPotential& psi) {
  return build_ray(phi, psi, big_sched(), ts(), window(), tol5h());
}
}  // namespace

TEST_CASE("bounded psi gives the constant ray") {
  ToricPotential phi = zoo_zero(geom());
  RayApprox ray = make(phi, shifted(phi, -1.0));
  CHECK(ray.converged);
  CHECK(ray.monotone_violation <= 1e-9);
  CHECK(ray_constant(ray));
  for (std::size_t k = 0; k < ray.ts.size(); ++k)
    CHECK(sup_dist(ToricPotential(geom(), ray.path.duals[k]), phi, window()) <= tol5h());
}

TEST_CASE("full-mass unbounded psi gives the constant ray") {
  ToricPotential phi = zoo_zero(geom());
  RayApprox ray = make(phi, zoo_einf(geom()));
  CHECK(ray.converged);
  CHECK(ray.monotone_violation <= 1e-9);
  CHECK(ray_constant(ray));
}

TEST_CASE("vertex singularity gives a normalized non-constant ray") {
  ToricPotential phi = zoo_zero(geom());
  ToricPotential psi = zoo_nu(geom(), 0.3);
  RayApprox ray = make(phi, psi);
  CHECK(ray.converged);
  CHECK(!ray_constant(ray));
  CHECK(std::abs(ray.path.M) <= tol5h());
  CHECK(std::abs(ray.path.m + 1.0) <= tol5h());
  CHECK(v_infinity_lelong(ray) <= 0.3 + 2 * geom()->polytope.h());
  // against a coarse-schedule run: the family increases toward the limit
  RayApprox coarse = build_ray(phi, psi, dyadic_schedule(1.0, 128.0), ts(), window(),
                               /*gap_tol=*/1.0);
  for (std::size_t k = 0; k < ray.ts.size(); ++k) {
    double above =
        (coarse.path.primals[k].v - ray.path.primals[k].v).maxCoeff();
    CHECK(above <= 1e-9);
  }
}

TEST_CASE("energy along the ray is am(phi) + c t") {
  ToricPotential phi = zoo_zero(geom());
  ToricPotential psi = zoo_nu(geom(), 0.3);
  RayApprox ray = make(phi, psi);
  EnergyReport cr = c_of(psi, CMethod::energy_slope, phi, big_sched(), window());
  double c = *cr.c_energy_slope;
  CHECK(c == doctest::Approx(-0.15).epsilon(0.05));
  for (std::size_t k = 0; k < ray.ts.size(); ++k)
    CHECK(std::abs(ray.am_profile[k] - (am(phi) + c * ray.ts[k])) <= 1e-2);
  RayEnergyProfile prof = ray_energy_profile(ray);
  CHECK(prof.slope == doctest::Approx(c).epsilon(1e-2));
  CHECK(prof.intercept == doctest::Approx(am(phi)).epsilon(5e-3));
}

TEST_CASE("sandwich and monotonicity in t") {
  ToricPotential phi = zoo_bump(geom(), 270);
  ToricPotential psi = shifted(zoo_nu(geom(), 0.4), -1.0);
  // enforce ordering
  REQUIRE(leq(psi, phi));
  RayApprox ray = make(phi, psi);
  for (std::size_t k = 0; k < ray.ts.size(); ++k) {
    const Array& g = ray.path.duals[k].v;
    CHECK((phi.dual.v - g).maxCoeff() <= 1e-9);  // v_t <= phi
    if (ray.ts[k] > 0) {
      Array gam = cutoff(psi, ray.ts[k], phi).dual.v;
      CHECK((g - gam).maxCoeff() <= 1e-9);  // v_t >= gamma_t
    }
    if (k > 0)
      CHECK((ray.path.duals[k - 1].v - g).maxCoeff() <= 1e-9);  // decreasing
  }
}

TEST_CASE("membership report") {
  ToricPotential phi = zoo_zero(geom());
  RayApprox ray = make(phi, zoo_nu(geom(), 0.3));
  RayApprox competitor = make(phi, zoo_nu(geom(), 0.2));
  MembershipReport rep = membership_check(ray, &competitor.path);
  CHECK(rep.emanates);
  CHECK(rep.floor_ok);
  CHECK(rep.normalized_ok);
  CHECK(rep.competitor_valid);
  CHECK(rep.below_competitor);
  // an invalid competitor (wrong start) is rejected, not the ray
  RayApprox bad = make(shifted(phi, -1.0), shifted(zoo_nu(geom(), 0.2), -1.0));
  MembershipReport rep2 = membership_check(ray, &bad.path);
  CHECK(!rep2.competitor_valid);
}

TEST_CASE("tri-equivalence across the zoo") {
  ToricPotential phi = zoo_zero(geom());
  struct Case {
    ToricPotential psi;
    bool in_e;
  };
  std::vector<Case> cases = {{zoo_const(geom(), -5.0), true},
                             {zoo_nu(geom(), 0.1), false},
                             {zoo_nu(geom(), 0.6), false},
                             {zoo_einf(geom()), true}};
  for (auto& [psi, expect] : cases) {
    RayApprox ray = make(phi, psi);
    bool constant = ray_constant(ray);
    bool in_e = is_in_E(psi, window(), dyadic_schedule(1.0, 64.0)).in_e;
    EnergyReport cr = c_of(psi, CMethod::energy_slope, phi, big_sched(), window());
    bool c_zero = std::abs(*cr.c_energy_slope) <= kTolC;
    CHECK(constant == expect);
    CHECK(in_e == expect);
    CHECK(c_zero == expect);
  }
}

TEST_CASE("preconditions") {
  ToricPotential phi = zoo_zero(geom());
  CHECK_THROWS(build_ray(phi, shifted(phi, 1.0), big_sched(), ts(), window(), 1.0));
  CHECK_THROWS(build_ray(zoo_nu(geom(), 0.2), zoo_nu(geom(), 0.3), big_sched(), ts(),
                         window(), 1.0));  // unbounded phi
}
