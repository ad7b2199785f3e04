#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tkray/energy.hpp"

#include <cmath>

using namespace tkray;

namespace {
const int kN = 512;
auto geom() {
  static auto g = ToricGeometry::make_dim1(kN);
  return g;
}
Grid1D window() { return log_window(40.0, 2048); }
std::vector<double> lsched() { return dyadic_schedule(1.0, 64.0); }
}  // namespace

TEST_CASE("energy of the reference and of constants") {
  CHECK(am(zoo_zero(geom())) == doctest::Approx(0.0).epsilon(1e-14));
  for (double c : {-2.0, 0.5, 7.0})
    CHECK(am(zoo_const(geom(), c)) == doctest::Approx(c).epsilon(1e-12));
  CHECK_THROWS(am(zoo_nu(geom(), 0.3)));
  CHECK_THROWS(am(zoo_einf(geom())));
}

TEST_CASE("shift rule to quadrature precision") {
  ToricPotential pot = zoo_bump(geom(), 17);
  double base = am(pot);
  for (double c : {-3.0, 1.0, 7.0})
    CHECK(am(shifted(pot, c)) == doctest::Approx(base + c).epsilon(1e-12));
}

TEST_CASE("two independent energy formulas agree") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    ToricPotential pot = zoo_bump(geom(), 500 + seed);
    AmMixedResult mixed = am_mixed(pot, window());
    CHECK(std::abs(am(pot) - mixed.value) <= 5e-3);
    CHECK(mixed.tail_bound <= 1e-6);
  }
  // and the constant anchors
  AmMixedResult c0 = am_mixed(zoo_const(geom(), -2.0), window());
  CHECK(c0.value == doctest::Approx(-2.0).epsilon(1e-9));
}

TEST_CASE("difference form provides a third route") {
  ToricPotential u = zoo_bump(geom(), 600);
  ToricPotential v = zoo_bump(geom(), 601);
  double direct = am(u) - am(v);
  CHECK(std::abs(direct - am_difference_form(u, v, window())) <= 5e-3);
}

TEST_CASE("energy is monotone and strictly dominating") {
  ToricPotential phi = zoo_bump(geom(), 700);
  ToricPotential lower = shifted(phi, -0.25);
  CHECK(am(phi) - am(lower) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(am(phi) >= am(lower));
}

TEST_CASE("nonpositive energy bounds") {
  // constants first: (-2, -2, -1)
  ToricPotential c2 = zoo_const(geom(), -2.0);
  AmBounds b = am_bounds_check(c2, window());
  CHECK(b.ok);
  CHECK(b.lhs == doctest::Approx(-2.0).epsilon(1e-6));
  CHECK(b.mid == doctest::Approx(-2.0).epsilon(1e-6));
  CHECK(b.rhs == doctest::Approx(-1.0).epsilon(1e-6));
  // zero potential: all zero
  AmBounds z = am_bounds_check(zoo_zero(geom()), window());
  CHECK(z.ok);
  CHECK(std::abs(z.mid) <= 1e-9);
  // random nonpositive bumps
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    ToricPotential pot = zoo_bump(geom(), 800 + seed);
    TildeView tv = tilde_view(pot, window());
    AmBounds r = am_bounds_check(shifted(pot, -tv.sup()), window());
    CHECK(r.ok);
  }
  // positive part rejected
  CHECK_THROWS(am_bounds_check(zoo_const(geom(), 1.0), window()));
}

TEST_CASE("cutoff slope: bounded potentials have c = 0") {
  ToricPotential base = zoo_zero(geom());
  EnergyReport rep = c_both(zoo_const(geom(), -5.0), base, lsched(), window());
  CHECK(std::abs(*rep.c_energy_slope) <= 1e-6);
  CHECK(std::abs(*rep.c_mass_deficit) <= 1e-6);
}

TEST_CASE("cutoff slope of a vertex singularity by both routes") {
  ToricPotential base = zoo_zero(geom());
  for (double nu : {0.1, 0.3, 0.6}) {
    EnergyReport rep = c_both(zoo_nu(geom(), nu), base, lsched(), window());
    CHECK(*rep.c_energy_slope == doctest::Approx(-nu / 2).epsilon(0.034));
    CHECK(std::abs(*rep.c_energy_slope + nu / 2) <= 1e-2);
    CHECK(std::abs(*rep.c_energy_slope - *rep.c_mass_deficit) <= 1e-2);
  }
}

TEST_CASE("cutoff slope of the full-mass unbounded potential vanishes") {
  ToricPotential base = zoo_zero(geom());
  EnergyReport rep = c_both(zoo_einf(geom()), base, lsched(), window());
  CHECK(std::abs(*rep.c_energy_slope) <= 1e-3);
  CHECK(std::abs(*rep.c_mass_deficit) <= 1e-3);
}

TEST_CASE("cutoff slope is base independent") {
  ToricPotential zero = zoo_zero(geom());
  ToricPotential bump = zoo_bump(geom(), 900);
  ToricPotential psi = zoo_nu(geom(), 0.3);
  EnergyReport a = c_of(psi, CMethod::energy_slope, zero, lsched(), window());
  EnergyReport b = c_of(psi, CMethod::energy_slope, bump, lsched(), window());
  CHECK(std::abs(*a.c_energy_slope - *b.c_energy_slope) <= 2e-3);
}

TEST_CASE("cutoff energies are convex decreasing; ratios stay in [-1, 0]") {
  ToricPotential base = zoo_zero(geom());
  for (auto kind : {std::string("nu"), std::string("einf")}) {
    ToricPotential psi = kind == "nu" ? zoo_nu(geom(), 0.3) : zoo_einf(geom());
    EnergyReport rep = c_of(psi, CMethod::energy_slope, base, lsched(), window());
    std::vector<double> ams;
    for (const auto& row : rep.per_l) ams.push_back(row[1] * row[0]);  // am values
    for (std::size_t k = 1; k < ams.size(); ++k) CHECK(ams[k] <= ams[k - 1] + 1e-12);
    for (std::size_t k = 2; k < ams.size(); ++k) {
      double l0 = rep.per_l[k - 2][0], l1 = rep.per_l[k - 1][0], l2 = rep.per_l[k][0];
      double lam = (l1 - l0) / (l2 - l0);
      double chord = (1 - lam) * ams[k - 2] + lam * ams[k];
      CHECK(ams[k - 1] <= chord + 1e-12);  // convex in l
    }
    // the mean-slope ratios anchor at 0 and increase toward the limit
    for (std::size_t k = 0; k < rep.per_l.size(); ++k) {
      CHECK(rep.per_l[k][1] <= 1e-12);
      CHECK(rep.per_l[k][1] >= -1.0 - 1e-12);
      if (k) CHECK(rep.per_l[k][1] >= rep.per_l[k - 1][1] - 1e-12);
    }
    CHECK(*rep.c_energy_slope <= 0.0);
    CHECK(*rep.c_energy_slope >= -1.0);
  }
}

TEST_CASE("schedule too short is rejected") {
  ToricPotential base = zoo_zero(geom());
  CHECK_THROWS(c_of(zoo_nu(geom(), 0.3), CMethod::energy_slope, base, {1.0, 2.0},
                    window()));
}

TEST_CASE("class membership flags") {
  EClassReport z = is_in_E(zoo_zero(geom()), window(), lsched());
  CHECK(z.in_e);
  CHECK(z.consistent);
  EClassReport n = is_in_E(zoo_nu(geom(), 0.3), window(), lsched());
  CHECK(!n.in_e);
  CHECK(n.consistent);
  CHECK(n.deficit == doctest::Approx(0.3).epsilon(0.02));
  EClassReport e = is_in_E(zoo_einf(geom()), window(), lsched());
  CHECK(e.in_e);
  CHECK(e.consistent);
}
