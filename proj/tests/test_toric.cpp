#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tkray/energy.hpp"
#include "tkray/toric.hpp"

#include <cmath>

using namespace tkray;

namespace {
const int kN = 512;
auto geom() {
  static auto g = ToricGeometry::make_dim1(kN);
  return g;
}
Grid1D window() { return log_window(40.0, 2048); }
}  // namespace

TEST_CASE("reference potential evaluates to zero") {
  ToricPotential zero = zoo_zero(geom());
  TildeView tv = tilde_view(zero, window());
  CHECK(tv.values.abs().maxCoeff() <= 1e-12);
  CHECK(tv.left_limit == doctest::Approx(0.0));
  CHECK(tv.right_limit == doctest::Approx(0.0));
}

TEST_CASE("constant shift moves the window values") {
  ToricPotential c3 = zoo_const(geom(), -3.0);
  TildeView tv = tilde_view(c3, window());
  CHECK((tv.values + 3.0).abs().maxCoeff() <= 1e-12);
  CHECK(tv.sup() == doctest::Approx(-3.0));
}

TEST_CASE("vertex-singular potential has the declared asymptotic slope") {
  ToricPotential psi = zoo_nu(geom(), 0.3);
  PrimalFunction f = to_primal(psi, window(), TailPolicy::strict);
  double nu = psi.dual.dom_lo();
  CHECK(nu == doctest::Approx(0.3).epsilon(1e-2));
  // asymptote fit on the relative values: phi~(x)/x -> nu as x -> -inf
  PrimalFunction f0 = legendre_inv(geom()->g0, window());
  double x1 = window().node(10);
  double t1 = f.v[10] - f0.v[10];
  CHECK(t1 / x1 == doctest::Approx(nu).epsilon(2 * window().h()));
}

TEST_CASE("full-mass unbounded potential decays sublinearly") {
  ToricPotential psi = zoo_einf(geom());
  CHECK_THROWS(to_primal(psi, window(), TailPolicy::strict));
  PrimalFunction f = to_primal(psi, window(), TailPolicy::lenient);
  PrimalFunction f0 = legendre_inv(geom()->g0, window());
  // phi~(x) ~ -2 sqrt(|x|) (entropy correction decays slowly); local slope
  // must shrink like 1/sqrt(|x|) rather than settle at a line
  double prev_ratio = kInf;
  for (double x : {-16.0, -25.0, -36.0}) {
    int i = window().floor_index(x);
    double tilde = f.v[i] - f0.v[i];
    CHECK(tilde / (-2.0 * std::sqrt(-x)) == doctest::Approx(1.0).epsilon(0.15));
    double ratio = tilde / x;  // secant slope to the origin
    CHECK(ratio < prev_ratio);
    prev_ratio = ratio;
  }
  CHECK(lelong(psi, Vertex::low) <= geom()->polytope.h() + 1e-12);
}

TEST_CASE("toric max agrees with the primal-side pointwise max") {
  ToricPotential a = shifted(zoo_bump(geom(), 42), -3.0);
  ToricPotential b = zoo_nu(geom(), 0.4);
  ToricPotential mx = toric_max(a, b);
  PrimalFunction fa = to_primal(a, window(), TailPolicy::lenient);
  PrimalFunction fb = to_primal(b, window(), TailPolicy::lenient);
  PrimalFunction fm = to_primal(mx, window(), TailPolicy::lenient);
  Array expect = fa.v.max(fb.v);
  CHECK((fm.v - expect).abs().maxCoeff() <= 2 * window().h());
  // max dominates both arguments
  CHECK((fa.v - fm.v).maxCoeff() <= 1e-10);
  CHECK((fb.v - fm.v).maxCoeff() <= 1e-10);
  // trivial cases
  ToricPotential same = toric_max(a, a);
  CHECK((same.dual.v - a.dual.v).abs().maxCoeff() <= 1e-12);
  ToricPotential lower = toric_max(a, shifted(a, -1.0));
  CHECK((lower.dual.v - a.dual.v).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("cutoff behaves like the canonical truncation") {
  ToricPotential zero = zoo_zero(geom());
  // bounded psi, large l: inactive
  ToricPotential psi = zoo_const(geom(), -5.0);
  ToricPotential cut = cutoff(psi, 30.0, zero);
  CHECK((cut.dual.v - psi.dual.v).abs().maxCoeff() <= 1e-12);
  // constants: max(-3, -5) = -3
  ToricPotential cut3 = cutoff(psi, 3.0, zero);
  CHECK((cut3.dual.v - zoo_const(geom(), -3.0).dual.v).abs().maxCoeff() <= 1e-12);
  // singular psi: affine chord from (0, l + g0(0)) into the symbol
  ToricPotential nu = zoo_nu(geom(), 0.3);
  ToricPotential cl = cutoff(nu, 8.0, zero);
  CHECK(cl.dual.all_finite());
  CHECK(cl.dual.v[0] == doctest::Approx(8.0).epsilon(1e-12));
  // monotone decreasing to psi as l grows
  TildeView t8 = tilde_view(cl, window());
  TildeView t16 = tilde_view(cutoff(nu, 16.0, zero), window());
  TildeView tpsi = tilde_view(nu, window());
  CHECK((t16.values - t8.values).maxCoeff() <= 1e-10);
  CHECK((tpsi.values - t16.values).maxCoeff() <= 1e-10);
}

TEST_CASE("measure masses track the dual domain") {
  Grid1D w = window();
  double h = geom()->polytope.h();
  MeasureReport zero_m = ma_measure(zoo_zero(geom()), w);
  CHECK(std::abs(zero_m.mass - 1.0) <= h);
  MeasureReport bump_m = ma_measure(zoo_bump(geom(), 3), w);
  CHECK(std::abs(bump_m.mass - 1.0) <= h);
  MeasureReport nu_m = ma_measure(zoo_nu(geom(), 0.3), w);
  CHECK(std::abs(nu_m.mass - 0.7) <= h + 1e-12);
  CHECK(nu_m.deficit == doctest::Approx(0.3).epsilon(0.02));
  CHECK(nu_m.density.minCoeff() >= 0.0);
  MeasureReport einf_m = ma_measure(zoo_einf(geom()), w);
  CHECK(einf_m.deficit <= h + 1e-12);
}

TEST_CASE("Lelong numbers at the fixed points") {
  CHECK(lelong(zoo_bump(geom(), 5), Vertex::low) == 0.0);
  CHECK(lelong(zoo_bump(geom(), 5), Vertex::high) == 0.0);
  ToricPotential nu = zoo_nu(geom(), 0.3);
  CHECK(lelong(nu, Vertex::low) == doctest::Approx(0.3).epsilon(1e-2));
  CHECK(lelong(nu, Vertex::high) == 0.0);
  // class invariance: combining with a worse singularity at any shift keeps
  // the milder Lelong number
  for (double C : {5.0, 20.0}) {
    ToricPotential pert = toric_max(shifted(nu, -C), shifted(zoo_nu(geom(), 0.6), -1.0));
    CHECK(lelong(pert, Vertex::low) == lelong(nu, Vertex::low));
  }
  // a bounded floor makes the potential bounded (zero Lelong number), but the
  // window asymptote still fits nu while the floor is out of reach
  ToricPotential floored = toric_max(nu, zoo_const(geom(), -25.0));
  CHECK(lelong(floored, Vertex::low) == 0.0);
  PrimalFunction f = to_primal(floored, window(), TailPolicy::lenient);
  double fit = (f.v[20] - f.v[4]) / (window().node(20) - window().node(4));
  CHECK(fit == doctest::Approx(0.3).epsilon(2 * window().h()));
}

TEST_CASE("order reversal through the dictionary") {
  ToricPotential a = zoo_bump(geom(), 8);
  ToricPotential b = shifted(a, -2.0);
  CHECK(leq(b, a));
  CHECK(!leq(a, b));
  CHECK(!leq(zoo_zero(geom()), zoo_nu(geom(), 0.2)));
  CHECK(leq(zoo_nu(geom(), 0.2), zoo_zero(geom())));
}

TEST_CASE("dim-2 smoke: masses and energy") {
  auto g2 = ToricGeometry::make_dim2(32);
  ToricPotential zero = zoo_zero(g2);
  CHECK(std::abs(ma_mass_2d(zero) - 1.0) <= 0.1);
  CHECK(std::abs(am(zero)) <= 1e-12);
  ToricPotential c2 = zoo_const(g2, -1.5);
  CHECK(am(c2) == doctest::Approx(-1.5).epsilon(0.02));
  ToricPotential mx = toric_max(zero, c2);
  CHECK(am(mx) == doctest::Approx(0.0).epsilon(0.02));
}
