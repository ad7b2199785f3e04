#include "tkray/energy.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace tkray {

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// Node-lumped Monge-Ampere masses of a window primal: interior kinks plus the
// tail-to-edge jumps lumped at the edge nodes.
Array node_masses(const PrimalFunction& f) {
  const Grid1D& w = f.window;
  double h = w.h();
  Array m = Array::Zero(w.nodes());
  for (int i = 1; i < w.cells; ++i)
    m[i] = std::max(0.0, f.v[i - 1] - 2.0 * f.v[i] + f.v[i + 1]) / h;
  m[0] = std::max(0.0, f.edge_slope_left() - f.tails.left);
  m[w.cells] = std::max(0.0, f.tails.right - f.edge_slope_right());
  return m;
}

double simplex_integral(const ToricGeometry& geom, const ExtGridFn2& f) {
  // cell-averaged integral over the masked box; half-weight for diagonal cells
  const Grid2D& g = *geom.polytope2;
  double hx = g.gx.h(), hy = g.gy.h();
  double total = 0.0;
  for (int i = 0; i + 1 < g.gx.nodes(); ++i)
    for (int j = 0; j + 1 < g.gy.nodes(); ++j) {
      double c[4] = {f.v(i, j), f.v(i + 1, j), f.v(i, j + 1), f.v(i + 1, j + 1)};
      int fin = 0;
      double s = 0.0;
      for (double x : c)
        if (x < kInf) {
          ++fin;
          s += x;
        }
      if (fin == 4)
        total += hx * hy * s / 4.0;
      else if (fin == 3)
        total += 0.5 * hx * hy * s / 3.0;
    }
  return total;
}

}  // namespace

double am(const ToricPotential& pot) {
  const ToricGeometry& geom = *pot.geom;
  if (geom.dim == 2) {
    Eigen::ArrayXXd diff = pot.dual2->v - geom.g0_2->v;
    for (Eigen::Index i = 0; i < diff.rows(); ++i)
      for (Eigen::Index j = 0; j < diff.cols(); ++j)
        if (!std::isfinite(diff(i, j))) {
          require(geom.g0_2->v(i, j) == kInf && pot.dual2->v(i, j) == kInf,
                  "am: unbounded potential, take cutoffs first");
          diff(i, j) = kInf;  // off-mask
        }
    ExtGridFn2 d(*geom.polytope2, std::move(diff));
    return -factorial(geom.dim) * simplex_integral(geom, d);
  }
  require(pot.dual.all_finite(), "am: unbounded potential, take cutoffs first");
  const Grid1D& P = geom.polytope;
  Array diff = pot.dual.v - geom.g0.v;
  double trap = 0.0;
  for (int i = 0; i < P.cells; ++i) trap += 0.5 * (diff[i] + diff[i + 1]) * P.h();
  return -factorial(geom.dim) * trap;
}

AmMixedResult am_mixed(const ToricPotential& pot, const Grid1D& window, double tail_tol) {
  require(pot.geom->dim == 1, "am_mixed: dim 1 only");
  require(pot.dual.all_finite(), "am_mixed: bounded potentials only");
  PrimalFunction f = to_primal(pot, window, TailPolicy::strict);
  PrimalFunction f0 = legendre_inv(pot.geom->g0, window);
  Array tilde = f.v - f0.v;
  Array m0 = node_masses(f0);
  Array mf = node_masses(f);
  double value = 0.5 * ((tilde * m0).sum() + (tilde * mf).sum());
  double tail_bound = 2.0 * tilde.abs().maxCoeff() * std::exp(-window.hi);
  if (tail_bound > tail_tol) {
    std::ostringstream os;
    os << "am_mixed: tail bound " << tail_bound << " exceeds tolerance; need window"
       << " half-width >= " << std::log(2.0 * tilde.abs().maxCoeff() / tail_tol);
    throw std::invalid_argument(os.str());
  }
  return AmMixedResult{value, tail_bound};
}

double am_difference_form(const ToricPotential& u, const ToricPotential& v,
                          const Grid1D& window) {
  require(u.geom == v.geom && u.geom->dim == 1, "am_difference_form: dim-1 pair");
  PrimalFunction fu = to_primal(u, window, TailPolicy::strict);
  PrimalFunction fv = to_primal(v, window, TailPolicy::strict);
  Array diff = fu.v - fv.v;
  Array mu = node_masses(fu);
  Array mv = node_masses(fv);
  return 0.5 * ((diff * mu).sum() + (diff * mv).sum());
}

AmBounds am_bounds_check(const ToricPotential& pot, const Grid1D& window) {
  require(pot.geom->dim == 1, "am_bounds_check: dim 1 only");
  TildeView tv = tilde_view(pot, window);
  require(tv.sup() <= 1e-12, "am_bounds_check: potential has a positive part");
  PrimalFunction f = to_primal(pot, window, TailPolicy::strict);
  PrimalFunction f0 = legendre_inv(pot.geom->g0, window);
  Array tilde = f.v - f0.v;
  Array mf = node_masses(f);
  double lhs = (tilde * mf).sum();
  double mid = am(pot);
  double rhs = lhs / 2.0;
  double mixed = am_mixed(pot, window).value;
  double slack = 1e-6 + 2.0 * std::abs(mid - mixed) + 1e-12;
  bool ok = lhs <= mid + slack && mid <= rhs + slack;
  return AmBounds{lhs, mid, rhs, ok, slack};
}

double extrapolate_limit(const std::vector<double>& seq) {
  const std::size_t n = seq.size();
  require(n >= 1, "extrapolate_limit: empty sequence");
  if (n == 1) return seq[0];
  double d1 = seq[n - 1] - seq[n - 2];
  if (std::abs(d1) <= 1e-12) return seq[n - 1];
  if (n == 2) return seq[n - 1] + d1;  // assume halving
  double d0 = seq[n - 2] - seq[n - 3];
  double r = (std::abs(d1) > 0) ? d0 / d1 : 2.0;
  if (!(r > 1.1)) r = 2.0;   // non-contracting estimate: fall back to dyadic
  if (r > 32.0) r = 32.0;
  return seq[n - 1] + d1 / (r - 1.0);
}

namespace {

// Sublevel boundary of {psi~ <= base~ - l} on each side, via window values
// and tail lines; returns the boundary abscissa or nullopt when the side has
// no sublevel region.
struct SublevelSides {
  std::optional<double> left;   // region (-inf, left]
  std::optional<double> right;  // region [right, +inf)
};

SublevelSides sublevel_sides(const PrimalFunction& fpsi, const PrimalFunction& fbase,
                             double l) {
  const Grid1D& w = fpsi.window;
  SublevelSides out;
  Array diff = fpsi.v - fbase.v;
  // Boundaries are the exact piecewise-linear crossings of diff with -l (the
  // closed sublevel set includes its boundary, where the cutoff kink and its
  // mass sit).
  {
    int j = -1;
    for (int i = 0; i < w.nodes(); ++i) {
      if (diff[i] <= -l)
        j = i;
      else
        break;
    }
    if (j >= 0) {
      double x = w.node(j);
      if (j + 1 < w.nodes() && diff[j + 1] > -l)
        x += w.h() * ((-l - diff[j]) / (diff[j + 1] - diff[j]));
      out.left = x;
    } else {
      double ds = fpsi.tails.left - fbase.tails.left;
      double doff = fpsi.tail_offset_left - fbase.tail_offset_left;
      if (ds > 0.0) out.left = (-l - doff) / ds;  // tail line crossing, x < lo
    }
  }
  {
    int j = -1;
    for (int i = w.nodes() - 1; i >= 0; --i) {
      if (diff[i] <= -l)
        j = i;
      else
        break;
    }
    if (j >= 0) {
      double x = w.node(j);
      if (j - 1 >= 0 && diff[j - 1] > -l)
        x -= w.h() * ((-l - diff[j]) / (diff[j - 1] - diff[j]));
      out.right = x;
    } else {
      double ds = fpsi.tails.right - fbase.tails.right;
      double doff = fpsi.tail_offset_right - fbase.tail_offset_right;
      if (ds < 0.0) out.right = (-l - doff) / ds;
    }
  }
  return out;
}

double mass_left_of(const ToricPotential& pot, double x) {
  return grad_at(pot, x) - pot.dual.dom_lo();
}
double mass_right_of(const ToricPotential& pot, double x) {
  return pot.dual.dom_hi() - grad_at(pot, x);
}

}  // namespace

EnergyReport c_of(const ToricPotential& psi, CMethod method, const ToricPotential& base,
                  const std::vector<double>& l_schedule, const Grid1D& window) {
  require(psi.geom->dim == 1, "c_of: dim 1 only");
  require(l_schedule.size() >= 3, "c_of: schedule too short (need >= 3 entries)");
  for (std::size_t k = 1; k < l_schedule.size(); ++k)
    require(l_schedule[k] > l_schedule[k - 1], "c_of: schedule must increase");
  require(base.bounded(), "c_of: base must be bounded");

  EnergyReport rep;
  rep.l_schedule = l_schedule;

  if (method == CMethod::energy_slope) {
    std::vector<double> ams;
    ams.reserve(l_schedule.size() + 1);
    double am0 = am(toric_max(base, psi));  // l = 0 anchor
    std::vector<double> secants;
    double prev_l = 0.0, prev_am = am0;
    for (double l : l_schedule) {
      double a = am(cutoff(psi, l, base));
      ams.push_back(a);
      secants.push_back((a - prev_am) / (l - prev_l));
      prev_l = l;
      prev_am = a;
    }
    // secants of the convex decreasing energy increase toward the limit;
    // the extrapolated value is projected into the certain range [-1, 0]
    double c = extrapolate_limit(secants);
    rep.c_energy_slope = std::min(0.0, std::max(-1.0, c));
    for (std::size_t k = 0; k < l_schedule.size(); ++k)
      rep.per_l.push_back({l_schedule[k], ams[k] / l_schedule[k],
                           std::numeric_limits<double>::quiet_NaN()});
  } else {
    PrimalFunction fpsi = to_primal(psi, window, TailPolicy::lenient);
    PrimalFunction fbase = to_primal(base, window, TailPolicy::lenient);
    ToricPotential g0pot = zoo_zero(psi.geom);
    std::vector<double> cs;
    const double nudge = 0.5 * window.h();  // keep the boundary kink inside
    for (double l : l_schedule) {
      ToricPotential gl = cutoff(psi, l, base);
      SublevelSides sides = sublevel_sides(fpsi, fbase, l);
      double w0 = 0.0, w1 = 0.0;
      if (sides.left) {
        w0 += mass_left_of(g0pot, *sides.left + nudge);
        w1 += mass_left_of(gl, *sides.left + nudge);
      }
      if (sides.right) {
        w0 += mass_right_of(g0pot, *sides.right - nudge);
        w1 += mass_right_of(gl, *sides.right - nudge);
      }
      double c_l = -0.5 * (w0 + w1);
      cs.push_back(c_l);
      rep.per_l.push_back({l, std::numeric_limits<double>::quiet_NaN(), c_l});
    }
    double c = extrapolate_limit(cs);
    rep.c_mass_deficit = std::min(0.0, std::max(-1.0, c));
  }
  return rep;
}

EnergyReport c_both(const ToricPotential& psi, const ToricPotential& base,
                    const std::vector<double>& l_schedule, const Grid1D& window) {
  EnergyReport a = c_of(psi, CMethod::energy_slope, base, l_schedule, window);
  EnergyReport b = c_of(psi, CMethod::mass_deficit, base, l_schedule, window);
  EnergyReport out;
  out.l_schedule = l_schedule;
  out.c_energy_slope = a.c_energy_slope;
  out.c_mass_deficit = b.c_mass_deficit;
  for (std::size_t k = 0; k < l_schedule.size(); ++k)
    out.per_l.push_back({l_schedule[k], a.per_l[k][1], b.per_l[k][2]});
  return out;
}

EClassReport is_in_E(const ToricPotential& psi, const Grid1D& window,
                     const std::vector<double>& l_schedule) {
  double deficit = psi.geom->vol - psi.dual.dom_width();
  EnergyReport er =
      c_of(psi, CMethod::energy_slope, zoo_zero(psi.geom), l_schedule, window);
  double c = *er.c_energy_slope;
  double h = psi.geom->polytope.h();
  bool mass_flag = deficit <= h * (1.0 + 1e-9);
  bool c_flag = std::abs(c) <= kTolC;
  return EClassReport{mass_flag && c_flag, deficit, c, mass_flag == c_flag};
}

EClassReport is_in_E(const ToricPotential& psi) {
  return is_in_E(psi, default_window(*psi.geom), dyadic_schedule(1.0, 64.0));
}

std::vector<double> dyadic_schedule(double first, double last) {
  std::vector<double> out;
  for (double l = first; l <= last * (1.0 + 1e-12); l *= 2.0) out.push_back(l);
  return out;
}

Grid1D default_window(const ToricGeometry& geom) {
  return log_window(40.0, 4 * geom.polytope.cells);
}

}  // namespace tkray
