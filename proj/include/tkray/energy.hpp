#pragma once

#include "tkray/toric.hpp"

#include <array>
#include <optional>
#include <vector>

namespace tkray {

// Monge-Ampere energy and the asymptotic cutoff slope c_psi.
//
// Dual-side formula (dim n): am(phi) = -n! * integral_P (dual(phi) - g0).
// It is exactly affine along dual-affine paths and satisfies the shift rule
// am(phi + c) = am(phi) + c with vol = 1; the mixed primal-measure formula
// am_mixed is the independent oracle it is validated against.
struct EnergyReport {
  std::optional<double> am_dual;
  std::optional<double> am_mixed;
  std::optional<double> two_path_gap;
  std::optional<double> c_energy_slope;
  std::optional<double> c_mass_deficit;
  std::vector<double> l_schedule;
  // per-l rows: {l, am(gamma_l)/l, per-l mass-deficit c estimate (NaN if the
  // method was not run)}
  std::vector<std::array<double, 3>> per_l;
};

double am(const ToricPotential& pot);

struct AmMixedResult {
  double value;
  double tail_bound;  // rigorous window-truncation bound 2 sup|phi~| e^{-L}
};
// dim-1 oracle: (1/2)[ integral phi~ dmu_0 + integral phi~ dmu_phi ] with
// node-lumped kink masses; rejects if the tail bound exceeds `tail_tol`.
AmMixedResult am_mixed(const ToricPotential& pot, const Grid1D& window,
                       double tail_tol = 1e-6);

// Third evaluation path (difference form): pairs the difference of two
// bounded potentials against both measures.
double am_difference_form(const ToricPotential& u, const ToricPotential& v,
                          const Grid1D& window);

struct AmBounds {
  double lhs;  // integral phi~ dMA(phi)
  double mid;  // am(phi), dual formula
  double rhs;  // lhs / (n+1)
  bool ok;
  double slack_used;
};
// For nonpositive bounded potentials: lhs <= mid <= rhs within
// 1e-6 + measured two-path quadrature gap.
AmBounds am_bounds_check(const ToricPotential& pot, const Grid1D& window);

enum class CMethod { energy_slope, mass_deficit };

// c_psi by the requested method over the l-schedule (needs >= 3 entries):
// energy_slope fits the secants of l -> am(cutoff(psi, l, base)) with one
// Richardson step; mass_deficit evaluates the sublevel-mass formula per l and
// extrapolates the same way.
EnergyReport c_of(const ToricPotential& psi, CMethod method, const ToricPotential& base,
                  const std::vector<double>& l_schedule, const Grid1D& window);

// Both methods in one report.
EnergyReport c_both(const ToricPotential& psi, const ToricPotential& base,
                    const std::vector<double>& l_schedule, const Grid1D& window);

struct EClassReport {
  bool in_e;
  double deficit;        // vol - non-pluripolar mass
  double c_energy_slope;
  bool consistent;       // the two criteria agree
};
EClassReport is_in_E(const ToricPotential& psi, const Grid1D& window,
                     const std::vector<double>& l_schedule);
EClassReport is_in_E(const ToricPotential& psi);

std::vector<double> dyadic_schedule(double first, double last);
Grid1D default_window(const ToricGeometry& geom);

// Richardson-style limit of a monotone sequence with geometrically decaying
// increments; falls back to the last value when increments vanish.
double extrapolate_limit(const std::vector<double>& seq);

}  // namespace tkray
