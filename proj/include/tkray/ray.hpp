#pragma once

#include "tkray/geodesic.hpp"

namespace tkray {

// Increasing-segment ray construction: the segments u^l join phi to
// max(phi - l, psi); their monotone l-limit (closed dual hull per t) is the
// ray.  Entries with l < t use the subgeodesic extension max(phi - t, psi),
// which keeps the whole family comparable at every (t, l).
struct RayApprox {
  ToricPotential phi;
  ToricPotential psi;
  Grid1D window;
  std::vector<double> ts;
  std::vector<double> l_schedule;
  GeodesicPath path;          // per-t limit duals/primals
  double monotone_gap;        // sup-node primal increment at the last l-step
  double monotone_violation;  // worst decrease across the family (>= 0)
  bool converged;
  std::vector<double> am_profile;
};

RayApprox build_ray(const ToricPotential& phi, const ToricPotential& psi,
                    const std::vector<double>& l_schedule, const std::vector<double>& ts,
                    const Grid1D& window, double gap_tol);

struct RayEnergyProfile {
  std::vector<double> ts;
  std::vector<double> am;
  double slope;      // least-squares slope of t -> am(v_t)
  double intercept;
  double max_affine_dev;
};
RayEnergyProfile ray_energy_profile(const RayApprox& ray);

struct MembershipReport {
  bool emanates;        // v_t -> phi uniformly as t -> 0 (Lipschitz rate)
  double v0_gap;
  bool floor_ok;        // dual of the last sample <= dual(psi) + tol
  bool normalized_ok;   // constant, or (M, m) = (0, -1) within threshold
  double M;
  double m;
  bool competitor_valid;
  bool below_competitor;
  double competitor_gap;  // max over samples of (v_t - competitor_t)
};
MembershipReport membership_check(const RayApprox& ray, const GeodesicPath* competitor);

bool ray_constant(const RayApprox& ray);

// Lelong number of the t -> inf trend (nodes still increasing at the last
// sample count as divergent).
double v_infinity_lelong(const RayApprox& ray);

}  // namespace tkray
