#pragma once

#include "tkray/envelopes.hpp"
#include "tkray/ray.hpp"

namespace tkray {

// Legendre transform of rays in t, test curves, and the maximized-test-curve
// ray construction.
//
// tau-transforms are computed on the dual side: sup over t-samples of
// (dual_t + t tau).  Nodes where the sup is still strictly increasing at the
// last sample diverge as t -> infinity and are marked +inf (the monotone
// trend); a curve whose every node diverges is BOTTOM (identically -inf).
struct TestCurve {
  std::vector<double> taus;
  std::vector<std::optional<ExtGridFn>> duals;  // nullopt = BOTTOM
  double c_bound;  // curve equals phi for tau <= -c_bound, BOTTOM above ~0
};

// phi*_tau = inf_t (phi_t - t tau) of a sampled path; +inf (trend) marking as
// above.  Returns nullopt when every node diverges (BOTTOM).
std::optional<ExtGridFn> ray_legendre_dual(const std::vector<double>& ts,
                                           const std::vector<ExtGridFn>& duals, double tau);
ToricPotential ray_legendre(const GeodesicPath& path, double tau);
ToricPotential ray_legendre(const RayApprox& ray, double tau);

// gamma*_tau for gamma_t = max(phi - t, psi) over an internal t-grid
// ([0, t_max] uniform; t_max adapts to the Lelong depth nu * L so the
// transform saturates inside the window).
TestCurve test_curve(const ToricPotential& phi, const ToricPotential& psi,
                     const std::vector<double>& taus, const Grid1D& window,
                     int t_count = 129);

struct RwnRay {
  ToricPotential phi;
  ToricPotential psi;
  TestCurve curve;                      // the maximized curve P_[gamma*_tau](phi)
  GeodesicPath path;
  std::vector<double> am_profile;
};
// Maximize the test curve with p_bracket per tau, then invert the transform:
// dual_t = closed hull of inf over tau of (dual(psi~_tau) - t tau).
RwnRay rwn_ray(const ToricPotential& phi, const ToricPotential& psi,
               const std::vector<double>& taus, const std::vector<double>& ts,
               const Grid1D& window, const std::vector<double>& c_schedule);

struct RayDistance {
  double primal_gap;  // max over samples and window nodes
  double dual_gap;    // max over samples and finite dual nodes
};
RayDistance compare_rays(const GeodesicPath& a, const GeodesicPath& b);

std::vector<double> default_tau_samples(int count = 65, double lo = -1.5, double hi = 0.25);

}  // namespace tkray
