#pragma once

#include "tkray/energy.hpp"

namespace tkray {

// Psh envelopes.  proj(b0) is the largest potential below an obstacle;
// p_bracket is the singularity-type envelope computed along two independent
// routes (the finite-C iteration and the dual-domain closed form), whose
// agreement is a standing regression check.
struct EnvelopeResult {
  ToricPotential result;               // the closed-form route (reference)
  ToricPotential iterated;             // the C-iteration route
  std::vector<double> c_schedule;
  std::optional<double> stabilization_c;  // first C with successive iterates <= 1e-9
  double closed_form_gap;              // sup-node primal distance between routes
};

// Largest potential <= b0: conjugate of (f0 + b0) restricted to the polytope,
// then back.  Rejects obstacles with no admissible minorant.
ToricPotential proj(const ObstacleFn& b0, std::shared_ptr<const ToricGeometry> geom);

// P(psi + c, phi) = proj of the pointwise min of the two obstacles.
ToricPotential p_pair(const ToricPotential& psi, double c, const ToricPotential& phi,
                      const Grid1D& window);

EnvelopeResult p_bracket(const ToricPotential& psi, const ToricPotential& phi,
                         const std::vector<double>& c_schedule, const Grid1D& window);

struct ECheckReport {
  bool in_e;
  double gap;        // sup-node |P_[psi](phi)~ - phi~| over the window
  bool verdict_ok;   // gap behaviour matches the class-E verdict
  double expected_edge_gap;  // for the not-in-E branch
};
// Hard-errors (std::runtime_error) when the class verdict and the envelope
// gap disagree beyond tolerance: that signals a dictionary or envelope bug.
ECheckReport e_check(const ToricPotential& psi, const ToricPotential& phi,
                     const Grid1D& window);

// integral |P_[psi](phi)~ - phi~| dMA(P_[psi](phi)) over the window; the
// envelope's measure concentrates where it touches the obstacle.
double maximality_defect(const ToricPotential& psi, const ToricPotential& phi,
                         const Grid1D& window);

}  // namespace tkray
