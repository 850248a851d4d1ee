#pragma once

#include <vector>

#include "martinet/form.hpp"

namespace martinet {

// Moser path data for a pair of closed 2-forms omega_0, omega_1 joined by
// omega_t = omega_0 + t (omega_1 - omega_0). The time-dependent field solving
//   V_t interior omega_t = -lambda,    d(lambda) = omega_1 - omega_0,
// is recovered from V interior Omega = -n lambda ^ omega_t^(n-1) / f_t where
// Omega is the coordinate volume and f_t the volume density of omega_t. The
// common factor of f_t that vanishes on the degeneracy locus is divided out of
// numerator and denominator symbolically, so the stored data is polynomial and
// the field extends across the locus.
struct MoserField {
  Chart chart;
  // num[i][k]: t^k coefficient of (component i of V) * den.
  std::vector<std::vector<TruncatedPoly>> num;
  // den[k]: t^k coefficient of f_t / divisor.
  std::vector<TruncatedPoly> den;
  TruncatedPoly divisor;  // factor divided out (a unit constant when none)
  TruncatedPoly locus;    // equation of the set the flow must preserve
  DiffForm omega0, omega1;
};

// Core builder. Requires d(lambda) == omega1 - omega0 and exact divisibility
// of every numerator coefficient and of the path volume density by `divisor`.
MoserField moser_field(const DiffForm& omega0, const DiffForm& omega1, const DiffForm& lambda,
                       const TruncatedPoly& divisor, const TruncatedPoly& locus);

// Difference d(x_pivot^2 beta): the primitive is found by the relative
// integration lemma and the flow fixes {x_pivot = 0} pointwise.
MoserField moser_collar_field(const DiffForm& omega0, const DiffForm& omega1, int pivot = 0);

// Both forms decompose over the same restriction with the same quadratic
// remainder; the path slides one kernel frame onto the other and preserves
// the degeneracy hyperplane as a set.
MoserField moser_frame_field(const DiffForm& omega0, const DiffForm& omega1);

// Volume-prescribed pair: the difference has a primitive with coefficients in
// the ideal of the density, which is the factor divided out.
MoserField moser_volume_field(const DiffForm& omega0, const DiffForm& omega1);

struct FlowOptions {
  int grid = 5;             // sample points per axis
  int steps = 200;          // RK4 steps from t = 0 to 1
  double box = 0.1;         // half-width of the sampling cube
  double tol = 1e-6;        // residual acceptance threshold
  double locus_tol = 1e-9;  // allowed motion of the degeneracy locus
  double den_floor = 1e-9;  // abort a trajectory when |den| drops below this
  unsigned long long seed = 0;  // nonzero: jitter off-locus coordinates
};

struct FlowPoint {
  std::vector<double> start;
  std::vector<double> end;
  // max-abs entry of (DPhi)^T M(omega1)(Phi(x)) DPhi - M(omega0)(x)
  double residual = 0.0;
  double locus_drift = 0.0;  // |locus(end)| for starts on the locus
  bool failed = false;       // denominator underflow or non-finite state
};

struct FlowReport {
  bool verified = false;
  double max_residual = 0.0;
  double max_locus_drift = 0.0;
  int points = 0;
  int locus_points = 0;
  int failures = 0;
  FlowPoint worst;  // the sample with the largest residual
};

// Integrates the field over a grid in the box, transports frames by the
// variational equation, and checks that the time-1 map pulls omega1 back to
// omega0 within tolerance while keeping the locus in place.
FlowReport verify_flow(const MoserField& field, const FlowOptions& opt = {});

}  // namespace martinet
