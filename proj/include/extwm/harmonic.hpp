#pragma once

#include <cstddef>
#include <vector>

namespace extwm::harmonic {

// Shooting for the stationary profiles: -Q'' - (2/r)Q' + sin(2Q)/r^2 = 0 on
// r >= 1 with Q(1) = 0, Q'(1) = slope. Integrated in tau = ln r, where it is
// the damped pendulum Q_tt + Q_t = sin 2Q. After any interior turning point
// the damped energy sits below every barrier at k*pi, so the orbit is trapped
// in its current well: turning below the target plateau is a definitive
// undershoot, and crossing n*pi is a definitive overshoot.

enum class ShotClass { undershoot, overshoot, converged };

struct ShootingResult {
  double slope = 0.0;
  ShotClass cls = ShotClass::undershoot;
  int band = 0;       // plateau index the classification refers to
  double r_exit = 0;  // radius where the classification was decided
  // sparse trace (r, Q, rQ')
  std::vector<double> r, Q, W;
};

ShootingResult shoot(double slope, double r_max);

struct HarmonicMap {
  int n = 0;
  double slope = 0.0;       // Q'(1)
  double r_max = 0.0;
  double dtau = 0.0;        // uniform step in tau = ln r
  std::vector<double> Q, W; // W = rQ' = dQ/dtau on the tau grid
  double tail_c = 0.0;      // fitted coefficient of n*pi - Q ~ tail_c / r^2
  double tail_spread = 0.0; // relative flatness of the fit window

  double value(double r) const;      // Q(r)   (cubic Hermite in tau)
  double deriv(double r) const;      // Q'(r)
  double potential(double r) const;  // V(r) = (2/r^2)(cos 2Q - 1)
};

HarmonicMap find_harmonic(int n, double r_max = 2000.0, double dtau = 1e-3);

struct TailFit {
  double c = 0.0;
  double rel_spread = 0.0;  // (max-min)/mean of r^2 (n pi - Q) on the window
};

TailFit tail_fit(const HarmonicMap& q, double R1, double R2);

struct GaugeReport {
  double psi_min = 0.0;        // min of psi = rQ' on [1, 100]
  double lin_residual = 0.0;   // max stencil residual of the psi equation
  double boundary_defect = 0.0;  // phi'(1) + 2 phi(1), phi = Q'
};

GaugeReport linearized_gauge(const HarmonicMap& q);

struct PotentialReport {
  bool nonpositive = false;
  double max_r6V = 0.0;  // max of r^6 |V| over the window
  double min_V = 0.0;
  double V_at_1 = 0.0;
};

PotentialReport potential_report(const HarmonicMap& q, double lo = 10.0,
                                 double hi = 1000.0);

// max over the tau grid of the 4th-order stencil residual of Q_tt + Q_t =
// sin 2Q (equivalent to the radial ODE residual).
double ode_residual(const HarmonicMap& q);

// (1/2) int_1^rmax (Q_r^2 + 2 sin^2 Q / r^2) r^2 dr
double energy(const HarmonicMap& q);

}  // namespace extwm::harmonic
