#pragma once

#include <vector>

#include "extwm/grid.hpp"

namespace extwm::pde {

// Exterior equivariant wave map, r >= 1, Dirichlet psi(1,t) = 0:
//   psi_tt - psi_rr - (2/r) psi_r + sin(2 psi)/r^2 = 0
// and its linearization with potential 2/r^2.

// (1/2) int (psi_dot^2 + psi_r^2 + 2 sin^2 psi / r^2) r^2 dr over the grid,
// split into parts. psi_r by centered differences (one-sided 2nd order at the
// ends).
EnergyReport energy(const WaveState& s);

// same integrand restricted to [R, r_max]
double exterior_tail(const WaveState& s, double R);

struct HardyStraussReport {
  double hardy_ratio = 0.0;  // int psi^2 dr / (4 int psi_r^2 r^2 dr)
  double strauss_sup = 0.0;  // sup_r |psi| r^{1/2} / (2 ||psi||_{H^1})
};

HardyStraussReport hardy_strauss_check(const WaveState& s);

struct Trajectory {
  std::vector<WaveState> snaps;
  std::vector<double> energy_series;  // total energy per snapshot
  double dt = 0.0;
};

// leapfrog (velocity-Verlet) with centered spatial differences; the outer
// value is frozen, so r_max must exceed r_min + t_final + data support for
// clean domain-of-dependence truncation. Requires dt <= h.
Trajectory evolve(const WaveState& s0, double dt, double t_final,
                  std::size_t record_every);

// same scheme for phi_tt - phi_rr - (2/r) phi_r + 2 phi / r^2 = 0
Trajectory evolve_linear(const WaveState& s0, double dt, double t_final,
                         std::size_t record_every);

// u = psi / r pointwise (the 5-d radial picture); exact inverse
WaveState to_five_dim(const WaveState& s);
WaveState from_five_dim(const WaveState& u);

struct ScatteringReport {
  std::vector<double> t;
  std::vector<double> local_energy;  // energy restricted to [1, R]
  double s_norm_window = 0.0;        // (int_{t0}^{t1} ||u||_{L^6}^3 dt)^{1/3}
  // peak / final local energy, saturated at 1e8: below 1e-8 of peak the
  // remnant is discretization noise, not signal, and would not be comparable
  // across resolutions
  double decay_factor = 0.0;
};

// local-energy series over the whole trajectory plus the S-norm of the
// u-picture on [t0, t1]; ||u||_{L^6}^6 = |S^4| int |u|^6 r^4 dr.
ScatteringReport scattering_diagnostics(const Trajectory& traj, double R,
                                        double t0, double t1);

// || a - b ||_H  (energy-space distance: gradient + kinetic parts)
double state_distance(const WaveState& a, const WaveState& b);

// smooth quartic bump^2 profile supported on (a, b), optionally modulated by
// sin(osc * r); amp_psi scales psi, amp_dot scales psi_dot
WaveState make_bump_state(const RadialGrid& g, double amp_psi, double amp_dot,
                          double a, double b, double osc = 0.0);

}  // namespace extwm::pde
