#pragma once

#include <cstdint>
#include <vector>

#include "extwm/grid.hpp"
#include "extwm/radial_pde.hpp"

namespace extwm::virial {

// nonlinear density of the virial functionals:
//   F(x) = sin^2 x - (29/20) x sin 2x,  f = -(5/9) F'
double F(double x);
double F_prime(double x);
double f(double x);

// even C^2 cutoff: 1 on |s| <= 1, 0 outside |s| <= 2, quintic smoothstep
// transition; chi_R(r) = chi(r/R)
struct Cutoff {
  double value(double s) const;
  double deriv(double s) const;
  double second(double s) const;
};

// Lambda(psi) = -(9/10) int psi_r^2 r^2 dr + scale * int F(psi) dr
// on the grid of s (psi_dot ignored). scale != 1 is the negative-control
// density.
double lambda_functional(const WaveState& s, double scale = 1.0);

struct EllReport {
  double L = 0.0;  // -(1/20 psid^2 + 19/20 psi_r^2) r^2 weight + int F dr
  double kinetic_gradient = 0.0;  // int (psid^2 + psi_r^2) r^2 dr
  double energy = 0.0;            // full energy of the state
  bool bound_quadratic = false;   // L <= -(1/20) kinetic_gradient (+tol)
  bool bound_energy = false;      // L <= -(1/180) energy (+tol)
};

EllReport ell_functional(const WaveState& s);

struct SampleReport {
  int n = 0;
  std::uint32_t seed = 0;
  double max_lambda = -1e300;       // max over samples of Lambda
  double max_ell_slack = -1e300;    // max of L + (1/180) E
  double max_n_over_bound = 0.0;    // max of N(psi) / (8 R sqrt(E))
  int violations = 0;               // samples breaching the 1e-10 tolerance
};

// n random compactly supported profiles: truncated sine series in (r-1)
// under a compact window (amplitudes up to 20, supports up to R = 200),
// plus plateau shapes near odd multiples of pi/2
SampleReport coercivity_sample(int n, std::uint32_t seed = 2718281u);

struct ControlReport {
  bool found = false;   // an Euler-Lagrange orbit with positive value exists
  double y0 = 0.0;      // shooting slope of the best orbit
  double T = 0.0;       // return time (log of the support radius)
  double value = 0.0;   // Lambda of the orbit profile
};

// searches profiles solving the Euler-Lagrange equation
// psi'' + psi' = scale * f(psi) in tau = ln r, shot from the axis and
// returning to it; for scale = 3/2 this finds a positive-Lambda witness,
// for scale = 1 no orbit returns at all
ControlReport negative_control_search(double scale);

struct TraceReport {
  std::vector<double> t;
  std::vector<double> P;             // <chi_R psi_dot | r psi_r + 29/20 psi>
  std::vector<double> main_term;     // the L integrand at time t
  std::vector<double> boundary_flux;  // (1/2) psi_r(t,1)^2, the dropped term
  std::vector<double> error_bucket;  // E_R^inf + int_R^inf psi^2 dr
  double C_est = 0.0;  // smallest C with P|_0^T <= int (main + C err) for all T
  bool inequality_ok = false;  // holds with C = 10 for every T on the grid
};

TraceReport virial_trace(const pde::Trajectory& traj, double R);

}  // namespace extwm::virial
