#pragma once

#include <array>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "extwm/rational.hpp"

namespace extwm::phase {

// Vector field ingredients of the planar system (x', y') = (y, -y + f(x)).
double f(double x);        // (1/4) sin 2x + (29/18) x cos 2x
double f_prime(double x);  // (19/9) cos 2x - (29/9) x sin 2x
double F(double x);        // primitive: (5/18) cos 2x + (29/36) x sin 2x

// Global bounds used by the certification pass.
double f_bound(double x_abs_max);        // sup |f| on |x| <= x_abs_max
double f_prime_bound(double x_abs_max);  // sup |f'| on |x| <= x_abs_max

struct Zero {
  int j = 0;          // index (x_j), j >= 1 here; x_0 = 0 handled separately
  double x = 0.0;
  double fp = 0.0;    // f'(x_j)
};

// Zeros of f in [a, b], bracketing scan + bisection to 1e-12.
std::vector<double> zeros_of_f(double a, double b);

struct Equilibrium {
  int j = 0;
  double x = 0.0;
  bool saddle = false;  // saddle iff f'(x_j) > 0
  std::complex<double> lambda_plus, lambda_minus;
  std::array<double, 2> unstable_dir{0.0, 0.0};  // (1, lambda_plus) for saddles
};

Equilibrium classify(int j, double xj, double field_scale = 1.0);

struct OrbitPoint {
  double t, x, y, iy2;  // iy2 = integral of y^2 from start of orbit
};

struct Orbit {
  std::vector<OrbitPoint> pts;
  bool crossed_axis = false;    // first y = 0 crossing after leaving the seed
  double crossing_x = 0.0;
  double crossing_t = 0.0;
  double crossing_iy2 = 0.0;    // integral of y^2 up to the crossing
  bool reached_x0 = false;      // reached the vertical line x = 0
  double x0_y = 0.0;            // y value there
  bool sink_capture = false;
  double sink_x = 0.0;
  bool escaped = false;
};

// Integrate the unstable-manifold branch of the saddle at x_j.
// branch = +1 seeds on the +xi_+ side (y > 0 initially), -1 on the other.
// field_scale multiplies f (1.0 for the true system; 1.5 for the control run).
Orbit unstable_manifold(double xj, int branch, double field_scale = 1.0,
                        double seed_delta = 0.0, double rtol = 1e-11);

// | (1/2)(y1^2 - y0^2) + int y^2 - (F(x1) - F(x0)) | between two stored samples.
double conservation_residual(const Orbit& orb, std::size_t i0, std::size_t i1,
                             double field_scale = 1.0);

// ---- Exact-rational Lyapunov regions ----------------------------------------

struct BoundaryPiece {
  std::string label;                       // e.g. "Sigma1 graph"
  std::function<double(double)> expr;      // outward-normal dot field, as a
                                           // function of the graph parameter
  std::function<double(double, double)> deriv_bound;  // sup |expr'| on [a,b]
  double lo = 0.0, hi = 0.0;
};

struct AreaTerm {
  RationalPoly poly;     // integrand contribution: sign * (poly + offset)
  Rational offset = 0;
  int sign = +1;
  Rational lo = 0, hi = 0;
};

struct Region {
  std::string name;
  std::vector<BoundaryPiece> boundary;
  std::vector<AreaTerm> area_terms;
};

// The polynomials of the two built-in regions.
RationalPoly poly_p1();  // degree 9 in (x + 43/18)
RationalPoly poly_p2();  // degree 9 in (y - 21/22)
RationalPoly poly_p3();  // degree 11 in (y - 3/5)
RationalPoly poly_p();   // degree 3 in (x - 11/2)

Region omega_minus1_region();  // Sigma = Sigma1 u Sigma2 u Sigma3
Region omega2_region();        // Sigma in the second strip

Rational exact_area(const Region& region);

struct PieceReport {
  std::string label;
  double sampled_min = 0.0;
  double sampled_argmin = 0.0;
  bool certified = false;
  double certified_lower_bound = 0.0;
  std::size_t subintervals = 0;
};

struct BoundaryReport {
  bool all_positive = false;
  std::vector<PieceReport> pieces;
};

// mode "sampled": dense grid minimum only. mode "refined": additionally derive
// a positive lower bound on each piece by Lipschitz interval subdivision.
BoundaryReport lyapunov_boundary_check(const Region& region, bool refined,
                                       std::size_t samples_per_piece = 10000);

}  // namespace extwm::phase
