#pragma once

#include <cstddef>
#include <vector>

namespace extwm::renorm {

// Strip shift z_j = (2j-1)pi/4 and scale eps = sqrt(72/(29 pi (2j-1))).
double z_shift(int j);
double eps_for(int j);  // j even, j >= 4; asserts 0 < eps < 7/20

// Perturbation g, its primitive G, and h(z) = sin 2z - eps^2 g(z).
double g(double z);
double g_prime(double z);
double G(double z);
double h(double z, double eps);

// Reduced-argument evaluations: h at pi+d and pi/2+d without forming pi+d
// inside the trig calls (the pi rounding error would swamp the eps^6 scale).
double h_near_pi(double d, double eps);
double h_near_half_pi(double d, double eps);

struct ZetaZeros {
  double zeta0;  // first zero of h, near 0
  double zeta1;  // offset of the second zero from pi/2
  double zeta2;  // offset of the third zero from pi
};

ZetaZeros zeta_zeros(double eps);

struct Enclosure {
  double lo = 0.0, hi = 0.0, value = 0.0;
  bool inside = false;
};

// Lemma-style brackets: zeta0 in (eps^2/8)[1 - eps^4/3, 1 - eps^4/9],
// zeta2 in (eps^2/8)[1 - (29/18)pi eps^2 + 10 eps^4, ... + 40 eps^4].
Enclosure zeta0_enclosure(double eps);
Enclosure zeta2_enclosure(double eps);

struct SignSample {
  double eps;
  double h_a_lo, h_a_hi;  // h at zeta0(-1/3,eps), zeta0(-1/9,eps)
  double h_c_lo, h_c_hi;  // h at pi+zeta2(10,eps), pi+zeta2(40,eps)
};

struct SignReport {
  bool ok_a_lo = false;   // h(zeta0(-1/3,eps)) <= 0 everywhere
  bool ok_a_hi = false;   // h(zeta0(-1/9,eps)) >= 0 everywhere
  bool ok_c_lo = false;   // h(pi+zeta2(10,eps)) <= 0 everywhere
  bool ok_c_hi = false;   // h(pi+zeta2(40,eps)) >= 0 everywhere
  bool enclosures_ok = false;
  bool all_ok = false;
  std::vector<SignSample> samples;
};

// Grid: n log-spaced eps in (1e-3, 7/20].
SignReport lemma_zeros_signcheck(std::size_t n = 512);

// Boundary quadratics (alpha = 6/5, beta = 5/4 fixed).
double F1(double x, double eps);  // domain [2, pi] x [0, 7/20]
double F2(double x, double eps);  // domain [7/4, 2] x [0, 7/20]
double disc_F1(double x);         // eps-discriminant of F1(x, .)
double disc_F2(double x);

struct ScanReport {
  bool all_negative_interior = false;
  bool endpoint_degenerate = false;  // disc_F1 vanishes identically at x = pi
  double max_interior = 0.0;
  double argmax = 0.0;
  bool certified = false;            // Lipschitz subdivision certificate
  double certified_upper_bound = 0.0;
  std::size_t subintervals = 0;
};

ScanReport discriminant_scan_F1(std::size_t samples = 10000);
ScanReport discriminant_scan_F2(std::size_t samples = 10000);

// Lower boundary graphs of the repulsion region.
double y1(double z);  // -(5/4) sin z          on [2, pi]
double y2(double z);  // -(5/4) sin2 sqrt(1 - (25/36)(z-2)^2) on [7/4, 2]

struct RegionReport {
  double area = 0.0;            // -int y2 - int y1
  double int_y1_part = 0.0;     // -int_2^pi y1 = (5/4)(1 + cos 2)
  double int_y2_part = 0.0;
  bool area_gt_1 = false;
  double boundary_min_1 = 0.0;  // min over grid of nu_1 . N (direct)
  double boundary_min_2 = 0.0;
  bool boundary_nonneg = false;
  double identity_gap_1 = 0.0;  // max |nu_1.N - F1/2|
  double identity_gap_2 = 0.0;  // max |nu_2.N - (F2 + (1/6)|sin 2x|)|
  double budget_quad = 0.0;     // (29 pi/36) eps^2
  bool budget_contradiction_false = false;  // eps < (29pi/36) eps^2 fails
};

RegionReport renorm_region_check(double eps);

struct ROrbitPoint {
  double t, zeta, eta, ieta2;  // ieta2 = int eta^2 from orbit start
};

struct ROrbit {
  std::vector<ROrbitPoint> pts;
  bool crossed = false;        // first eta = 0 crossing away from the seed
  double crossing_zeta = 0.0;
  double crossing_t = 0.0;
  double crossing_ieta2 = 0.0;
  bool escaped = false;
  double eps = 0.0;
};

// Unstable-manifold branch of the damped-pendulum system
// (zeta', eta') = (eta, sin 2zeta - eps eta - eps^2 g(zeta))
// seeded at the saddle seed_zeta; branch +1 leaves with eta > 0.
ROrbit renorm_manifold_orbit(double eps, double seed_zeta, int branch,
                             double rtol = 1e-11);

struct ManifoldReport {
  ZetaZeros zz;
  double p1 = 0.0, p2 = 0.0;  // first turning points of the two branches
  bool p1_ok = false;         // p1 in (pi/2 + zeta1, pi)
  bool p2_ok = false;         // p2 in (zeta0, pi/2 + zeta1)
  ROrbit plus, minus;
};

ManifoldReport renorm_manifold_check(int j);

// | (1/2)(eta1^2-eta0^2) + eps int eta^2
//   - [ (1/2)(cos 2z0 - cos 2z1) - eps^2 (G(z1)-G(z0)) ] |
double renorm_conservation_residual(const ROrbit& orb, std::size_t i0,
                                    std::size_t i1);

// Right-hand side of the budget identity along the heteroclinic window,
// (1/2)(cos 2zeta2 - cos 2zeta0) + eps^2 (G(pi+zeta2) - G(zeta0)),
// evaluated in cancellation-stable form. Expands as
// (29 pi/36) eps^2 - (29 pi/1152) eps^6 + O(eps^8).
double budget_rhs(double eps);
double budget_eps6_coefficient();  // Richardson estimate of the eps^6 term

// sup over a zeta grid of |f(z_j+zeta) - [(-1)^j (29/18) z_j sin 2zeta
//                                         + (-1)^{j+1} g(zeta)]|
double field_identity_gap(int j);

// Integrate the renormalized system and the original strip system from the
// matched data and return the sup-norm mismatch of the pulled-back states.
double pullback_gap(int j, double zeta_init, double eta_init, double s_final);

}  // namespace extwm::renorm
