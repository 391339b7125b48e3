#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace extwm::spectral {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Free half-line operator L0 = -d^2/dr^2 + 2/r^2 on r >= 1 with a Dirichlet
// condition at r = 1. Closed-form fundamental system at energy z^2:
//   phi0(1;z) = 0, phi0'(1;z) = 1,  theta0(1;z) = 1, theta0'(1;z) = 0,
// the outgoing Weyl solution psi0 (~ e^{iz(r-1)}), the Weyl function
// m0(z) = psi0'(1;z) (so psi0 = theta0 + m0 phi0), and the spectral weight
// omega0(l) = 2 l^4 / (1 + l^2).
// All evaluators are numerically stable near z(r-1) = 0 (series branches).
// ---------------------------------------------------------------------------
cplx phi0(double r, cplx z);
cplx phi0_dr(double r, cplx z);
cplx theta0(double r, cplx z);
cplx theta0_dr(double r, cplx z);
cplx psi0(double r, cplx z);     // pole at z = -i
cplx psi0_dr(double r, cplx z);  // pole at z = -i
cplx m0(cplx z);                 // pole at z = -i
double omega0(double lambda);

// outgoing Green kernel at energy lambda^2; antisymmetric, G0(r,r) = 0
double G0(double r, double rp, double lambda);

// sup over r in [1, 1e3], lambda in [1e-3, 1e3] (log-spaced) of
//   |phi0(r;lambda)| lambda^2 / ((1+lambda) min(1, lambda (r-1)))
// together with the max modulus of psi0 on the same grid (expected <= 1).
struct BoundScanReport {
  double sup_ratio = 0.0;
  double max_psi0_mod = 0.0;
};
BoundScanReport phi0_bound_scan();

// ---------------------------------------------------------------------------
// Distorted (here: free) Fourier transform round trip for a compactly
// supported profile f on [a,b]:
//   fhat(l) = int phi0(r;l) f(r) dr,  recon(r) = int phi0(r;l) fhat(l) w0(l) dl
// with Simpson quadrature in both variables and the lambda-integral truncated
// at lambda_max.
// ---------------------------------------------------------------------------
struct PlancherelReport {
  double norm2 = 0.0;           // ||f||_L2^2
  double transform_norm2 = 0.0; // int |fhat|^2 omega0 dl
  double roundtrip_l2 = 0.0;    // ||recon - f||_L2 over the sample window
  double parseval_defect = 0.0; // |norm2 - transform_norm2|
  std::size_t n_lambda = 0;
  double lambda_max = 0.0;
};
PlancherelReport plancherel_roundtrip(const std::function<double(double)>& f,
                                      double a, double b,
                                      double lambda_max = 200.0,
                                      double dlambda = 0.02,
                                      double r_hi = 6.0, double dr = 1e-3);

// ---------------------------------------------------------------------------
// Perturbed operator L = L0 + V. The outgoing solution psit of
// L psit = lambda^2 psit with psit ~ psi0 at infinity solves the Volterra
// equation psit = psi0 + int_r^{rmax} G0(r,s;l) V(s) psit(s) ds, iterated
// inward on a uniform grid. Derivatives are analytic (the kernel is separable
// and vanishes on the diagonal). Normalization c = 1/psit(1) gives
// psi = c psit with psi(1) = 1, m = psi'(1), and the real regular solution
// phi = Im psi / Im m with phi(1) = 0, phi'(1) = 1.
// ---------------------------------------------------------------------------
struct PerturbedBasis {
  double lambda = 0.0;
  double h = 0.0;       // grid step; r_i = 1 + i h
  double r_max = 0.0;
  std::vector<cplx> psit, psit_dr;
  cplx c{};             // 1 / psit(1)
  cplx m{};             // c * psit'(1)
  double im_m = 0.0;    // |c|^2 lambda^3/(1+lambda^2)  (Wronskian identity)
  std::vector<double> phi;
  int iterations = 0;
  double last_update = 0.0;    // relative size of the final Picard update
  double wronskian_dev = 0.0;  // max over 10 radii of
                               // |W(psit, conj psit) + 2 i l^3/(1+l^2)|
  double r(std::size_t i) const { return 1.0 + h * double(i); }
};

// psit part only (c, m, phi left empty). r_max/h <= 0 pick defaults by lambda.
PerturbedBasis volterra_solve(const std::function<double(double)>& V,
                              double lambda, double r_max = 0.0,
                              double h = 0.0);

// full basis; throws if |psit(1)| < 1e-12 (bound state / resonance anomaly)
PerturbedBasis perturbed_basis(const std::function<double(double)>& V,
                               double lambda, double r_max = 0.0,
                               double h = 0.0);

// max over interior nodes of |(-phi'' + (2/r^2 + V) phi - l^2 phi)| / max|phi|
// using a 4th-order stencil
double phi_ode_residual(const PerturbedBasis& pb,
                        const std::function<double(double)>& V);

// d rho / d lambda = 2 lambda Im m(lambda) sampled on a log-spaced grid;
// the bracket is over the ratio to lambda.
struct WeightReport {
  std::vector<double> lambda, drho;
  double ratio_lo = 0.0, ratio_hi = 0.0;
};
WeightReport spectral_weight_check(const std::function<double(double)>& V,
                                   double lo, double hi, int n);

// ---------------------------------------------------------------------------
// Zero energy. u0 solves L u0 = 0 with u0 ~ 1/r at infinity via the Volterra
// equation u0 = 1/r + int_r^{rmax} (s^3 - r^3)/(3 r s) V(s) u0(s) ds; its
// growing partner is u1(r) = u0(r) int_{r0}^r u0(s)^{-2} ds, W(u0,u1) = 1.
// ---------------------------------------------------------------------------
struct ZeroEnergyPair {
  double h = 0.0, r_max = 0.0, r0 = 0.0;
  std::vector<double> u0, u0p;  // samples on r_i = 1 + i h and derivative
  std::vector<double> u1, u1p;
  double u0_min = 0.0;          // min of u0 over the grid
  double vancond = 0.0;         // u0'(1) + 2 u0(1)
  double wronskian_dev = 0.0;   // |W(u0, u1_ode) - 1| against an independently
                                // integrated u1, max over sample radii
  double tail_c = 0.0;          // fit r u0 - 1 ~ tail_c r^{-p} on [20, 80]
  double tail_order = 0.0;      // fitted p (expected ~4)
  int iterations = 0;
  double r(std::size_t i) const { return 1.0 + h * double(i); }
};
ZeroEnergyPair zero_energy(const std::function<double(double)>& V, double r0,
                           double r_max = 1000.0, double h = 2e-3);

// smallest eigenvalue of the (n-1)-point Dirichlet discretization of L on
// [1, r_hi] (second-order stencil, Sturm bisection)
struct EigenReport {
  double smallest = 0.0;
  int n = 0;
  double h = 0.0;
};
EigenReport point_spectrum_probe(const std::function<double(double)>& V,
                                 int n = 4000, double r_hi = 200.0);

// ---------------------------------------------------------------------------
// Low-energy basis on [1, R] with R = eps_tilde / lambda: perturb (u0, u1)
// to energy lambda^2 by
//   u1l = u1 + l^2 int_1^r (u1(r) u0(s) - u0(r) u1(s)) u1l(s) ds   (Volterra)
//   u0l = u0 + l^2 [ u0(r) int_1^r u1 u0l + u1(r) int_r^R u0 u0l ] (fixed point)
// and connect the regular solution phi to the outgoing psit at r ~ l^{-1/2}:
//   a(l) = W(phi, conj psit) / W(psit, conj psit) = O(l^{-3}).
// ---------------------------------------------------------------------------
struct LowEnergyBasis {
  double lambda = 0.0, h = 0.0, R = 0.0;
  std::vector<double> u1l, u1lp, u0l, u0lp;
  double W = 0.0;      // W(u0l, u1l) at r = 1
  double W_dev = 0.0;  // max deviation of W(r) from W across the window
  cplx a{};            // connection coefficient
  double r_connect = 0.0;
  double phi_match = 0.0;  // max over check radii of |phi - 2 Re(a psit)|
  int iters_u1 = 0, iters_u0 = 0;
  double r(std::size_t i) const { return 1.0 + h * double(i); }
};
LowEnergyBasis low_energy_basis(const std::function<double(double)>& V,
                                double lambda, const ZeroEnergyPair& zp,
                                double eps_tilde = 0.1);

// sup over lambda in [lo, hi] (log-spaced, n values) and the radial grid of
//   lambda^2 |phi(r;lambda)| / min(1, lambda (r-1))
double phi_bound_scan(const std::function<double(double)>& V, double lo,
                      double hi, int n);

// Desk version of the local-energy estimate: for the half-wave evolution
// u(t) = e^{-itA} f built from the free basis (A = sqrt(L0)), the weighted
// space-time mass int_0^T int |V1 u|^2 dr dt is bounded by ratio * ||f||^2
// with ratio stable under enlarging T and the frequency window.
struct LocalEnergyReport {
  double value = 0.0;   // int int |V1 u|^2 dr dt
  double norm2 = 0.0;   // spectral ||f||^2 = int |fhat|^2 omega0
  double ratio = 0.0;   // value / norm2
};
LocalEnergyReport local_energy_check(const std::function<double(double)>& V1,
                                     const std::function<double(double)>& f,
                                     double a, double b, double t_max = 100.0,
                                     double lambda_max = 60.0);

}  // namespace extwm::spectral
