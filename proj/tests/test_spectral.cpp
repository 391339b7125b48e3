#include <array>
#include <cmath>
#include <complex>

#include "doctest.h"
#include "extwm/harmonic.hpp"
#include "extwm/ode.hpp"
#include "extwm/spectral.hpp"

using namespace extwm;
using namespace extwm::spectral;

namespace {
double bump4(double r) {
  if (r <= 2.0 || r >= 3.0) return 0.0;
  double t = (r - 2.0) * (3.0 - r);
  return t * t * t * t;
}

const harmonic::HarmonicMap& q1() {
  static auto q = harmonic::find_harmonic(1);
  return q;
}

double Vq1(double r) { return q1().potential(r); }
double Vzero(double) { return 0.0; }
}  // namespace

TEST_CASE("free basis closed forms") {
  // boundary data at r = 1 and special values
  for (double l : {1e-2, 0.3, 1.0, 7.0, 100.0}) {
    CHECK(std::abs(phi0(1.0, l)) == 0.0);
    CHECK(std::abs(phi0_dr(1.0, l) - 1.0) < 1e-13);
    CHECK(std::abs(theta0(1.0, l) - 1.0) < 1e-13);
    CHECK(std::abs(theta0_dr(1.0, l)) < 1e-13);
  }
  CHECK(m0(1.0).real() == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(m0(1.0).imag() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(omega0(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  // 2 lambda Im m0 reproduces the closed-form weight
  for (double l : {0.1, 1.0, 5.0, 40.0})
    CHECK(2.0 * l * m0(l).imag() == doctest::Approx(omega0(l)).epsilon(1e-12));
  CHECK_THROWS_AS((void)psi0(2.0, cplx(0.0, -1.0)), std::domain_error);
  CHECK_THROWS_AS((void)m0(cplx(1e-12, -1.0)), std::domain_error);

  // stencil residual of the defining ODE, Wronskian constancy, Weyl relation
  double worst_ode = 0, worst_w = 0, worst_rel = 0;
  for (int kz = 0; kz < 40; ++kz) {
    cplx z = std::pow(10.0, -2.0 + 4.0 * kz / 39.0);
    if (kz % 3 == 1) z = std::min(std::abs(z), 2.0) * cplx(0.8, 0.6);
    for (int kr = 0; kr < 25; ++kr) {
      double r = 1.0 + std::pow(10.0, -3.0 + 5.0 * kr / 24.0);
      if (std::abs(z.imag()) * r > 30.0) continue;
      double h = 2e-3 / std::max(1.0, std::abs(z));
      auto res = [&](auto F) {
        cplx d2 = (-F(r + 2 * h, z) + 16.0 * F(r + h, z) - 30.0 * F(r, z) +
                   16.0 * F(r - h, z) - F(r - 2 * h, z)) /
                  (12.0 * h * h);
        cplx v = -d2 + (2.0 / (r * r) - z * z) * F(r, z);
        return std::abs(v) / ((1.0 + std::norm(z)) * (1.0 + std::abs(F(r, z))));
      };
      worst_ode = std::max(worst_ode, res([](double rr, cplx zz) { return phi0(rr, zz); }));
      worst_ode = std::max(worst_ode, res([](double rr, cplx zz) { return theta0(rr, zz); }));
      worst_ode = std::max(worst_ode, res([](double rr, cplx zz) { return psi0(rr, zz); }));
      cplx W = theta0(r, z) * phi0_dr(r, z) - theta0_dr(r, z) * phi0(r, z);
      double sz = (std::abs(theta0(r, z)) + 1.0) * (std::abs(phi0_dr(r, z)) + 1.0);
      worst_w = std::max(worst_w, std::abs(W - 1.0) / sz);
      cplx rel = psi0(r, z) - (theta0(r, z) + m0(z) * phi0(r, z));
      worst_rel = std::max(worst_rel, std::abs(rel) / (1.0 + std::abs(theta0(r, z))));
    }
  }
  CHECK(worst_ode < 1e-6);   // finite-difference measurement floor
  CHECK(worst_w < 1e-12);    // exact algebraic identities
  CHECK(worst_rel < 1e-12);

  // Green kernel: diagonal, antisymmetry, zero-energy limit
  CHECK(G0(2.0, 2.0, 1.0) == 0.0);
  CHECK(G0(7.3, 7.3, 0.2) == 0.0);
  CHECK(std::abs(G0(2.0, 5.0, 3.0) + G0(5.0, 2.0, 3.0)) < 1e-14);
  CHECK(G0(2.0, 5.0, 1e-8) ==
        doctest::Approx((5.0 * 5.0 * 5.0 - 8.0) / (3.0 * 2.0 * 5.0))
            .epsilon(1e-12));
  CHECK_THROWS_AS((void)G0(2.0, 5.0, 0.0), std::domain_error);
}

TEST_CASE("free basis vs direct integration") {
  // independent verification of the closed forms to ODE-solver accuracy
  for (double l : {0.5, 1.0, 3.0}) {
    using St = std::array<double, 2>;
    Dopri5<2> solver(
        [l](double r, const St& s, St& d) {
          d[0] = s[1];
          d[1] = (2.0 / (r * r) - l * l) * s[0];
        },
        1e-12, 1e-13);
    double r = 1.0;
    St s{0.0, 1.0};
    for (double rt : {2.0, 4.0, 7.0}) {
      auto res = solver.integrate(r, s, rt);
      s = res.y.back();
      r = rt;
      CHECK(std::abs(s[0] - phi0(rt, l).real()) < 1e-9);
      CHECK(std::abs(s[1] - phi0_dr(rt, l).real()) < 1e-9);
    }
  }
}

TEST_CASE("phi0 bound scan and psi0 modulus") {
  auto rep = phi0_bound_scan();
  CHECK(rep.sup_ratio == doctest::Approx(1.060075).epsilon(1e-3));
  CHECK(rep.sup_ratio < 1.2);
  CHECK(rep.max_psi0_mod <= 1.0 + 1e-9);
  CHECK(rep.max_psi0_mod > 0.999);
}

TEST_CASE("plancherel round trip") {
  auto rep = plancherel_roundtrip(bump4, 2.0, 3.0);
  CHECK(rep.roundtrip_l2 < 1e-6);
  CHECK(rep.parseval_defect < 1e-6);
  CHECK(rep.roundtrip_l2 < 1e-9);       // measured 2.8e-10
  CHECK(rep.parseval_defect < 1e-15);   // measured 1.2e-19
  CHECK(rep.norm2 > 0.0);
  CHECK(rep.transform_norm2 ==
        doctest::Approx(rep.norm2).epsilon(1e-10));

  // refinement ladder: error drops by >= 4x per doubling (order >= 2)
  auto c0 = plancherel_roundtrip(bump4, 2.0, 3.0, 50.0, 0.08, 6.0, 2e-3);
  auto c1 = plancherel_roundtrip(bump4, 2.0, 3.0, 100.0, 0.04, 6.0, 2e-3);
  auto c2 = plancherel_roundtrip(bump4, 2.0, 3.0, 200.0, 0.02, 6.0, 2e-3);
  CHECK(c0.roundtrip_l2 == doctest::Approx(1.4994e-7).epsilon(1e-2));
  CHECK(c1.roundtrip_l2 < c0.roundtrip_l2 / 4.0);
  CHECK(c2.roundtrip_l2 < c1.roundtrip_l2 / 4.0);
  CHECK(c1.parseval_defect < c0.parseval_defect / 4.0);

  // zero profile: everything vanishes
  auto z = plancherel_roundtrip([](double) { return 0.0; }, 2.0, 3.0, 20.0, 0.1);
  CHECK(z.norm2 == 0.0);
  CHECK(z.roundtrip_l2 == 0.0);
  CHECK(z.parseval_defect == 0.0);

  CHECK_THROWS(plancherel_roundtrip(bump4, 0.5, 3.0));
}

TEST_CASE("outgoing Volterra solution") {
  // V = 0: the free Weyl solution is an exact fixed point
  {
    auto pb = volterra_solve(Vzero, 1.0);
    CHECK(pb.iterations == 1);
    double worst = 0;
    for (std::size_t i = 0; i < pb.psit.size(); i += 911)
      worst = std::max(worst, std::abs(pb.psit[i] - psi0(pb.r(i), 1.0)));
    CHECK(worst == 0.0);
    CHECK(pb.wronskian_dev < 1e-14);
  }
  // Wronskian identity W(psit, conj psit) = -2i l^3/(1+l^2) across lambda
  for (double l : {0.01, 0.1, 1.0, 10.0, 100.0}) {
    auto pb = volterra_solve(Vq1, l);
    CHECK(pb.wronskian_dev < 1e-8);
    CHECK(pb.last_update < 1e-10);
  }
  // high-frequency asymptotics: psit = psi0 + O(1/l), constant ~ 0.8
  for (double l : {10.0, 31.6, 100.0}) {
    auto pb = volterra_solve(Vq1, l);
    double sup = 0;
    for (std::size_t i = 0; i < pb.psit.size(); i += 37)
      sup = std::max(sup, std::abs(pb.psit[i] - psi0(pb.r(i), l)));
    CHECK(sup * l == doctest::Approx(0.80).epsilon(0.02));
  }
  CHECK_THROWS_AS(volterra_solve(Vq1, -1.0), std::domain_error);
  CHECK_THROWS_AS(volterra_solve([](double r) { return 1.0 / r; }, 1.0),
                  std::domain_error);
}

TEST_CASE("perturbed basis and Weyl function") {
  // V = 0 reduction to the free closed forms
  {
    auto pb = perturbed_basis(Vzero, 2.0);
    CHECK(std::abs(pb.m - m0(2.0)) < 1e-10);
    CHECK(std::abs(pb.c - 1.0) < 1e-12);
    double worst = 0;
    for (std::size_t i = 0; i < pb.phi.size(); i += 911)
      worst = std::max(worst, std::abs(pb.phi[i] - phi0(pb.r(i), 2.0).real()));
    CHECK(worst < 1e-10);
  }
  // regular solution: phi(1) = 0 and the ODE holds
  for (double l : {0.5, 1.0, 3.16}) {
    auto pb = perturbed_basis(Vq1, l);
    CHECK(std::abs(pb.phi[0]) < 1e-14);
    CHECK(phi_ode_residual(pb, Vq1) < 1e-6);
    // the two routes to Im m (identity vs direct) agree
    CHECK(pb.m.imag() == doctest::Approx(pb.im_m).epsilon(1e-8));
  }
  // c(lambda) = 1 + O(1/lambda)
  for (double l : {10.0, 31.6, 100.0}) {
    auto pb = perturbed_basis(Vq1, l);
    CHECK(std::abs(pb.c - 1.0) * l == doctest::Approx(0.80).epsilon(0.02));
  }
  // Im m(lambda) ~ lambda^3 with a two-sided bracket on (1e-2, 1e-1]
  for (double l : {0.01, 0.02, 0.04, 0.07, 0.1}) {
    auto pb = perturbed_basis(Vq1, l);
    double ratio = pb.im_m / (l * l * l);
    CHECK(ratio > 6.4);
    CHECK(ratio < 6.9);
  }
}

TEST_CASE("spectral weight") {
  // V = 0: the ratio (drho/dl)/l = 2 l^3/(1+l^2) lies in [1, 100) on [1, 50]
  auto rf = spectral_weight_check(Vzero, 1.0, 50.0, 8);
  CHECK(rf.ratio_lo == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rf.ratio_hi < 100.0);
  // with the ground-state potential: finite frozen bracket
  auto rq = spectral_weight_check(Vq1, 0.5, 50.0, 12);
  CHECK(rq.ratio_lo > 1.5);
  CHECK(rq.ratio_lo < 2.0);
  CHECK(rq.ratio_hi < 100.1);
  // small-lambda order-4 vanishing, with the zero-energy constant:
  // drho/dl ~ 2 lambda^4 / u0(1)^2
  auto rs = spectral_weight_check(Vq1, 0.005, 0.02, 4);
  for (std::size_t i = 0; i < rs.lambda.size(); ++i) {
    double c4 = rs.drho[i] / std::pow(rs.lambda[i], 4);
    CHECK(c4 == doctest::Approx(13.116).epsilon(2e-3));
  }
  CHECK_THROWS(spectral_weight_check(Vq1, -1.0, 2.0, 4));
}

TEST_CASE("zero energy pair") {
  // V = 0 closed forms
  {
    auto zp = zero_energy(Vzero, 2.0, 200.0, 2e-3);
    double w0 = 0, w1 = 0;
    for (std::size_t i = 0; i < zp.u0.size(); i += 997) {
      double r = zp.r(i);
      w0 = std::max(w0, std::abs(zp.u0[i] - 1.0 / r));
      double u1ex = (r * r * r - zp.r0 * zp.r0 * zp.r0) / (3.0 * r);
      w1 = std::max(w1, std::abs(zp.u1[i] - u1ex) / (1.0 + std::abs(u1ex)));
    }
    CHECK(w0 == 0.0);
    CHECK(w1 < 1e-12);
    CHECK(zp.vancond == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(zp.wronskian_dev < 1e-10);
  }
  auto zp = zero_energy(Vq1, 2.0);
  CHECK(zp.u0[0] == doctest::Approx(0.390513909).epsilon(1e-6));
  CHECK(std::abs(zp.u0p[0]) < 1e-8);  // the zero mode is the gauge direction
  CHECK(zp.vancond == doctest::Approx(0.781027818).epsilon(1e-6));
  CHECK(std::abs(zp.vancond) > 0.5);  // bounded away from 0: no zero eigenvalue
  CHECK(zp.u0_min > 0.0);
  CHECK(zp.wronskian_dev < 1e-9);
  CHECK(zp.tail_order == doctest::Approx(4.0).epsilon(0.03));
  CHECK(zp.tail_c == doctest::Approx(-3.3566).epsilon(0.02));
  CHECK(zp.iterations < 50);
  // resolution stability
  auto zp2 = zero_energy(Vq1, 2.0, 1000.0, 1e-3);
  CHECK(zp2.u0[0] == doctest::Approx(zp.u0[0]).epsilon(1e-9));

  // the zero-energy solution is r^2 Q1'(r) up to one normalization constant
  double ratio1 = zp.u0[0] / q1().deriv(1.0);
  for (double r : {2.0, 5.0, 20.0, 50.0}) {
    std::size_t i = std::size_t(std::llround((r - 1.0) / zp.h));
    double rr = zp.r(i);
    CHECK(zp.u0[i] / (rr * rr * q1().deriv(rr)) ==
          doctest::Approx(ratio1).epsilon(1e-3));
  }
  // consistency with the small-lambda Weyl function: Im m / l^3 -> 1/u0(1)^2
  CHECK(zp.u0[0] * zp.u0[0] * 6.559782 == doctest::Approx(1.0).epsilon(1e-2));

  // error paths
  CHECK_THROWS_AS(zero_energy(
                      [](double r) {
                        double d = r - 3.0;
                        return -20.0 * std::exp(-d * d);
                      },
                      2.0, 300.0, 2e-3),
                  std::invalid_argument);
  CHECK_THROWS_AS(zero_energy([](double r) { return 1.0 / r; }, 2.0),
                  std::domain_error);
}

TEST_CASE("point spectrum probe") {
  auto e0 = point_spectrum_probe(Vzero);
  CHECK(e0.smallest > -1e-8);
  CHECK(e0.smallest == doctest::Approx(5.048e-4).epsilon(1e-2));
  auto e1 = point_spectrum_probe(Vq1);
  auto e2 = point_spectrum_probe(Vq1, 8000);
  CHECK(e1.smallest >= -1e-6);
  CHECK(e2.smallest >= -1e-6);
  CHECK(std::abs(e1.smallest - e2.smallest) < 1e-7);
  // attractive potential lowers the bottom, but not below zero
  CHECK(e1.smallest < e0.smallest);
  CHECK(e1.smallest > 0.0);
}

TEST_CASE("low energy basis and connection coefficient") {
  // V = 0 at l = 1e-2: matches the exact free solution with the same data
  {
    auto zpf = zero_energy(Vzero, 2.0);
    auto le = low_energy_basis(Vzero, 1e-2, zpf);
    double r0c = zpf.r0 * zpf.r0 * zpf.r0;
    double worst = 0, worst_ratio = 0;
    for (std::size_t i = 0; i < le.u1l.size(); i += 499) {
      double r = le.r(i);
      double ex = ((1.0 - r0c) / 3.0) * theta0(r, 1e-2).real() +
                  ((2.0 + r0c) / 3.0) * phi0(r, 1e-2).real();
      worst = std::max(worst, std::abs(le.u1l[i] - ex));
      double u1 = (r * r * r - r0c) / (3.0 * r);
      worst_ratio = std::max(
          worst_ratio, std::abs(le.u1l[i] - u1) /
                           (1e-4 * r * r * (r - 1) * (r - 1) + 1e-12));
    }
    CHECK(worst < 1e-10);
    CHECK(worst_ratio < 0.25);  // u1l = u1 + O(l^2 r^2 (r-1)^2)
  }

  auto zp = zero_energy(Vq1, 2.0);
  for (double l : {0.001, 0.01, 0.04}) {
    auto le = low_energy_basis(Vq1, l, zp);
    CHECK(std::abs(le.W - 1.0) < 1e-11);
    CHECK(le.W_dev < 1e-11);
    CHECK(le.iters_u1 < 20);
    CHECK(le.iters_u0 < 20);
    // a(lambda) = O(l^-3); the limit constant is u0(1)/2
    CHECK(std::abs(le.a) * l * l * l == doctest::Approx(0.1953).epsilon(2e-3));
    // the regular solution is 2 Re(a psit) identically
    CHECK(le.phi_match < 1e-9);
  }
  {
    auto le = low_energy_basis(Vq1, 0.001, zp);
    CHECK(std::abs(le.a) * 1e-9 ==
          doctest::Approx(zp.u0[0] / 2.0).epsilon(1e-3));
  }
  CHECK_THROWS_AS(low_energy_basis(Vq1, 0.2, zp), std::invalid_argument);
}

TEST_CASE("global phi bound and local energy") {
  // sup of l^2 |phi| / min(1, l (r-1)) over l in [1e-3, 1e-1]
  double s = phi_bound_scan(Vq1, 1e-3, 1e-1, 5);
  CHECK(s < 0.5);
  CHECK(s > 0.3);

  auto V1 = [](double r) { return std::sqrt(std::abs(Vq1(r))); };
  auto a = local_energy_check(V1, bump4, 2.0, 3.0);
  CHECK(a.ratio == doctest::Approx(1.6212).epsilon(1e-3));
  auto b = local_energy_check(V1, bump4, 2.0, 3.0, 200.0, 60.0);
  auto c = local_energy_check(V1, bump4, 2.0, 3.0, 100.0, 120.0);
  CHECK(b.ratio == doctest::Approx(a.ratio).epsilon(1e-4));
  CHECK(c.ratio == doctest::Approx(a.ratio).epsilon(1e-4));
}
