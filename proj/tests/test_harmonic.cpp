#include <cmath>
#include <random>

#include "doctest.h"
#include "extwm/harmonic.hpp"
#include "extwm/quad.hpp"

using namespace extwm;
using namespace extwm::harmonic;

namespace {
const HarmonicMap& q1_ref() {
  static HarmonicMap q = find_harmonic(1);
  return q;
}
}  // namespace

TEST_CASE("shooting classification") {
  auto z = shoot(0.0, 1e4);
  CHECK(z.cls == ShotClass::converged);
  CHECK(z.band == 0);
  // a small slope falls into the first potential well: undershoot of plateau 1
  auto u = shoot(1e-3, 1e6);
  CHECK(u.cls == ShotClass::undershoot);
  CHECK(u.band == 1);
  CHECK_THROWS(shoot(-0.1, 1e4));
}

TEST_CASE("first two connecting profiles") {
  const auto& q1 = q1_ref();
  CHECK(std::abs(q1.Q.back() - M_PI) < 1e-6);
  // project reference constant (no closed form exists)
  CHECK(q1.slope == doctest::Approx(3.786299310951).epsilon(1e-9));
  CHECK(ode_residual(q1) < 1e-8);
  // strict monotonicity on the stored grid
  for (std::size_t i = 1; i < q1.Q.size(); ++i) CHECK(q1.Q[i] > q1.Q[i - 1]);
  CHECK(q1.Q.front() == 0.0);

  auto q2 = find_harmonic(2);
  CHECK(std::abs(q2.Q.back() - 2 * M_PI) < 1e-6);
  CHECK(q2.slope == doctest::Approx(6.983263333586).epsilon(1e-9));
  CHECK(q2.slope > q1.slope);
  CHECK(ode_residual(q2) < 1e-8);
  CHECK(q2.tail_c > 0.0);

  // slope strictly between the two brackets falls between plateaus
  auto mid = shoot(0.5 * (q1.slope + q2.slope), 1e3);
  CHECK(mid.band >= 1);
}

TEST_CASE("tail asymptotics n*pi - Q ~ c / r^2") {
  const auto& q1 = q1_ref();
  CHECK(q1.tail_c == doctest::Approx(4.846689).epsilon(1e-4));
  CHECK(q1.tail_spread < 0.01);  // flat to within 1% on the fit window
  auto t1 = tail_fit(q1, 50, 200), t2 = tail_fit(q1, 100, 200);
  CHECK(std::abs(t2.c - t1.c) / t1.c < 0.01);  // doubling R1 moves c by < 1%
}

TEST_CASE("linearized gauge psi = rQ'") {
  auto rep = linearized_gauge(q1_ref());
  CHECK(rep.psi_min > 0.0);
  CHECK(rep.lin_residual < 1e-6);
  CHECK(std::abs(rep.boundary_defect) < 1e-6);
  // psi(1) = slope != 0: the gauge solution is not Dirichlet at r = 1
  CHECK(q1_ref().W.front() == doctest::Approx(q1_ref().slope));
}

TEST_CASE("linearized potential") {
  auto rep = potential_report(q1_ref());
  CHECK(rep.nonpositive);
  CHECK(rep.V_at_1 == 0.0);  // Q(1) = 0
  CHECK(rep.min_V < 0.0);
  // r^6 V bounded, consistent with V ~ -4 c^2 / r^6
  CHECK(rep.max_r6V < 8 * q1_ref().tail_c * q1_ref().tail_c);
  CHECK(rep.max_r6V > 2 * q1_ref().tail_c * q1_ref().tail_c);
  // stability of the bound under resolution doubling
  auto fine = find_harmonic(1, 2000.0, 5e-4);
  auto rep2 = potential_report(fine);
  CHECK(rep2.max_r6V == doctest::Approx(rep.max_r6V).epsilon(1e-6));
}

TEST_CASE("energy minimality under compact perturbations") {
  const auto& q1 = q1_ref();
  auto seg_energy = [&](const std::function<double(double)>& val,
                        const std::function<double(double)>& der, double a,
                        double b) {
    return 0.5 * adaptive_quad(
                     [&](double r) {
                       double s = std::sin(val(r));
                       double d = der(r);
                       return d * d * r * r + 2 * s * s;
                     },
                     a, b, 1e-10);
  };
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> ua(1.5, 20.0), ul(1.0, 30.0),
      uamp(-0.5, 0.5), uw(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    double a = ua(rng), b = a + ul(rng), amp = uamp(rng), w = uw(rng);
    auto eta = [=](double r) {
      if (r <= a || r >= b) return 0.0;
      double t = (r - a) * (b - r) / ((b - a) * (b - a) / 4.0);
      return amp * t * t * std::sin(w * r);
    };
    auto eta_p = [=](double r) {
      if (r <= a || r >= b) return 0.0;
      double n = (b - a) * (b - a) / 4.0;
      double t = (r - a) * (b - r) / n;
      double tp = (a + b - 2 * r) / n;
      return amp * (2 * t * tp * std::sin(w * r) + t * t * w * std::cos(w * r));
    };
    const double eps = 0.02;
    double e_base = seg_energy([&](double r) { return q1.value(r); },
                               [&](double r) { return q1.deriv(r); }, a, b);
    double e_pert =
        seg_energy([&](double r) { return q1.value(r) + eps * eta(r); },
                   [&](double r) { return q1.deriv(r) + eps * eta_p(r); }, a, b);
    CHECK(e_pert > e_base);
  }
}
