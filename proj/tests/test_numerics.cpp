#include <cmath>
#include <vector>

#include "doctest.h"
#include "extwm/ode.hpp"
#include "extwm/quad.hpp"
#include "extwm/rational.hpp"

using namespace extwm;

TEST_CASE("adaptive quadrature hits analytic integrals") {
  CHECK(adaptive_quad([](double x) { return std::sin(x); }, 0.0, M_PI) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(adaptive_quad([](double x) { return std::exp(-x); }, 0.0, 30.0) ==
        doctest::Approx(1.0 - std::exp(-30.0)).epsilon(1e-12));
}

TEST_CASE("cumulative cubic prefix/suffix integrals are 4th order") {
  auto run = [](std::size_t n) {
    const double h = 2.0 / (n - 1);
    std::vector<double> fv(n);
    for (std::size_t i = 0; i < n; ++i) fv[i] = std::cos(1.7 * (i * h));
    auto pre = cumulative_prefix_cubic(fv, h);
    auto suf = cumulative_suffix_cubic(fv, h);
    double emax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = i * h;
      emax = std::max(emax, std::abs(pre[i] - std::sin(1.7 * x) / 1.7));
      emax = std::max(emax,
                      std::abs(suf[i] - (std::sin(1.7 * 2.0) - std::sin(1.7 * x)) / 1.7));
    }
    return emax;
  };
  const double e1 = run(201), e2 = run(401);
  CHECK(e1 < 1e-8);
  CHECK(e2 < e1 / 8.0);  // >= 4th order decay
}

TEST_CASE("dopri5 integrates a stiff-ish oscillator accurately") {
  Dopri5<2> solver(
      [](double, const std::array<double, 2>& y, std::array<double, 2>& d) {
        d[0] = y[1];
        d[1] = -25.0 * y[0];
      },
      1e-12, 1e-14);
  auto res = solver.integrate(0.0, {1.0, 0.0}, 3.0);
  CHECK(res.y.back()[0] == doctest::Approx(std::cos(15.0)).epsilon(1e-9));
  CHECK(res.y.back()[1] == doctest::Approx(-5.0 * std::sin(15.0)).epsilon(1e-9));
}

TEST_CASE("rational polynomial evaluation and exact integration") {
  // q(u) = 1 + 2u - u^3 in the shifted variable u = x - 1/2
  RationalPoly q(Rational(1, 2), {1, 2, 0, -1});
  CHECK(q.eval(Rational(1, 2)) == Rational(1));
  CHECK(q.eval(Rational(3, 2)) == Rational(2));  // 1 + 2 - 1
  // integral over [1/2, 3/2]: u from 0 to 1 of (1+2u-u^3) = 1 + 1 - 1/4
  CHECK(q.integrate(Rational(1, 2), Rational(3, 2)) == Rational(7, 4));
  CHECK(q.derivative().eval(Rational(1, 2)) == Rational(2));
  CHECK(decimal_string(Rational(7, 4), 3) == "1.750");
  CHECK(decimal_string(Rational(-1, 3), 4) == "-0.3333");
}
