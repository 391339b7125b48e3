#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace extwm {

// Adaptive Dormand-Prince 5(4) integrator for small fixed-dimension systems.
template <std::size_t N>
struct OdeResult {
  std::vector<double> t;
  std::vector<std::array<double, N>> y;
  std::size_t steps_accepted = 0;
  std::size_t steps_rejected = 0;
};

template <std::size_t N>
class Dopri5 {
 public:
  using State = std::array<double, N>;
  using Rhs = std::function<void(double, const State&, State&)>;

  explicit Dopri5(Rhs rhs, double rtol = 1e-11, double atol = 1e-13)
      : rhs_(std::move(rhs)), rtol_(rtol), atol_(atol) {}

  // Integrate from (t0,y0) to t1. stop(t,y) may terminate early (returns true);
  // on stop the last accepted step end is the final sample.
  OdeResult<N> integrate(double t0, State y0, double t1,
                         const std::function<bool(double, const State&)>& stop = {},
                         double max_step = std::numeric_limits<double>::infinity()) const {
    OdeResult<N> out;
    double t = t0;
    State y = y0;
    out.t.push_back(t);
    out.y.push_back(y);
    if (std::abs(t1 - t0) <= 1e-14 * (1.0 + std::abs(t0))) return out;
    const double dir = (t1 >= t0) ? 1.0 : -1.0;
    double h = dir * std::min(1e-4, std::abs(t1 - t0));
    State k1;
    rhs_(t, y, k1);
    std::size_t nmax = 50'000'000;
    while (dir * (t1 - t) > 0) {
      if (out.steps_accepted + out.steps_rejected > nmax)
        throw std::runtime_error("dopri5: step budget exhausted");
      if (dir * (t + h - t1) > 0) h = t1 - t;
      if (std::abs(h) > max_step) h = dir * max_step;
      State ynew, k1new;
      double err = step(t, y, k1, h, ynew, k1new);
      if (err <= 1.0) {
        t += h;
        y = ynew;
        k1 = k1new;
        out.t.push_back(t);
        out.y.push_back(y);
        ++out.steps_accepted;
        if (stop && stop(t, y)) break;
      } else {
        ++out.steps_rejected;
      }
      double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
      fac = std::min(5.0, std::max(0.2, fac));
      h *= fac;
      if (std::abs(h) < 1e-15 * (1.0 + std::abs(t)))
        throw std::runtime_error("dopri5: step size underflow");
    }
    return out;
  }

  // Single trial step; returns scaled error estimate (accept iff <= 1).
  double step(double t, const State& y, const State& k1, double h, State& ynew,
              State& k1new) const {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    State k2, k3, k4, k5, k6, k7, tmp;
    auto axpy = [&](const auto&... terms) {
      for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (... + (terms.first * terms.second[i]));
    };
    axpy(std::pair{a21, k1});
    rhs_(t + c2 * h, tmp, k2);
    axpy(std::pair{a31, k1}, std::pair{a32, k2});
    rhs_(t + c3 * h, tmp, k3);
    axpy(std::pair{a41, k1}, std::pair{a42, k2}, std::pair{a43, k3});
    rhs_(t + c4 * h, tmp, k4);
    axpy(std::pair{a51, k1}, std::pair{a52, k2}, std::pair{a53, k3}, std::pair{a54, k4});
    rhs_(t + c5 * h, tmp, k5);
    axpy(std::pair{a61, k1}, std::pair{a62, k2}, std::pair{a63, k3}, std::pair{a64, k4},
         std::pair{a65, k5});
    rhs_(t + h, tmp, k6);
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs_(t + h, ynew, k7);
    k1new = k7;
    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      double sc = atol_ + rtol_ * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += (e / sc) * (e / sc);
    }
    return std::sqrt(err / N);
  }

  double rtol() const { return rtol_; }

 private:
  Rhs rhs_;
  double rtol_, atol_;
};

}  // namespace extwm
