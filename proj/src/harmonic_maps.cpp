#include "extwm/harmonic.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "extwm/ode.hpp"
#include "extwm/quad.hpp"

namespace extwm::harmonic {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

// pendulum form rhs in tau = ln r
inline void pend_rhs(const std::array<double, 2>& s, std::array<double, 2>& d) {
  d[0] = s[1];
  d[1] = std::sin(2 * s[0]) - s[1];
}
}  // namespace

ShootingResult shoot(double slope, double r_max) {
  if (slope < 0) throw std::domain_error("shoot: slope must be >= 0");
  ShootingResult out;
  out.slope = slope;
  if (slope == 0.0) {
    out.cls = ShotClass::converged;
    out.band = 0;
    out.r_exit = r_max;
    out.r = {1.0, r_max};
    out.Q = {0.0, 0.0};
    out.W = {0.0, 0.0};
    return out;
  }
  using S = std::array<double, 2>;
  Dopri5<2> solver([](double, const S& s, S& d) { pend_rhs(s, d); }, 1e-10,
                   1e-12);
  double tau_max = std::log(r_max);
  auto res = solver.integrate(
      0.0, {0.0, slope}, tau_max,
      [](double, const S& s) { return s[1] <= 0.0 || s[0] > 60.0; });
  for (std::size_t i = 0; i < res.t.size(); ++i) {
    out.r.push_back(std::exp(res.t[i]));
    out.Q.push_back(res.y[i][0]);
    out.W.push_back(res.y[i][1]);
  }
  double Qend = res.y.back()[0], Wend = res.y.back()[1];
  out.r_exit = std::exp(res.t.back());
  if (Wend <= 0.0) {
    // turned around: trapped below the next barrier forever
    out.cls = ShotClass::undershoot;
    out.band = static_cast<int>(std::floor(Qend / kPi)) + 1;
    return out;
  }
  int nearest = static_cast<int>(std::lround(Qend / kPi));
  if (std::abs(Qend - nearest * kPi) < 0.1 && std::abs(Wend) < 0.1) {
    out.cls = ShotClass::converged;
    out.band = nearest;
  } else {
    // still climbing past the last barrier it crossed
    out.cls = ShotClass::overshoot;
    out.band = static_cast<int>(std::floor(Qend / kPi));
  }
  return out;
}

namespace {
// +1 overshoot of n*pi, -1 undershoot, for the bisection predicate
int classify_for(double slope, int n, double tau_max) {
  using S = std::array<double, 2>;
  Dopri5<2> solver([](double, const S& s, S& d) { pend_rhs(s, d); }, 1e-11,
                   1e-13);
  const double target = n * kPi;
  auto res = solver.integrate(0.0, {0.0, slope}, tau_max,
                              [target](double, const S& s) {
                                return s[0] > target || s[1] <= 0.0;
                              });
  if (res.y.back()[0] > target) return +1;
  return -1;
}
}  // namespace

double HarmonicMap::value(double r) const {
  double tau = std::log(r);
  double u = tau / dtau;
  auto i = static_cast<std::size_t>(u);
  if (i + 1 >= Q.size()) return Q.back();
  double s = u - double(i);
  // cubic Hermite with exact tau-derivatives W and W' = sin 2Q - W
  double q0 = Q[i], q1 = Q[i + 1], w0 = W[i] * dtau, w1 = W[i + 1] * dtau;
  double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  return h00 * q0 + h10 * w0 + h01 * q1 + h11 * w1;
}

double HarmonicMap::deriv(double r) const {
  double tau = std::log(r);
  double u = tau / dtau;
  auto i = static_cast<std::size_t>(u);
  if (i + 1 >= W.size()) return W.back() / r;
  double s = u - double(i);
  double w0 = W[i], w1 = W[i + 1];
  double d0 = (std::sin(2 * Q[i]) - w0) * dtau;
  double d1 = (std::sin(2 * Q[i + 1]) - w1) * dtau;
  double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  return (h00 * w0 + h10 * d0 + h01 * w1 + h11 * d1) / r;
}

double HarmonicMap::potential(double r) const {
  double q = value(r);
  return (2.0 / (r * r)) * (std::cos(2 * q) - 1.0);
}

HarmonicMap find_harmonic(int n, double r_max, double dtau) {
  if (n < 1) throw std::domain_error("find_harmonic: n >= 1");
  const double tau_max = std::log(r_max);
  double lo = 0.0, hi = 1.0;
  while (classify_for(hi, n, tau_max) < 0) {
    hi *= 2.0;
    if (hi > 10.0) throw std::runtime_error("find_harmonic: no overshoot below S_max = 10");
  }
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    (classify_for(mid, n, tau_max) < 0 ? lo : hi) = mid;
  }
  HarmonicMap map;
  map.n = n;
  map.slope = 0.5 * (lo + hi);
  map.r_max = r_max;
  map.dtau = dtau;
  std::size_t steps = static_cast<std::size_t>(std::ceil(tau_max / map.dtau));
  map.dtau = tau_max / double(steps);
  map.Q.reserve(steps + 1);
  map.W.reserve(steps + 1);
  // classic RK4 on the pendulum form
  std::array<double, 2> s{0.0, map.slope};
  map.Q.push_back(s[0]);
  map.W.push_back(s[1]);
  const double h = map.dtau;
  std::array<double, 2> k1, k2, k3, k4, t;
  for (std::size_t i = 0; i < steps; ++i) {
    pend_rhs(s, k1);
    t = {s[0] + 0.5 * h * k1[0], s[1] + 0.5 * h * k1[1]};
    pend_rhs(t, k2);
    t = {s[0] + 0.5 * h * k2[0], s[1] + 0.5 * h * k2[1]};
    pend_rhs(t, k3);
    t = {s[0] + h * k3[0], s[1] + h * k3[1]};
    pend_rhs(t, k4);
    s[0] += h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
    s[1] += h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
    map.Q.push_back(s[0]);
    map.W.push_back(s[1]);
  }
  // keep the window low: the slope-bisection error excites the r^{+1} mode,
  // which contaminates r^2 (n pi - Q) like r^3 near r_max
  auto fit = tail_fit(map, r_max / 40.0, r_max / 10.0);
  map.tail_c = fit.c;
  map.tail_spread = fit.rel_spread;
  return map;
}

TailFit tail_fit(const HarmonicMap& q, double R1, double R2) {
  if (!(R2 > R1 && R1 > 1.0)) throw std::domain_error("tail_fit: bad window");
  TailFit out;
  double sum = 0, mn = 1e300, mx = -1e300;
  const int m = 400;
  for (int i = 0; i <= m; ++i) {
    double r = R1 * std::pow(R2 / R1, double(i) / m);
    double v = r * r * (q.n * kPi - q.value(r));
    sum += v;
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  out.c = sum / (m + 1);
  out.rel_spread = (out.c != 0.0) ? (mx - mn) / std::abs(out.c) : 0.0;
  return out;
}

double ode_residual(const HarmonicMap& q) {
  const double h = q.dtau;
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < q.Q.size(); ++i) {
    double qtt = (-q.Q[i - 2] + 16 * q.Q[i - 1] - 30 * q.Q[i] +
                  16 * q.Q[i + 1] - q.Q[i + 2]) /
                 (12 * h * h);
    double qt =
        (q.Q[i - 2] - 8 * q.Q[i - 1] + 8 * q.Q[i + 1] - q.Q[i + 2]) / (12 * h);
    worst = std::max(worst, std::abs(qtt + qt - std::sin(2 * q.Q[i])));
  }
  return worst;
}

GaugeReport linearized_gauge(const HarmonicMap& q) {
  GaugeReport rep;
  // psi = rQ' = W; its tau-form equation is psi_tt + psi_t = 2 cos(2Q) psi
  const double h = q.dtau;
  rep.lin_residual = 0.0;
  rep.psi_min = 1e300;
  std::size_t i100 = static_cast<std::size_t>(std::log(100.0) / h);
  for (std::size_t i = 2; i + 2 < q.W.size(); ++i) {
    double wtt = (-q.W[i - 2] + 16 * q.W[i - 1] - 30 * q.W[i] +
                  16 * q.W[i + 1] - q.W[i + 2]) /
                 (12 * h * h);
    double wt =
        (q.W[i - 2] - 8 * q.W[i - 1] + 8 * q.W[i + 1] - q.W[i + 2]) / (12 * h);
    rep.lin_residual = std::max(
        rep.lin_residual, std::abs(wtt + wt - 2 * std::cos(2 * q.Q[i]) * q.W[i]));
    if (i <= i100) rep.psi_min = std::min(rep.psi_min, q.W[i]);
  }
  // phi = Q'; the equation gives phi'(1) = -2 slope, so phi'(1) + 2 phi(1) = 0.
  // Evaluate by one-sided differentiation through the first five grid radii
  // r_k = e^{k h}, where phi = W/r is known without interpolation error.
  double x[5], fv[5];
  for (int k = 0; k < 5; ++k) {
    x[k] = std::exp(k * h);
    fv[k] = q.W[k] / x[k];
  }
  double dphi = 0.0;
  for (int j = 0; j < 5; ++j) {
    // d/dx of the j-th Lagrange basis at x[0]
    double sum = 0.0;
    for (int m = 0; m < 5; ++m) {
      if (m == j) continue;
      double prod = 1.0;
      for (int l = 0; l < 5; ++l) {
        if (l == j || l == m) continue;
        prod *= (x[0] - x[l]) / (x[j] - x[l]);
      }
      sum += prod / (x[j] - x[m]);
    }
    dphi += fv[j] * sum;
  }
  rep.boundary_defect = dphi + 2 * fv[0];
  return rep;
}

PotentialReport potential_report(const HarmonicMap& q, double lo, double hi) {
  PotentialReport rep;
  rep.nonpositive = true;
  rep.min_V = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    double r = lo * std::pow(hi / lo, double(i) / 2000.0);
    double v = q.potential(r);
    if (v > 1e-14) rep.nonpositive = false;
    rep.max_r6V = std::max(rep.max_r6V, std::pow(r, 6) * std::abs(v));
    rep.min_V = std::min(rep.min_V, v);
  }
  rep.V_at_1 = q.potential(1.0);
  return rep;
}

double energy(const HarmonicMap& q) {
  // in tau: (1/2) int (W^2 + 2 sin^2 Q) e^{tau} dtau
  std::vector<double> f(q.Q.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    double s = std::sin(q.Q[i]);
    f[i] = (q.W[i] * q.W[i] + 2 * s * s) * std::exp(i * q.dtau);
  }
  return 0.5 * simpson_samples(f, q.dtau);
}

}  // namespace extwm::harmonic
