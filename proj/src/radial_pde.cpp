#include "extwm/radial_pde.hpp"

#include <cmath>
#include <stdexcept>

#include "extwm/quad.hpp"

namespace extwm::pde {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kSphereArea4 = 8.0 * kPi * kPi / 3.0;  // |S^4|

// centered first derivative on the uniform grid, one-sided 2nd order at ends
std::vector<double> d_dr(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  std::vector<double> d(n);
  d[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2 * h);
  d[n - 1] = (3 * f[n - 1] - 4 * f[n - 2] + f[n - 3]) / (2 * h);
  return d;
}

double part_integral(const std::vector<double>& f, double h) {
  return 0.5 * simpson_samples(f, h);
}
}  // namespace

EnergyReport energy(const WaveState& s) {
  s.validate();
  const auto& g = s.grid;
  auto dpsi = d_dr(s.psi, g.h);
  std::vector<double> kin(g.n), grad(g.n), pot(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    double r = g.r(i), sn = std::sin(s.psi[i]);
    kin[i] = s.psi_dot[i] * s.psi_dot[i] * r * r;
    grad[i] = dpsi[i] * dpsi[i] * r * r;
    pot[i] = 2 * sn * sn;
  }
  EnergyReport rep;
  rep.kinetic = part_integral(kin, g.h);
  rep.gradient = part_integral(grad, g.h);
  rep.sine_potential = part_integral(pot, g.h);
  rep.total = rep.kinetic + rep.gradient + rep.sine_potential;
  return rep;
}

double exterior_tail(const WaveState& s, double R) {
  s.validate();
  const auto& g = s.grid;
  if (R < g.r_min || R > g.r_max) throw std::out_of_range("tail radius");
  auto dpsi = d_dr(s.psi, g.h);
  std::size_t i0 = static_cast<std::size_t>(std::ceil((R - g.r_min) / g.h));
  std::vector<double> f;
  f.reserve(g.n - i0);
  for (std::size_t i = i0; i < g.n; ++i) {
    double r = g.r(i), sn = std::sin(s.psi[i]);
    f.push_back((s.psi_dot[i] * s.psi_dot[i] + dpsi[i] * dpsi[i]) * r * r +
                2 * sn * sn);
  }
  return f.size() < 3 ? 0.0 : 0.5 * simpson_samples(f, g.h);
}

HardyStraussReport hardy_strauss_check(const WaveState& s) {
  s.validate();
  const auto& g = s.grid;
  auto dpsi = d_dr(s.psi, g.h);
  std::vector<double> num(g.n), den(g.n);
  double sup = 0.0;
  for (std::size_t i = 0; i < g.n; ++i) {
    double r = g.r(i);
    num[i] = s.psi[i] * s.psi[i];
    den[i] = dpsi[i] * dpsi[i] * r * r;
    sup = std::max(sup, std::abs(s.psi[i]) * std::sqrt(r));
  }
  double a = simpson_samples(num, g.h), b = simpson_samples(den, g.h);
  HardyStraussReport rep;
  if (b > 0) {
    rep.hardy_ratio = a / (4 * b);
    rep.strauss_sup = sup / (2 * std::sqrt(b));
  }
  return rep;
}

namespace {
enum class Model { nonlinear, linear };

void accel(const WaveState& s, Model m, std::vector<double>& a) {
  const auto& g = s.grid;
  a.assign(g.n, 0.0);
  const double h2 = g.h * g.h;
  for (std::size_t i = 1; i + 1 < g.n; ++i) {
    double r = g.r(i);
    double lap = (s.psi[i + 1] - 2 * s.psi[i] + s.psi[i - 1]) / h2 +
                 (s.psi[i + 1] - s.psi[i - 1]) / (g.h * r);
    double pot = (m == Model::nonlinear) ? std::sin(2 * s.psi[i]) / (r * r)
                                         : 2 * s.psi[i] / (r * r);
    a[i] = lap - pot;
  }
  // endpoints frozen: Dirichlet at r = 1, domain-of-dependence at r_max
}

Trajectory run(const WaveState& s0, double dt, double t_final,
               std::size_t record_every, Model m) {
  s0.validate();
  if (!(dt > 0) || dt > s0.grid.h)
    throw std::invalid_argument("evolve: need 0 < dt <= h (CFL)");
  if (record_every == 0) record_every = 1;
  Trajectory traj;
  traj.dt = dt;
  WaveState s = s0;
  auto record = [&]() {
    traj.snaps.push_back(s);
    traj.energy_series.push_back(energy(s).total);
  };
  record();
  std::vector<double> a;
  accel(s, m, a);
  const auto steps = static_cast<std::size_t>(std::llround(t_final / dt));
  for (std::size_t k = 1; k <= steps; ++k) {
    for (std::size_t i = 0; i < s.grid.n; ++i) {
      s.psi_dot[i] += 0.5 * dt * a[i];
      s.psi[i] += dt * s.psi_dot[i];
    }
    accel(s, m, a);
    double amax = 0.0;
    for (std::size_t i = 0; i < s.grid.n; ++i) {
      s.psi_dot[i] += 0.5 * dt * a[i];
      amax = std::max(amax, std::abs(s.psi[i]));
    }
    s.t = s0.t + double(k) * dt;
    if (!std::isfinite(amax) || amax > 1e6)
      throw std::runtime_error("evolve: field blow-up at t = " +
                               std::to_string(s.t));
    if (k % record_every == 0 || k == steps) record();
  }
  return traj;
}
}  // namespace

Trajectory evolve(const WaveState& s0, double dt, double t_final,
                  std::size_t record_every) {
  return run(s0, dt, t_final, record_every, Model::nonlinear);
}

Trajectory evolve_linear(const WaveState& s0, double dt, double t_final,
                         std::size_t record_every) {
  return run(s0, dt, t_final, record_every, Model::linear);
}

WaveState to_five_dim(const WaveState& s) {
  WaveState u = s;
  for (std::size_t i = 0; i < s.grid.n; ++i) {
    double r = s.grid.r(i);
    u.psi[i] = s.psi[i] / r;
    u.psi_dot[i] = s.psi_dot[i] / r;
  }
  return u;
}

WaveState from_five_dim(const WaveState& u) {
  WaveState s = u;
  for (std::size_t i = 0; i < u.grid.n; ++i) {
    double r = u.grid.r(i);
    s.psi[i] = u.psi[i] * r;
    s.psi_dot[i] = u.psi_dot[i] * r;
  }
  return s;
}

namespace {
double local_energy(const WaveState& s, double R) {
  const auto& g = s.grid;
  auto dpsi = d_dr(s.psi, g.h);
  auto i1 = static_cast<std::size_t>(std::floor((R - g.r_min) / g.h));
  i1 = std::min(i1, g.n - 1);
  std::vector<double> f(i1 + 1);
  for (std::size_t i = 0; i <= i1; ++i) {
    double r = g.r(i), sn = std::sin(s.psi[i]);
    f[i] = (s.psi_dot[i] * s.psi_dot[i] + dpsi[i] * dpsi[i]) * r * r +
           2 * sn * sn;
  }
  return 0.5 * simpson_samples(f, g.h);
}
}  // namespace

ScatteringReport scattering_diagnostics(const Trajectory& traj, double R,
                                        double t0, double t1) {
  if (traj.snaps.empty()) throw std::invalid_argument("empty trajectory");
  const auto& g = traj.snaps.front().grid;
  if (R > g.r_max / 2) throw std::out_of_range("diagnostic radius > r_max/2");
  const double slack = traj.dt > 0 ? traj.dt : 1e-12;
  if (t0 < traj.snaps.front().t - slack || t1 > traj.snaps.back().t + slack ||
      t1 < t0)
    throw std::out_of_range("window outside trajectory range");
  ScatteringReport rep;
  std::vector<double> ts, l6cubed;
  for (const auto& s : traj.snaps) {
    rep.t.push_back(s.t);
    rep.local_energy.push_back(local_energy(s, R));
    if (s.t >= t0 - 1e-12 && s.t <= t1 + 1e-12) {
      std::vector<double> f(g.n);
      for (std::size_t i = 0; i < g.n; ++i) {
        double r = g.r(i), u = s.psi[i] / r;
        f[i] = std::pow(u, 6) * std::pow(r, 4);
      }
      double l6 = std::pow(kSphereArea4 * simpson_samples(f, g.h), 1.0 / 6.0);
      ts.push_back(s.t);
      l6cubed.push_back(l6 * l6 * l6);
    }
  }
  // trapezoid in time over the recorded snapshots inside the window
  double acc = 0.0;
  for (std::size_t i = 1; i < ts.size(); ++i)
    acc += 0.5 * (l6cubed[i] + l6cubed[i - 1]) * (ts[i] - ts[i - 1]);
  rep.s_norm_window = std::cbrt(acc);
  double peak = 0.0;
  for (double v : rep.local_energy) peak = std::max(peak, v);
  if (peak > 0)
    rep.decay_factor = peak / std::max(rep.local_energy.back(), 1e-8 * peak);
  return rep;
}

WaveState make_bump_state(const RadialGrid& g, double amp_psi, double amp_dot,
                          double a, double b, double osc) {
  WaveState s;
  s.grid = g;
  s.psi.assign(g.n, 0.0);
  s.psi_dot.assign(g.n, 0.0);
  for (std::size_t i = 0; i < g.n; ++i) {
    double r = g.r(i);
    if (r <= a || r >= b) continue;
    double t = (r - a) * (b - r) / ((b - a) * (b - a) / 4.0);
    double v = t * t * (osc != 0.0 ? std::sin(osc * r) : 1.0);
    s.psi[i] = amp_psi * v;
    s.psi_dot[i] = amp_dot * v;
  }
  s.psi[0] = 0.0;
  return s;
}

double state_distance(const WaveState& a, const WaveState& b) {
  if (a.grid.n != b.grid.n || a.grid.h != b.grid.h)
    throw std::invalid_argument("state_distance: grids differ");
  const auto& g = a.grid;
  std::vector<double> dp(g.n), dv(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    dp[i] = a.psi[i] - b.psi[i];
    dv[i] = a.psi_dot[i] - b.psi_dot[i];
  }
  auto dd = d_dr(dp, g.h);
  std::vector<double> f(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    double r = g.r(i);
    f[i] = (dd[i] * dd[i] + dv[i] * dv[i]) * r * r;
  }
  return std::sqrt(simpson_samples(f, g.h));
}

}  // namespace extwm::pde
