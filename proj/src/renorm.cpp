#include "extwm/renorm.hpp"

#include <cmath>
#include <stdexcept>

#include "extwm/ode.hpp"
#include "extwm/phase_plane.hpp"
#include "extwm/quad.hpp"

namespace extwm::renorm {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kAlpha = 6.0 / 5.0;
constexpr double kBeta = 5.0 / 4.0;
}  // namespace

double z_shift(int j) { return (2.0 * j - 1.0) * kPi / 4.0; }

double eps_for(int j) {
  if (j < 4 || j % 2 != 0)
    throw std::domain_error("eps_for: j must be even and >= 4");
  double eps = std::sqrt(72.0 / (29.0 * kPi * (2.0 * j - 1.0)));
  if (!(eps > 0.0 && eps < 0.35))
    throw std::logic_error("eps_for: eps out of (0, 7/20)");
  return eps;
}

double g(double z) {
  return 0.25 * std::cos(2 * z) - (29.0 / 18.0) * z * std::sin(2 * z);
}

double g_prime(double z) {
  return -0.5 * std::sin(2 * z) -
         (29.0 / 18.0) * (std::sin(2 * z) + 2 * z * std::cos(2 * z));
}

double G(double z) {
  return (29.0 / 36.0) * z * std::cos(2 * z) - (5.0 / 18.0) * std::sin(2 * z);
}

double h(double z, double eps) { return std::sin(2 * z) - eps * eps * g(z); }

// h(pi + d): sin(2pi+2d) = sin 2d, cos(2pi+2d) = cos 2d; keep the pi only in
// the linear factor where it costs no precision.
double h_near_pi(double d, double eps) {
  double s = std::sin(2 * d), c = std::cos(2 * d);
  double gpd = 0.25 * c - (29.0 / 18.0) * (kPi + d) * s;
  return s - eps * eps * gpd;
}

// h(pi/2 + d): sin(pi+2d) = -sin 2d, cos(pi+2d) = -cos 2d.
double h_near_half_pi(double d, double eps) {
  double s = std::sin(2 * d), c = std::cos(2 * d);
  double gpd = -0.25 * c + (29.0 / 18.0) * (kPi / 2 + d) * s;
  return -s - eps * eps * gpd;
}

namespace {
// Bisection to machine resolution; fn must change sign on [a, b].
template <class Fn>
double bisect(Fn&& fn, double a, double b) {
  double fa = fn(a);
  for (int it = 0; it < 200; ++it) {
    double m = 0.5 * (a + b);
    if (m == a || m == b) break;
    double fm = fn(m);
    if ((fa <= 0) == (fm <= 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}
}  // namespace

ZetaZeros zeta_zeros(double eps) {
  ZetaZeros z;
  // h(0) = -eps^2/4 < 0, h(pi/4) = 1 + O(eps^2) > 0
  z.zeta0 = bisect([eps](double x) { return h(x, eps); }, 0.0, kPi / 4);
  // offsets: h(pi/2+d) starts at +eps^2/4 and decreases through 0
  z.zeta1 =
      bisect([eps](double d) { return -h_near_half_pi(d, eps); }, 0.0, kPi / 4);
  // h(pi+d) starts at -eps^2/4 and increases through 0
  z.zeta2 = bisect([eps](double d) { return h_near_pi(d, eps); }, 0.0, kPi / 4);
  return z;
}

Enclosure zeta0_enclosure(double eps) {
  Enclosure e;
  double base = eps * eps / 8.0, e4 = std::pow(eps, 4);
  e.lo = base * (1 - e4 / 3.0);
  e.hi = base * (1 - e4 / 9.0);
  e.value = zeta_zeros(eps).zeta0;
  e.inside = (e.lo <= e.value && e.value <= e.hi);
  return e;
}

Enclosure zeta2_enclosure(double eps) {
  Enclosure e;
  double base = eps * eps / 8.0, e2 = eps * eps, e4 = e2 * e2;
  e.lo = base * (1 - (29.0 / 18.0) * kPi * e2 + 10 * e4);
  e.hi = base * (1 - (29.0 / 18.0) * kPi * e2 + 40 * e4);
  e.value = zeta_zeros(eps).zeta2;
  e.inside = (e.lo <= e.value && e.value <= e.hi);
  return e;
}

SignReport lemma_zeros_signcheck(std::size_t n) {
  SignReport rep;
  rep.ok_a_lo = rep.ok_a_hi = rep.ok_c_lo = rep.ok_c_hi = rep.enclosures_ok =
      true;
  const double lo = 1e-3, hi = 0.35;
  rep.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double t = (n == 1) ? 1.0 : double(i) / double(n - 1);
    double eps = lo * std::pow(hi / lo, t);
    double e2 = eps * eps, e4 = e2 * e2;
    SignSample s;
    s.eps = eps;
    // zeta0(a,eps) = (eps^2/8)(1 + a eps^4), g(0) = 1/4
    s.h_a_lo = h(e2 / 8.0 * (1 - e4 / 3.0), eps);
    s.h_a_hi = h(e2 / 8.0 * (1 - e4 / 9.0), eps);
    // pi + zeta2(c,eps) = pi + (eps^2/8)(1 - (29/18)pi eps^2 + c eps^4)
    double head = 1 - (29.0 / 18.0) * kPi * e2;
    s.h_c_lo = h_near_pi(e2 / 8.0 * (head + 10 * e4), eps);
    s.h_c_hi = h_near_pi(e2 / 8.0 * (head + 40 * e4), eps);
    rep.ok_a_lo = rep.ok_a_lo && (s.h_a_lo <= 0.0);
    rep.ok_a_hi = rep.ok_a_hi && (s.h_a_hi >= 0.0);
    rep.ok_c_lo = rep.ok_c_lo && (s.h_c_lo <= 0.0);
    rep.ok_c_hi = rep.ok_c_hi && (s.h_c_hi >= 0.0);
    if (!zeta0_enclosure(eps).inside || !zeta2_enclosure(eps).inside)
      rep.enclosures_ok = false;
    rep.samples.push_back(s);
  }
  rep.all_ok = rep.ok_a_lo && rep.ok_a_hi && rep.ok_c_lo && rep.ok_c_hi &&
               rep.enclosures_ok;
  return rep;
}

double F1(double x, double eps) {
  return 2 * g(x) * eps * eps - 2 * kBeta * std::sin(x) * eps +
         (kBeta * kBeta - 2) * std::sin(2 * x);
}

double F2(double x, double eps) {
  double root = std::sqrt(kAlpha * kAlpha - (x - 2) * (x - 2));
  double s2 = std::sin(2.0);
  return g(x) * eps * eps - eps * (kBeta * s2 / kAlpha) * root -
         (kBeta * kBeta * s2 * s2 * (x - 2) + kAlpha * std::sin(2 * x)) /
             (kAlpha * kAlpha);
}

double disc_F1(double x) {
  // B^2 - 4AC for A = 2g, B = -2 beta sin x, C = (beta^2-2) sin 2x
  return 4 * kBeta * kBeta * std::sin(x) * std::sin(x) -
         8 * g(x) * (kBeta * kBeta - 2) * std::sin(2 * x);
}

double disc_F2(double x) {
  double s2 = std::sin(2.0);
  double b2 = kBeta * kBeta * s2 * s2 / (kAlpha * kAlpha) *
              (kAlpha * kAlpha - (x - 2) * (x - 2));
  // C enters with a minus sign, so -4AC = +4 g(x) (.)/alpha^2
  double fourac = 4 * g(x) *
                  (kBeta * kBeta * s2 * s2 * (x - 2) + kAlpha * std::sin(2 * x)) /
                  (kAlpha * kAlpha);
  return b2 + fourac;
}

namespace {
// Certify expr < 0 on [a, b] by midpoint + Lipschitz subdivision.
template <class Fn>
bool certify_negative(Fn&& fn, double a, double b, double lip, int depth,
                      double& worst, std::size_t& count) {
  double m = 0.5 * (a + b), hw = 0.5 * (b - a);
  double bound = fn(m) + lip * hw;
  if (bound < 0) {
    ++count;
    if (bound > worst) worst = bound;
    return true;
  }
  if (depth <= 0 || hw < 1e-10) return false;
  return certify_negative(fn, a, m, lip, depth - 1, worst, count) &&
         certify_negative(fn, m, b, lip, depth - 1, worst, count);
}
}  // namespace

ScanReport discriminant_scan_F1(std::size_t samples) {
  ScanReport rep;
  rep.endpoint_degenerate = true;  // disc_F1(pi) = 0: both terms carry sin x
  rep.all_negative_interior = true;
  rep.max_interior = -1e300;
  for (std::size_t i = 0; i + 1 < samples; ++i) {  // exclude x = pi itself
    double x = 2.0 + (kPi - 2.0) * double(i) / double(samples - 1);
    double v = disc_F1(x);
    if (v > rep.max_interior) {
      rep.max_interior = v;
      rep.argmax = x;
    }
    if (v >= 0) rep.all_negative_interior = false;
  }
  // Factorization disc_F1 = sin(x) * q(x) with q = 4 beta^2 sin x + 7 g cos x;
  // sin x > 0 on [2, pi), so certifying q < 0 on the closed interval plus the
  // explicit zero at pi settles the sign.
  auto q = [](double x) {
    return 4 * kBeta * kBeta * std::sin(x) + 7 * g(x) * std::cos(x);
  };
  // |q'| <= 4 beta^2 + 7 (sup|g'| + sup|g|) <= 6.25 + 7(12.3 + 5.4) < 130
  rep.certified_upper_bound = -1e300;
  rep.certified = certify_negative(q, 2.0, kPi, 130.0, 40,
                                   rep.certified_upper_bound, rep.subintervals);
  return rep;
}

ScanReport discriminant_scan_F2(std::size_t samples) {
  ScanReport rep;
  rep.all_negative_interior = true;
  rep.max_interior = -1e300;
  for (std::size_t i = 0; i < samples; ++i) {
    double x = 1.75 + 0.25 * double(i) / double(samples - 1);
    double v = disc_F2(x);
    if (v > rep.max_interior) {
      rep.max_interior = v;
      rep.argmax = x;
    }
    if (v >= 0) rep.all_negative_interior = false;
  }
  // crude Lipschitz constant on [7/4, 2] (see header notes): < 100
  rep.certified_upper_bound = -1e300;
  rep.certified = certify_negative(disc_F2, 1.75, 2.0, 100.0, 40,
                                   rep.certified_upper_bound, rep.subintervals);
  return rep;
}

double y1(double z) { return -kBeta * std::sin(z); }

double y2(double z) {
  return -kBeta * std::sin(2.0) *
         std::sqrt(1 - (25.0 / 36.0) * (z - 2) * (z - 2));
}

RegionReport renorm_region_check(double eps) {
  RegionReport rep;
  const std::size_t n = 2001;
  rep.boundary_min_1 = rep.boundary_min_2 = 1e300;
  for (std::size_t i = 0; i < n; ++i) {
    double x = 2.0 + (kPi - 2.0) * double(i) / double(n - 1);
    double yv = y1(x), yp = -kBeta * std::cos(x);
    double nu = yp * yv - std::sin(2 * x) + eps * yv + eps * eps * g(x);
    rep.boundary_min_1 = std::min(rep.boundary_min_1, nu);
    rep.identity_gap_1 =
        std::max(rep.identity_gap_1, std::abs(nu - 0.5 * F1(x, eps)));
  }
  for (std::size_t i = 0; i < n; ++i) {
    double x = 1.75 + 0.25 * double(i) / double(n - 1);
    double root = std::sqrt(1 - (25.0 / 36.0) * (x - 2) * (x - 2));
    double yv = y2(x);
    double yp = kBeta * std::sin(2.0) * (25.0 / 36.0) * (x - 2) / root;
    double nu = yp * yv - std::sin(2 * x) + eps * yv + eps * eps * g(x);
    rep.boundary_min_2 = std::min(rep.boundary_min_2, nu);
    // direct normal product exceeds F2 by -(1/6) sin 2x >= 0 on this range
    rep.identity_gap_2 = std::max(
        rep.identity_gap_2,
        std::abs(nu - (F2(x, eps) - (1.0 / 6.0) * std::sin(2 * x))));
  }
  rep.boundary_nonneg = rep.boundary_min_1 >= 0 && rep.boundary_min_2 >= 0;
  rep.int_y1_part = adaptive_quad([](double x) { return -y1(x); }, 2.0, kPi);
  rep.int_y2_part = adaptive_quad([](double x) { return -y2(x); }, 1.75, 2.0);
  rep.area = rep.int_y1_part + rep.int_y2_part;
  rep.area_gt_1 = rep.area > 1.0;
  rep.budget_quad = (29.0 * kPi / 36.0) * eps * eps;
  rep.budget_contradiction_false = rep.budget_quad < eps;
  return rep;
}

ROrbit renorm_manifold_orbit(double eps, double seed_zeta, int branch,
                             double rtol) {
  using S = std::array<double, 3>;
  ROrbit orb;
  orb.eps = eps;
  auto rhs = [eps](double, const S& s, S& d) {
    d[0] = s[1];
    d[1] = std::sin(2 * s[0]) - eps * s[1] - eps * eps * g(s[0]);
    d[2] = s[1] * s[1];
  };
  Dopri5<3> solver(rhs, rtol, 1e-14);
  double hp = 2 * std::cos(2 * seed_zeta) - eps * eps * g_prime(seed_zeta);
  double lam = 0.5 * (-eps + std::sqrt(eps * eps + 4 * std::max(hp, 1e-12)));
  double nrm = std::sqrt(1 + lam * lam);
  double delta = 1e-8 * (1 + std::abs(seed_zeta));
  S s{seed_zeta + branch * delta / nrm, branch * delta * lam / nrm, 0.0};
  double t = 0.0;
  const double t_chunk = 0.05, t_max = 2000.0;
  double eta_sign = (branch > 0) ? 1.0 : -1.0;
  while (t < t_max) {
    S prev = s;
    auto res = solver.integrate(t, s, t + t_chunk);
    s = res.y.back();
    t = res.t.back();
    orb.pts.push_back({t, s[0], s[1], s[2]});
    if (std::abs(s[0] - seed_zeta) > 10) {
      orb.escaped = true;
      return orb;
    }
    bool away = std::abs(prev[0] - seed_zeta) > 1e-3;
    if (away && prev[1] * eta_sign > 0 && s[1] * eta_sign <= 0) {
      // refine the eta = 0 crossing by bisection on the step length
      double a = 0, b = t_chunk;
      S sa = prev;
      for (int it = 0; it < 60; ++it) {
        double m = 0.5 * (a + b);
        auto mid = solver.integrate(t - t_chunk + a, sa, t - t_chunk + m);
        if (mid.y.back()[1] * eta_sign > 0) {
          a = m;
          sa = mid.y.back();
        } else {
          b = m;
        }
      }
      orb.crossed = true;
      orb.crossing_t = t - t_chunk + a;
      orb.crossing_zeta = sa[0];
      orb.crossing_ieta2 = sa[2];
      return orb;
    }
  }
  return orb;
}

ManifoldReport renorm_manifold_check(int j) {
  double eps = eps_for(j);
  ManifoldReport rep;
  rep.zz = zeta_zeros(eps);
  rep.plus = renorm_manifold_orbit(eps, rep.zz.zeta0, +1);
  rep.minus = renorm_manifold_orbit(eps, kPi + rep.zz.zeta2, -1);
  if (rep.plus.crossed) {
    rep.p1 = rep.plus.crossing_zeta;
    rep.p1_ok = (rep.p1 > kPi / 2 + rep.zz.zeta1) && (rep.p1 < kPi);
  }
  if (rep.minus.crossed) {
    rep.p2 = rep.minus.crossing_zeta;
    rep.p2_ok = (rep.p2 > rep.zz.zeta0) && (rep.p2 < kPi / 2 + rep.zz.zeta1);
  }
  return rep;
}

double renorm_conservation_residual(const ROrbit& orb, std::size_t i0,
                                    std::size_t i1) {
  const auto& a = orb.pts.at(i0);
  const auto& b = orb.pts.at(i1);
  double eps = orb.eps;
  double lhs = 0.5 * (b.eta * b.eta - a.eta * a.eta) + eps * (b.ieta2 - a.ieta2);
  double rhs = 0.5 * (std::cos(2 * a.zeta) - std::cos(2 * b.zeta)) -
               eps * eps * (G(b.zeta) - G(a.zeta));
  return std::abs(lhs - rhs);
}

double budget_rhs(double eps) {
  ZetaZeros z = zeta_zeros(eps);
  double s0 = std::sin(z.zeta0), s2 = std::sin(z.zeta2);
  double head = s0 * s0 - s2 * s2;  // (1/2)(cos 2zeta2 - cos 2zeta0)
  // G(pi + zeta2) evaluated with reduced trig arguments
  double Gpi2 = (29.0 / 36.0) * (kPi + z.zeta2) * std::cos(2 * z.zeta2) -
                (5.0 / 18.0) * std::sin(2 * z.zeta2);
  return head + eps * eps * (Gpi2 - G(z.zeta0));
}

namespace {
double budget_c6(double eps) {
  ZetaZeros z = zeta_zeros(eps);
  double s0 = std::sin(z.zeta0), s2 = std::sin(z.zeta2);
  double head = s0 * s0 - s2 * s2;
  // G(pi + zeta2) - G(pi), organized so no large values are subtracted
  double dG = (29.0 / 36.0) * (kPi * (-2 * s2 * s2) +
                               z.zeta2 * std::cos(2 * z.zeta2)) -
              (5.0 / 18.0) * std::sin(2 * z.zeta2);
  double num = head + eps * eps * (dG - G(z.zeta0));
  return num / std::pow(eps, 6);
}
}  // namespace

double budget_eps6_coefficient() {
  // c6(eps) = c6 + O(eps^2): one Richardson step at eps, eps/2
  double c1 = budget_c6(0.05), c2 = budget_c6(0.025);
  return (4 * c2 - c1) / 3.0;
}

double field_identity_gap(int j) {
  double zj = z_shift(j);
  double sgn = (j % 2 == 0) ? 1.0 : -1.0;
  double worst = 0.0;
  for (int i = 0; i <= 800; ++i) {
    double zeta = -1.0 + 5.0 * i / 800.0;
    double lhs = phase::f(zj + zeta);
    double rhs = sgn * (29.0 / 18.0) * zj * std::sin(2 * zeta) - sgn * g(zeta);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double pullback_gap(int j, double zeta_init, double eta_init, double s_final) {
  double eps = eps_for(j);
  double zj = z_shift(j);
  using S2 = std::array<double, 2>;
  Dopri5<2> renormed(
      [eps](double, const S2& s, S2& d) {
        d[0] = s[1];
        d[1] = std::sin(2 * s[0]) - eps * s[1] - eps * eps * g(s[0]);
      },
      1e-12, 1e-14);
  Dopri5<2> strip(
      [](double, const S2& s, S2& d) {
        d[0] = s[1];
        d[1] = -s[1] + phase::f(s[0]);
      },
      1e-12, 1e-14);
  S2 a{zeta_init, eta_init};
  S2 b{zj + zeta_init, eta_init / eps};
  double worst = 0.0;
  const int k = 40;
  for (int i = 1; i <= k; ++i) {
    double s0 = s_final * (i - 1) / double(k), s1 = s_final * i / double(k);
    a = renormed.integrate(s0, a, s1).y.back();
    b = strip.integrate(eps * s0, b, eps * s1).y.back();
    worst = std::max(worst, std::abs(b[0] - zj - a[0]));
    worst = std::max(worst, std::abs(eps * b[1] - a[1]));
  }
  return worst;
}

}  // namespace extwm::renorm
