#include "extwm/phase_plane.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "extwm/ode.hpp"

namespace extwm::phase {

double f(double x) { return 0.25 * std::sin(2 * x) + (29.0 / 18.0) * x * std::cos(2 * x); }

double f_prime(double x) {
  return (19.0 / 9.0) * std::cos(2 * x) - (29.0 / 9.0) * x * std::sin(2 * x);
}

double F(double x) { return (5.0 / 18.0) * std::cos(2 * x) + (29.0 / 36.0) * x * std::sin(2 * x); }

double f_bound(double m) { return 0.25 + (29.0 / 18.0) * m; }
double f_prime_bound(double m) { return 19.0 / 9.0 + (29.0 / 9.0) * m; }

std::vector<double> zeros_of_f(double a, double b) {
  if (std::abs(a) > 30.0 || std::abs(b) > 30.0 || a >= b)
    throw std::invalid_argument("zeros_of_f: interval must lie in |x| <= 30");
  std::vector<double> out;
  const int nscan = static_cast<int>(std::ceil((b - a) / 0.01));
  double xprev = a, fprev = f(a);
  for (int i = 1; i <= nscan; ++i) {
    double x = a + (b - a) * i / nscan;
    double fx = f(x);
    if (fprev == 0.0) out.push_back(xprev);
    else if (fprev * fx < 0.0) {
      double lo = xprev, hi = x, flo = fprev;
      for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi), fm = f(mid);
        if (fm == 0.0) { lo = hi = mid; break; }
        if (flo * fm < 0.0) hi = mid;
        else { lo = mid; flo = fm; }
        if (hi - lo < 1e-13) break;
      }
      out.push_back(0.5 * (lo + hi));
    }
    xprev = x; fprev = fx;
  }
  return out;
}

Equilibrium classify(int j, double xj, double field_scale) {
  Equilibrium eq;
  eq.j = j;
  eq.x = xj;
  const double fp = field_scale * f_prime(xj);
  if (std::abs(field_scale * f(xj)) > 1e-10)
    throw std::invalid_argument("classify: x_j is not a zero of the field");
  if (std::abs(fp) <= 1e-8) throw std::runtime_error("degenerate equilibrium");
  const double disc = 1.0 + 4.0 * fp;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    eq.lambda_plus = -0.5 + 0.5 * s;
    eq.lambda_minus = -0.5 - 0.5 * s;
  } else {
    const double s = std::sqrt(-disc);
    eq.lambda_plus = {-0.5, 0.5 * s};
    eq.lambda_minus = {-0.5, -0.5 * s};
  }
  eq.saddle = fp > 0.0;
  if (eq.saddle) {
    const double lp = eq.lambda_plus.real();
    const double nrm = std::sqrt(1.0 + lp * lp);
    eq.unstable_dir = {1.0 / nrm, lp / nrm};
  }
  return eq;
}

namespace {

using Dp = Dopri5<3>;  // state (x, y, integral of y^2)

Dp::Rhs make_rhs(double scale) {
  return [scale](double, const Dp::State& v, Dp::State& d) {
    d[0] = v[1];
    d[1] = -v[1] + scale * f(v[0]);
    d[2] = v[1] * v[1];
  };
}

// Refine an event time g(state)=0 bracketed between two accepted steps by
// bisection on re-integration from the left state.
Dp::State refine_event(const Dp& solver, double t0, const Dp::State& s0, double t1,
                       const std::function<double(const Dp::State&)>& g, double& t_event) {
  double lo = 0.0, hi = t1 - t0;
  Dp::State s_hi{};
  for (int it = 0; it < 60 && hi - lo > 1e-13 * (1.0 + std::abs(t1)); ++it) {
    double mid = 0.5 * (lo + hi);
    auto res = solver.integrate(t0, s0, t0 + mid);
    const Dp::State& sm = res.y.back();
    if (g(s0) * g(sm) <= 0.0) { hi = mid; s_hi = sm; }
    else lo = mid;
  }
  auto res = solver.integrate(t0, s0, t0 + 0.5 * (lo + hi));
  t_event = t0 + 0.5 * (lo + hi);
  return res.y.back();
}

}  // namespace

Orbit unstable_manifold(double xj, int branch, double field_scale, double seed_delta,
                        double rtol) {
  Equilibrium eq = classify(0, xj, field_scale);
  if (!eq.saddle) throw std::invalid_argument("unstable_manifold: not a saddle");
  const double delta = seed_delta > 0.0 ? seed_delta : 1e-8 * (1.0 + std::abs(xj));
  Dp solver(make_rhs(field_scale), rtol, 1e-14);

  Dp::State v{xj + branch * delta * eq.unstable_dir[0],
              branch * delta * eq.unstable_dir[1], 0.0};
  const double y_seed_sign = branch * eq.unstable_dir[1] > 0 ? 1.0 : -1.0;

  Orbit orb;
  double t = 0.0;
  orb.pts.push_back({t, v[0], v[1], v[2]});

  // Spiral sinks of the scaled field (same zeros of f for any positive scale).
  std::vector<double> sinks;
  for (double z : zeros_of_f(-29.0, 29.0))
    if (field_scale * f_prime(z) < 0.0) sinks.push_back(z);

  double near_sink_since = -1.0;
  double near_sink_x = 0.0;
  const double capture_radius = 1e-3;

  const double t_chunk = 0.05;
  const double t_max = 400.0;
  while (t < t_max) {
    auto res = solver.integrate(t, v, t + t_chunk);
    for (std::size_t k = 1; k < res.t.size(); ++k) {
      const Dp::State& w = res.y[k];
      orb.pts.push_back({res.t[k], w[0], w[1], w[2]});
      // y = 0 crossing (ignore the immediate neighborhood of the seed saddle)
      if (!orb.crossed_axis && w[1] * y_seed_sign < 0.0 &&
          std::abs(w[0] - xj) > 1e-3) {
        double te = 0.0;
        auto se = refine_event(solver, res.t[k - 1], res.y[k - 1], res.t[k],
                               [](const Dp::State& s) { return s[1]; }, te);
        orb.crossed_axis = true;
        orb.crossing_x = se[0];
        orb.crossing_t = te;
        orb.crossing_iy2 = se[2];
        // keep integrating: the orbit may go on to spiral into a sink
      }
      // reached the vertical line x = 0 (only meaningful for seeds with x_j<0)
      if (!orb.reached_x0 && xj < 0.0 && w[0] >= 0.0) {
        double te = 0.0;
        auto se = refine_event(solver, res.t[k - 1], res.y[k - 1], res.t[k],
                               [](const Dp::State& s) { return s[0]; }, te);
        orb.reached_x0 = true;
        orb.x0_y = se[1];
        return orb;
      }
      if (std::abs(w[0]) > 30.0) {
        orb.escaped = true;
        return orb;
      }
      // sink capture bookkeeping
      double dmin = 1e300, xs = 0.0;
      for (double s : sinks) {
        double d = std::hypot(w[0] - s, w[1]);
        if (d < dmin) { dmin = d; xs = s; }
      }
      if (dmin < capture_radius) {
        if (near_sink_since < 0.0 || xs != near_sink_x) {
          near_sink_since = res.t[k];
          near_sink_x = xs;
        } else {
          const double fp = field_scale * f_prime(xs);
          const double period = 2.0 * M_PI / (0.5 * std::sqrt(-(1.0 + 4.0 * fp)));
          if (res.t[k] - near_sink_since > 3.0 * period) {
            orb.sink_capture = true;
            orb.sink_x = xs;
            return orb;
          }
        }
      } else {
        near_sink_since = -1.0;
      }
    }
    t = res.t.back();
    v = res.y.back();
  }
  return orb;
}

double conservation_residual(const Orbit& orb, std::size_t i0, std::size_t i1,
                             double field_scale) {
  if (i0 >= orb.pts.size() || i1 >= orb.pts.size() || i0 > i1)
    throw std::out_of_range("conservation_residual: bad sample indices");
  const OrbitPoint& a = orb.pts[i0];
  const OrbitPoint& b = orb.pts[i1];
  const double lhs = 0.5 * (b.y * b.y - a.y * a.y) + (b.iy2 - a.iy2);
  const double rhs = field_scale * (F(b.x) - F(a.x));
  return std::abs(lhs - rhs);
}

// ---- regions ----------------------------------------------------------------

RationalPoly poly_p1() {
  return RationalPoly(Rational(-43, 18),
                      {Rational(-3, 1000), Rational(110, 47), Rational(-89, 222),
                       Rational(-23, 42), Rational(7, 85), Rational(8, 303),
                       Rational(-1, 446), Rational(-1, 760), Rational(1, 4035),
                       Rational(-1, 13999)});
}

RationalPoly poly_p2() {
  // constant/linear part given in the plain basis; rewrite in (y - 21/22):
  // -6627/638000 - (17913/29000) y = c0 + c1 (y - 21/22)
  const Rational c1(-17913, 29000);
  const Rational c0 = Rational(-6627, 638000) + c1 * Rational(21, 22);
  return RationalPoly(Rational(21, 22),
                      {c0, c1, Rational(-19, 75), Rational(-17, 80), Rational(-29, 106),
                       Rational(-36, 115), Rational(-9, 20), Rational(-19, 31),
                       Rational(-32, 35), Rational(-42, 31)});
}

RationalPoly poly_p3() {
  const Rational c1(-9383, 19500);
  const Rational c0 = Rational(-104159, 877500) + c1 * Rational(3, 5);
  return RationalPoly(Rational(3, 5),
                      {c0, c1, Rational(-18, 113), Rational(2, 365), Rational(-38, 291),
                       Rational(3, 50), Rational(-21, 158), Rational(6, 71),
                       Rational(-2, 15), Rational(7, 82), Rational(-31, 278),
                       Rational(6, 121)});
}

RationalPoly poly_p() {
  return RationalPoly(Rational(11, 2), {Rational(3, 100), Rational(15, 4),
                                        Rational(18, 89), Rational(-136, 181)});
}

namespace {

// |d/du [ u + q'(u)(u - f(q(u))) ]| bound for graph-over-y pieces.
std::function<double(double, double)> graph_over_y_deriv_bound(const RationalPoly& q) {
  return [q](double a, double b) {
    RationalPoly q1 = q.derivative();
    RationalPoly q2 = q1.derivative();
    const double M = std::max(std::abs(q.eval(a)), 3.0);  // |q| stays <= ~3 here
    const double qb = q.magnitude_bound(a, b);
    const double q1b = q1.magnitude_bound(a, b);
    const double q2b = q2.magnitude_bound(a, b);
    const double fb = f_bound(std::max(qb, M));
    const double fpb = f_prime_bound(std::max(qb, M));
    const double ymax = std::max(std::abs(a), std::abs(b));
    return 1.0 + q2b * (ymax + fb) + q1b * (1.0 + fpb * q1b);
  };
}

}  // namespace

Region omega_minus1_region() {
  Region reg;
  reg.name = "omega_minus1";
  RationalPoly p1 = poly_p1(), p2 = poly_p2(), p3 = poly_p3();
  const Rational x_left = Rational(-43, 18) + Rational(3, 1000);
  const Rational x_right(-3, 5);

  // boundary pieces (parameter is x for piece 1/5, y for pieces 2/3/4)
  reg.boundary.push_back(
      {"dSigma1: f(x) - p1(x)(1+p1'(x))",
       [p1](double x) {
         RationalPoly d = p1.derivative();
         return f(x) - p1.eval(x) * (1.0 + d.eval(x));
       },
       [p1](double a, double b) {
         RationalPoly d1 = p1.derivative();
         RationalPoly d2 = d1.derivative();
         const double m = std::max(std::abs(a), std::abs(b));
         return f_prime_bound(m) + d1.magnitude_bound(a, b) * (1.0 + d1.magnitude_bound(a, b)) +
                p1.magnitude_bound(a, b) * d2.magnitude_bound(a, b);
       },
       to_double(Rational(-43, 18)), to_double(x_right)});
  reg.boundary.push_back({"dSigma2: y + p2'(y)(y - f(p2(y)))",
                          [p2](double y) {
                            RationalPoly d = p2.derivative();
                            return y + d.eval(y) * (y - f(p2.eval(y)));
                          },
                          graph_over_y_deriv_bound(p2), 3.0 / 5.0, 21.0 / 22.0});
  reg.boundary.push_back({"dSigma3: y + p3'(y)(y - f(p3(y)))",
                          [p3](double y) {
                            RationalPoly d = p3.derivative();
                            return y + d.eval(y) * (y - f(p3.eval(y)));
                          },
                          graph_over_y_deriv_bound(p3), 0.0, 3.0 / 5.0});
  reg.boundary.push_back({"dSigma4: y (vertical segment)",
                          [](double y) { return y; },
                          [](double, double) { return 1.0; }, 3.0 / 5.0, 21.0 / 22.0});
  reg.boundary.push_back({"dSigma5: 3/5 - f(x) (horizontal segment)",
                          [](double x) { return 3.0 / 5.0 - f(x); },
                          [](double a, double b) {
                            return f_prime_bound(std::max(std::abs(a), std::abs(b)));
                          },
                          p3.eval(3.0 / 5.0), p2.eval(3.0 / 5.0)});

  // exact areas: Sigma1 under the graph of p1; Sigma2/Sigma3 between x=-3/5
  // and the graphs of p2/p3.
  reg.area_terms.push_back({p1, Rational(0), +1, x_left, x_right});
  reg.area_terms.push_back({p2, Rational(3, 5), +1, Rational(3, 5), Rational(21, 22)});
  reg.area_terms.push_back({p3, Rational(3, 5), +1, Rational(0), Rational(3, 5)});
  return reg;
}

Region omega2_region() {
  Region reg;
  reg.name = "omega2";
  RationalPoly p = poly_p();
  reg.boundary.push_back({"dSigma: p(x)(1+p'(x)) - f(x)",
                          [p](double x) {
                            RationalPoly d = p.derivative();
                            return p.eval(x) * (1.0 + d.eval(x)) - f(x);
                          },
                          [p](double a, double b) {
                            RationalPoly d1 = p.derivative();
                            RationalPoly d2 = d1.derivative();
                            return f_prime_bound(std::max(std::abs(a), std::abs(b))) +
                                   d1.magnitude_bound(a, b) * (1.0 + d1.magnitude_bound(a, b)) +
                                   p.magnitude_bound(a, b) * d2.magnitude_bound(a, b);
                          },
                          18.0 / 5.0, 11.0 / 2.0});
  // Sigma = {p(x) < y < 0}; signed area integral of (-p) over (18/5, 11/2).
  reg.area_terms.push_back({p, Rational(0), -1, Rational(18, 5), Rational(11, 2)});
  return reg;
}

Rational exact_area(const Region& region) {
  Rational total = 0;
  for (const AreaTerm& term : region.area_terms) {
    Rational val = term.poly.integrate(term.lo, term.hi) + term.offset * (term.hi - term.lo);
    total += term.sign > 0 ? val : -val;
  }
  return total;
}

namespace {

// Certify expr > 0 on [a, b] by midpoint value minus Lipschitz radius, with
// recursive subdivision.
bool certify_piece(const BoundaryPiece& piece, double a, double b, double& lower,
                   std::size_t& count, int depth) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  const double val = piece.expr(mid);
  const double lip = piece.deriv_bound(a, b);
  const double bound = val - lip * half;
  ++count;
  if (bound > 0.0) {
    lower = std::min(lower, bound);
    return true;
  }
  if (depth <= 0 || half < 1e-9) return false;
  return certify_piece(piece, a, mid, lower, count, depth - 1) &&
         certify_piece(piece, mid, b, lower, count, depth - 1);
}

}  // namespace

BoundaryReport lyapunov_boundary_check(const Region& region, bool refined,
                                       std::size_t samples_per_piece) {
  BoundaryReport rep;
  rep.all_positive = true;
  for (const BoundaryPiece& piece : region.boundary) {
    PieceReport pr;
    pr.label = piece.label;
    pr.sampled_min = 1e300;
    for (std::size_t i = 0; i <= samples_per_piece; ++i) {
      const double u =
          piece.lo + (piece.hi - piece.lo) * static_cast<double>(i) / samples_per_piece;
      const double v = piece.expr(u);
      if (v < pr.sampled_min) { pr.sampled_min = v; pr.sampled_argmin = u; }
    }
    if (refined) {
      pr.certified_lower_bound = 1e300;
      pr.certified =
          certify_piece(piece, piece.lo, piece.hi, pr.certified_lower_bound,
                        pr.subintervals, 40);
      if (!pr.certified) pr.certified_lower_bound = 0.0;
    }
    if (pr.sampled_min <= 0.0 || (refined && !pr.certified)) rep.all_positive = false;
    rep.pieces.push_back(std::move(pr));
  }
  return rep;
}

}  // namespace extwm::phase
