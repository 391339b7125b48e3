#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace extwm {

// Composite Simpson on [a,b] with n subintervals (n rounded up to even).
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      std::size_t n) {
  if (n % 2) ++n;
  if (n < 2) n = 2;
  const double h = (b - a) / static_cast<double>(n);
  double s = f(a) + f(b);
  for (std::size_t i = 1; i < n; ++i) s += f(a + h * i) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

namespace detail {
inline double adapt(const std::function<double(double)>& f, double a, double b, double fa,
                    double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0) throw std::runtime_error("adaptive quadrature: depth exhausted");
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

// Adaptive Simpson to absolute tolerance tol.
inline double adaptive_quad(const std::function<double(double)>& f, double a, double b,
                            double tol = 1e-12, int depth = 60) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::adapt(f, a, b, fa, fm, fb, whole, tol, depth);
}

// Cumulative suffix integrals on a uniform grid by local cubic interpolation.
// Returns S with S[i] = integral of samples from x[i] to x[n-1]; O(h^4) global.
template <typename T>
std::vector<T> cumulative_suffix_cubic(const std::vector<T>& fv, double h) {
  const std::size_t n = fv.size();
  std::vector<T> s(n);
  if (n == 0) return s;
  s[n - 1] = T{};
  if (n < 4) {  // trapezoid fallback for tiny grids
    for (std::size_t i = n - 1; i-- > 0;) s[i] = s[i + 1] + (fv[i] + fv[i + 1]) * (h / 2.0);
    return s;
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    T inc;
    if (i + 3 < n) {
      // one-sided cubic over [x_i, x_{i+1}] using nodes i..i+3
      inc = (fv[i] * 9.0 + fv[i + 1] * 19.0 - fv[i + 2] * 5.0 + fv[i + 3]) * (h / 24.0);
    } else {
      // near the right end: mirrored stencil i-3..i (exists since n >= 4)
      inc = (fv[i + 1] * 9.0 + fv[i] * 19.0 - fv[i - 1] * 5.0 + fv[i - 2]) * (h / 24.0);
    }
    s[i] = s[i + 1] + inc;
  }
  return s;
}

// Prefix version: P[i] = integral from x[0] to x[i].
template <typename T>
std::vector<T> cumulative_prefix_cubic(const std::vector<T>& fv, double h) {
  const std::size_t n = fv.size();
  std::vector<T> p(n);
  if (n == 0) return p;
  p[0] = T{};
  if (n < 4) {
    for (std::size_t i = 1; i < n; ++i) p[i] = p[i - 1] + (fv[i] + fv[i - 1]) * (h / 2.0);
    return p;
  }
  for (std::size_t i = 1; i < n; ++i) {
    T inc;
    if (i >= 3) {
      inc = (fv[i] * 9.0 + fv[i - 1] * 19.0 - fv[i - 2] * 5.0 + fv[i - 3]) * (h / 24.0);
    } else {
      inc = (fv[i - 1] * 9.0 + fv[i] * 19.0 - fv[i + 1] * 5.0 + fv[i + 2]) * (h / 24.0);
    }
    p[i] = p[i - 1] + inc;
  }
  return p;
}

// Simpson over tabulated samples on a uniform grid (size must be >= 2).
inline double simpson_samples(const std::vector<double>& fv, double h) {
  const std::size_t n = fv.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * h * (fv[0] + fv[1]);
  double s = 0.0;
  std::size_t m = (n - 1) / 2 * 2;  // largest even number of intervals
  for (std::size_t i = 0; i + 2 <= m; i += 2) s += h / 3.0 * (fv[i] + 4.0 * fv[i + 1] + fv[i + 2]);
  if (m != n - 1) s += 0.5 * h * (fv[n - 2] + fv[n - 1]);
  return s;
}

}  // namespace extwm
