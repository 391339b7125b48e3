#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace extwm {

using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return static_cast<double>(q); }

// Fixed-point decimal rendering (round toward zero), for reports.
inline std::string decimal_string(const Rational& q, int digits = 12) {
  using boost::multiprecision::cpp_int;
  cpp_int num = numerator(q), den = denominator(q);
  bool neg = num < 0;
  if (neg) num = -num;
  cpp_int ip = num / den, rem = num % den;
  std::string s = (neg ? "-" : "") + ip.str();
  if (digits > 0) {
    s += '.';
    for (int i = 0; i < digits; ++i) {
      rem *= 10;
      s += static_cast<char>('0' + static_cast<int>(rem / den));
      rem %= den;
    }
  }
  return s;
}

// Polynomial with exact rational coefficients in the shifted basis (v - shift)^k,
// where v is either x or y depending on use.
class RationalPoly {
 public:
  RationalPoly() = default;
  RationalPoly(Rational shift, std::vector<Rational> coeffs)
      : shift_(std::move(shift)), c_(std::move(coeffs)) {}

  std::size_t degree() const { return c_.empty() ? 0 : c_.size() - 1; }
  const Rational& shift() const { return shift_; }
  const std::vector<Rational>& coeffs() const { return c_; }

  Rational eval(const Rational& v) const {
    Rational u = v - shift_, acc = 0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * u + c_[i];
    return acc;
  }

  double eval(double v) const {
    double u = v - to_double(shift_), acc = 0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * u + to_double(c_[i]);
    return acc;
  }

  RationalPoly derivative() const {
    if (c_.size() <= 1) return RationalPoly(shift_, {Rational(0)});
    std::vector<Rational> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * Rational(static_cast<long>(k));
    return RationalPoly(shift_, std::move(d));
  }

  // Exact integral over [a, b].
  Rational integrate(const Rational& a, const Rational& b) const {
    std::vector<Rational> anti(c_.size() + 1);
    anti[0] = 0;
    for (std::size_t k = 0; k < c_.size(); ++k)
      anti[k + 1] = c_[k] / Rational(static_cast<long>(k + 1));
    auto eval_anti = [&](const Rational& v) {
      Rational u = v - shift_, acc = 0;
      for (std::size_t i = anti.size(); i-- > 0;) acc = acc * u + anti[i];
      return acc;
    };
    return eval_anti(b) - eval_anti(a);
  }

  // Bound on |p'| over an interval [a,b] via coefficient magnitudes on the hull.
  double derivative_bound(double a, double b) const {
    RationalPoly d = derivative();
    double m = std::max(std::abs(a - to_double(shift_)), std::abs(b - to_double(shift_)));
    double bound = 0, pw = 1;
    for (const auto& ck : d.c_) {
      bound += std::abs(to_double(ck)) * pw;
      pw *= m;
    }
    return bound;
  }

  double magnitude_bound(double a, double b) const {
    double m = std::max(std::abs(a - to_double(shift_)), std::abs(b - to_double(shift_)));
    double bound = 0, pw = 1;
    for (const auto& ck : c_) {
      bound += std::abs(to_double(ck)) * pw;
      pw *= m;
    }
    return bound;
  }

 private:
  Rational shift_ = 0;
  std::vector<Rational> c_;
};

}  // namespace extwm
