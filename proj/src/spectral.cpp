#include "extwm/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "extwm/ode.hpp"
#include "extwm/quad.hpp"

namespace extwm::spectral {

namespace {

// S3(u) = (sin u - u cos u)/u^3 and its derivative; sinc(u) = sin(u)/u.
// Series branches keep the closed forms stable through u = 0.
cplx sinc_c(cplx u) {
  if (std::abs(u) < 0.5) {
    cplx u2 = u * u;
    return 1.0 +
           u2 * (-1.0 / 6.0 +
                 u2 * (1.0 / 120.0 +
                       u2 * (-1.0 / 5040.0 +
                             u2 * (1.0 / 362880.0 - u2 / 39916800.0))));
  }
  return std::sin(u) / u;
}

cplx S3_c(cplx u) {
  if (std::abs(u) < 0.5) {
    cplx u2 = u * u;
    return 1.0 / 3.0 +
           u2 * (-1.0 / 30.0 +
                 u2 * (1.0 / 840.0 +
                       u2 * (-1.0 / 45360.0 +
                             u2 * (1.0 / 3991680.0 - u2 / 518918400.0))));
  }
  return (std::sin(u) - u * std::cos(u)) / (u * u * u);
}

cplx S3p_c(cplx u) {
  if (std::abs(u) < 0.5) {
    cplx u2 = u * u;
    return u * (-1.0 / 15.0 +
                u2 * (1.0 / 210.0 +
                      u2 * (-1.0 / 7560.0 +
                            u2 * (1.0 / 498960.0 - u2 / 51891840.0))));
  }
  return (sinc_c(u) - 3.0 * S3_c(u)) / u;
}

double S3_r(double u) { return S3_c(cplx(u, 0.0)).real(); }

void require_regular(cplx z) {
  if (std::abs(z + cplx(0.0, 1.0)) < 1e-8)
    throw std::domain_error("evaluation at the Weyl pole z = -i");
}

}  // namespace

cplx phi0(double r, cplx z) {
  const double q = r - 1.0;
  const cplx u = z * q;
  return q * q * q * S3_c(u) / r + q * sinc_c(u);
}

cplx phi0_dr(double r, cplx z) {
  const double q = r - 1.0;
  const cplx u = z * q;
  const cplx s3 = S3_c(u);
  return (3.0 * q * q * s3 + q * q * q * z * S3p_c(u)) / r -
         q * q * q * s3 / (r * r) + sinc_c(u) - q * z * u * s3;
}

cplx theta0(double r, cplx z) {
  const double q = r - 1.0;
  const cplx u = z * q;
  return std::cos(u) + q * q * q * S3_c(u) / r + q * q * sinc_c(u) / r;
}

cplx theta0_dr(double r, cplx z) {
  const double q = r - 1.0;
  const cplx u = z * q;
  const cplx s3 = S3_c(u);
  const cplx sc = sinc_c(u);
  return -z * std::sin(u) + (3.0 * q * q * s3 + q * q * q * z * S3p_c(u)) / r -
         q * q * q * s3 / (r * r) + (2.0 * q * sc - q * q * z * u * s3) / r -
         q * q * sc / (r * r);
}

cplx psi0(double r, cplx z) {
  require_regular(z);
  const cplx i(0.0, 1.0);
  return (z + i / r) / (z + i) * std::exp(i * z * (r - 1.0));
}

cplx psi0_dr(double r, cplx z) {
  require_regular(z);
  const cplx i(0.0, 1.0);
  return std::exp(i * z * (r - 1.0)) / (z + i) *
         (-i / (r * r) + i * z * (z + i / r));
}

cplx m0(cplx z) {
  require_regular(z);
  const cplx i(0.0, 1.0);
  return (i * (z * z - 1.0) - z) / (z + i);
}

double omega0(double lambda) {
  return 2.0 * lambda * lambda * lambda * lambda / (1.0 + lambda * lambda);
}

double G0(double r, double rp, double lambda) {
  if (lambda == 0.0) throw std::domain_error("G0 requires lambda != 0");
  const double d = rp - r;
  const double v = lambda * d;
  return std::sin(v) / lambda + d * d * d * S3_r(v) / (r * rp);
}

BoundScanReport phi0_bound_scan() {
  BoundScanReport rep;
  const int nl = 241, nr = 301;
  for (int k = 0; k < nl; ++k) {
    double l = std::pow(10.0, -3.0 + 6.0 * k / (nl - 1));
    for (int j = 1; j <= nr; ++j) {
      double r = 1.0 + (std::pow(10.0, 3.0 * j / double(nr)) - 1.0);
      double denom = (1.0 + l) * std::min(1.0, l * (r - 1.0));
      double ratio = std::abs(phi0(r, l)) * l * l / denom;
      rep.sup_ratio = std::max(rep.sup_ratio, ratio);
      rep.max_psi0_mod = std::max(rep.max_psi0_mod, std::abs(psi0(r, l)));
    }
  }
  return rep;
}

PlancherelReport plancherel_roundtrip(const std::function<double(double)>& f,
                                      double a, double b, double lambda_max,
                                      double dlambda, double r_hi, double dr) {
  if (!(1.0 < a && a < b)) throw std::invalid_argument("support must lie in (1,inf)");
  PlancherelReport rep;
  rep.lambda_max = lambda_max;

  // sample f on its support (Simpson => even interval count)
  std::size_t nf = std::size_t(std::ceil((b - a) / dr));
  if (nf % 2) ++nf;
  const double hf = (b - a) / double(nf);
  std::vector<double> fs(nf + 1), rf(nf + 1);
  for (std::size_t i = 0; i <= nf; ++i) {
    rf[i] = a + hf * double(i);
    fs[i] = f(rf[i]);
  }
  rep.norm2 = 0;
  {
    std::vector<double> f2(nf + 1);
    for (std::size_t i = 0; i <= nf; ++i) f2[i] = fs[i] * fs[i];
    rep.norm2 = simpson_samples(f2, hf);
  }

  std::size_t nl = std::size_t(std::llround(lambda_max / dlambda));
  if (nl % 2) ++nl;
  const double hl = lambda_max / double(nl);
  rep.n_lambda = nl + 1;
  std::vector<double> fhat(nl + 1), lam(nl + 1);
  for (std::size_t k = 0; k <= nl; ++k) {
    double l = hl * double(k);
    lam[k] = l;
    std::vector<double> integ(nf + 1);
    for (std::size_t i = 0; i <= nf; ++i)
      integ[i] = phi0(rf[i], l).real() * fs[i];
    fhat[k] = simpson_samples(integ, hf);
  }
  // completeness holds for the measure (omega0 / pi) dlambda: the Weyl
  // half-line convention carries a 1/pi that the bare weight omits
  {
    std::vector<double> g(nl + 1);
    for (std::size_t k = 0; k <= nl; ++k)
      g[k] = fhat[k] * fhat[k] * omega0(lam[k]) / M_PI;
    rep.transform_norm2 = simpson_samples(g, hl);
  }
  rep.parseval_defect = std::abs(rep.norm2 - rep.transform_norm2);

  // reconstruction on [1, r_hi] and L2 round-trip error
  std::size_t nr = std::size_t(std::ceil((r_hi - 1.0) / dr));
  if (nr % 2) ++nr;
  const double hr = (r_hi - 1.0) / double(nr);
  std::vector<double> err2(nr + 1);
  std::vector<double> g(nl + 1);
  for (std::size_t i = 0; i <= nr; ++i) {
    double r = 1.0 + hr * double(i);
    for (std::size_t k = 0; k <= nl; ++k)
      g[k] = phi0(r, lam[k]).real() * fhat[k] * omega0(lam[k]) / M_PI;
    double recon = simpson_samples(g, hl);
    double target = (r >= a && r <= b) ? f(r) : 0.0;
    err2[i] = (recon - target) * (recon - target);
  }
  rep.roundtrip_l2 = std::sqrt(simpson_samples(err2, hr));
  return rep;
}

namespace {

// checks integrability of s^3 |V| on the working window; rejects potentials
// whose tail still dominates at the truncation radius
void check_integrable(const std::vector<double>& Vs, double h) {
  const std::size_t n = Vs.size();
  double total = 0, tail = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 1.0 + h * double(i);
    double c = r * r * r * std::abs(Vs[i]) * h;
    total += c;
    if (i >= n / 2) tail += c;
  }
  if (total > 0 && tail > 0.5 * total)
    throw std::domain_error("potential tail is not integrable on the window");
}

}  // namespace

PerturbedBasis volterra_solve(const std::function<double(double)>& V,
                              double lambda, double r_max, double h) {
  if (lambda <= 0) throw std::domain_error("volterra_solve requires lambda > 0");
  if (r_max <= 0) r_max = lambda >= 1.0 ? 200.0 : 1000.0;
  if (h <= 0) h = std::min(2e-3, 0.02 / lambda);
  PerturbedBasis pb;
  pb.lambda = lambda;
  const std::size_t n = std::size_t(std::llround((r_max - 1.0) / h)) + 1;
  pb.h = h;
  pb.r_max = 1.0 + h * double(n - 1);

  std::vector<double> Vs(n), cs(n), sn(n);
  std::vector<cplx> p0(n), p0d(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = pb.r(i);
    Vs[i] = V(r);
    cs[i] = std::cos(lambda * r);
    sn[i] = std::sin(lambda * r);
    p0[i] = psi0(r, lambda);
    p0d[i] = psi0_dr(r, lambda);
  }
  check_integrable(Vs, h);

  const double il = 1.0 / lambda, il2 = il * il, il3 = il2 * il;
  std::vector<cplx> psit = p0, w(n), tmp(n);
  std::vector<cplx> Sc, Ss, Sc1, Ss1;
  for (int it = 0; it < 60; ++it) {
    for (std::size_t i = 0; i < n; ++i) w[i] = Vs[i] * psit[i];
    for (std::size_t i = 0; i < n; ++i) tmp[i] = cs[i] * w[i];
    Sc = cumulative_suffix_cubic(tmp, h);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = sn[i] * w[i];
    Ss = cumulative_suffix_cubic(tmp, h);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = cs[i] * w[i] / pb.r(i);
    Sc1 = cumulative_suffix_cubic(tmp, h);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = sn[i] * w[i] / pb.r(i);
    Ss1 = cumulative_suffix_cubic(tmp, h);
    double diff = 0, scale = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = pb.r(i);
      cplx K = il2 * (cs[i] * Sc1[i] + sn[i] * Ss1[i]) -
               il2 / r * (cs[i] * Sc[i] + sn[i] * Ss[i]) +
               il * (cs[i] * Ss[i] - sn[i] * Sc[i]) +
               il3 / r * (cs[i] * Ss1[i] - sn[i] * Sc1[i]);
      cplx nv = p0[i] + K;
      diff = std::max(diff, std::abs(nv - psit[i]));
      scale = std::max(scale, std::abs(nv));
      psit[i] = nv;
    }
    pb.iterations = it + 1;
    pb.last_update = diff / std::max(scale, 1e-300);
    if (pb.last_update < 1e-13) break;
  }

  // analytic derivative: the kernel vanishes on the diagonal, so only the
  // coefficient functions are differentiated
  pb.psit = psit;
  pb.psit_dr.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = pb.r(i);
    cplx Kp = il * (-sn[i] * Sc1[i] + cs[i] * Ss1[i]) -
              il / r * (-sn[i] * Sc[i] + cs[i] * Ss[i]) +
              il2 / (r * r) * (cs[i] * Sc[i] + sn[i] * Ss[i]) -
              (sn[i] * Ss[i] + cs[i] * Sc[i]) +
              il2 / r * (-sn[i] * Ss1[i] - cs[i] * Sc1[i]) -
              il3 / (r * r) * (cs[i] * Ss1[i] - sn[i] * Sc1[i]);
    pb.psit_dr[i] = p0d[i] + Kp;
  }

  const cplx target =
      cplx(0.0, -2.0) * lambda * lambda * lambda / (1.0 + lambda * lambda);
  for (int k = 0; k < 10; ++k) {
    std::size_t i = std::size_t(k) * (n - 1) / 9;
    cplx Wv = psit[i] * std::conj(pb.psit_dr[i]) -
              pb.psit_dr[i] * std::conj(psit[i]);
    pb.wronskian_dev = std::max(pb.wronskian_dev, std::abs(Wv - target));
  }
  return pb;
}

PerturbedBasis perturbed_basis(const std::function<double(double)>& V,
                               double lambda, double r_max, double h) {
  PerturbedBasis pb = volterra_solve(V, lambda, r_max, h);
  if (std::abs(pb.psit[0]) < 1e-12)
    throw std::runtime_error("normalization failure: psit(1) ~ 0");
  pb.c = 1.0 / pb.psit[0];
  pb.m = pb.c * pb.psit_dr[0];
  const double l = lambda;
  pb.im_m = std::norm(pb.c) * l * l * l / (1.0 + l * l);
  pb.phi.resize(pb.psit.size());
  for (std::size_t i = 0; i < pb.psit.size(); ++i)
    pb.phi[i] = (pb.c * pb.psit[i]).imag() / pb.im_m;
  return pb;
}

double phi_ode_residual(const PerturbedBasis& pb,
                        const std::function<double(double)>& V) {
  const auto& phi = pb.phi;
  const std::size_t n = phi.size();
  if (n < 5) throw std::invalid_argument("grid too short");
  const double h = pb.h, l2 = pb.lambda * pb.lambda;
  double scale = 0;
  for (double v : phi) scale = std::max(scale, std::abs(v));
  double worst = 0;
  const std::size_t stride = std::max<std::size_t>(1, n / 4000);
  for (std::size_t i = 2; i + 2 < n; i += stride) {
    double d2 = (-phi[i - 2] + 16 * phi[i - 1] - 30 * phi[i] +
                 16 * phi[i + 1] - phi[i + 2]) /
                (12 * h * h);
    double r = pb.r(i);
    double res = -d2 + (2.0 / (r * r) + V(r) - l2) * phi[i];
    worst = std::max(worst, std::abs(res));
  }
  return worst / std::max(scale, 1e-300);
}

WeightReport spectral_weight_check(const std::function<double(double)>& V,
                                   double lo, double hi, int n) {
  if (!(0 < lo && lo < hi && n >= 2)) throw std::invalid_argument("bad range");
  WeightReport rep;
  rep.ratio_lo = 1e300;
  rep.ratio_hi = -1e300;
  for (int k = 0; k < n; ++k) {
    double l = lo * std::pow(hi / lo, double(k) / (n - 1));
    auto pb = perturbed_basis(V, l);
    double drho = 2.0 * l * pb.im_m;
    rep.lambda.push_back(l);
    rep.drho.push_back(drho);
    rep.ratio_lo = std::min(rep.ratio_lo, drho / l);
    rep.ratio_hi = std::max(rep.ratio_hi, drho / l);
  }
  return rep;
}

ZeroEnergyPair zero_energy(const std::function<double(double)>& V, double r0,
                           double r_max, double h) {
  ZeroEnergyPair zp;
  zp.h = h;
  const std::size_t n = std::size_t(std::llround((r_max - 1.0) / h)) + 1;
  zp.r_max = 1.0 + h * double(n - 1);
  std::vector<double> Vs(n);
  for (std::size_t i = 0; i < n; ++i) Vs[i] = V(zp.r(i));
  check_integrable(Vs, h);

  std::vector<double> u0(n), g1(n), g2(n), T1, T2;
  for (std::size_t i = 0; i < n; ++i) u0[i] = 1.0 / zp.r(i);
  for (int it = 0; it < 200; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double r = zp.r(i);
      g1[i] = Vs[i] * u0[i] / r;
      g2[i] = r * r * Vs[i] * u0[i];
    }
    T1 = cumulative_suffix_cubic(g1, h);
    T2 = cumulative_suffix_cubic(g2, h);
    double diff = 0, scale = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = zp.r(i);
      double nv = 1.0 / r + T2[i] / (3.0 * r) - r * r * T1[i] / 3.0;
      diff = std::max(diff, std::abs(nv - u0[i]));
      scale = std::max(scale, std::abs(nv));
      u0[i] = nv;
    }
    zp.iterations = it + 1;
    if (diff / std::max(scale, 1e-300) < 1e-14) break;
  }
  zp.u0 = u0;
  zp.u0p.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double r = zp.r(i);
    zp.u0p[i] = -1.0 / (r * r) - 2.0 * r * T1[i] / 3.0 - T2[i] / (3.0 * r * r);
  }
  zp.vancond = zp.u0p[0] + 2.0 * u0[0];
  zp.u0_min = *std::min_element(u0.begin(), u0.end());

  std::size_t i0 = std::size_t(std::llround((r0 - 1.0) / h));
  if (i0 >= n) throw std::invalid_argument("r0 beyond the grid");
  zp.r0 = zp.r(i0);
  for (std::size_t i = i0; i < n; ++i)
    if (u0[i] <= 0)
      throw std::invalid_argument("u0 changes sign after r0: r0 too small");
  if (zp.u0_min <= 0)
    throw std::invalid_argument("u0 changes sign on the grid");

  std::vector<double> inv2(n);
  for (std::size_t i = 0; i < n; ++i) inv2[i] = 1.0 / (u0[i] * u0[i]);
  auto P = cumulative_prefix_cubic(inv2, h);
  zp.u1.resize(n);
  zp.u1p.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double I = P[i] - P[i0];
    zp.u1[i] = u0[i] * I;
    zp.u1p[i] = zp.u0p[i] * I + 1.0 / u0[i];
  }

  // independent growing solution by direct ODE integration from r0
  {
    using St = std::array<double, 2>;
    Dopri5<2> solver(
        [&](double r, const St& s, St& d) {
          d[0] = s[1];
          d[1] = (2.0 / (r * r) + V(r)) * s[0];
        },
        1e-12, 1e-13);
    double r = zp.r0;
    St s{0.0, 1.0 / u0[i0]};
    double r_end = std::min(zp.r_max, zp.r0 + 60.0);
    for (int k = 1; k <= 10; ++k) {
      double rt = zp.r0 + k * (r_end - zp.r0) / 10.0;
      std::size_t i = std::size_t(std::llround((rt - 1.0) / h));
      rt = zp.r(i);
      auto res = solver.integrate(r, s, rt);
      s = res.y.back();
      r = rt;
      double Wv = u0[i] * s[1] - zp.u0p[i] * s[0];
      zp.wronskian_dev = std::max(zp.wronskian_dev, std::abs(Wv - 1.0));
    }
  }

  // tail fit of r u0 - 1 ~ c r^{-p} on [20, 80]
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int k = 0; k < 30; ++k) {
      double rt = 20.0 * std::pow(4.0, k / 29.0);
      std::size_t i = std::size_t(std::llround((rt - 1.0) / h));
      double y = zp.r(i) * u0[i] - 1.0;
      if (std::abs(y) < 1e-14) continue;
      double lx = std::log(zp.r(i)), ly = std::log(std::abs(y));
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++m;
    }
    if (m >= 2) {
      double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
      zp.tail_order = -slope;
      double cs = 0;
      int mc = 0;
      for (int k = 0; k < 30; ++k) {
        double rt = 20.0 * std::pow(4.0, k / 29.0);
        std::size_t i = std::size_t(std::llround((rt - 1.0) / h));
        double r = zp.r(i);
        cs += (r * u0[i] - 1.0) * r * r * r * r;
        ++mc;
      }
      zp.tail_c = cs / mc;
    }
  }
  return zp;
}

namespace {

// number of eigenvalues of the tridiagonal matrix below sigma (Sturm count
// via the LDL^T recursion)
int sturm_count(const std::vector<double>& diag, double off2, double sigma) {
  int cnt = 0;
  double d = diag[0] - sigma;
  if (d == 0.0) d = -1e-300;
  if (d < 0) ++cnt;
  for (std::size_t i = 1; i < diag.size(); ++i) {
    d = diag[i] - sigma - off2 / d;
    if (d == 0.0) d = -1e-300;
    if (d < 0) ++cnt;
  }
  return cnt;
}

}  // namespace

EigenReport point_spectrum_probe(const std::function<double(double)>& V,
                                 int n, double r_hi) {
  EigenReport rep;
  rep.n = n;
  const double h = (r_hi - 1.0) / n;
  rep.h = h;
  std::vector<double> diag(n - 1);
  for (int i = 1; i < n; ++i) {
    double r = 1.0 + h * i;
    diag[i - 1] = 2.0 / (h * h) + 2.0 / (r * r) + V(r);
  }
  const double off2 = 1.0 / (h * h * h * h);
  double lo = -1.0, hi = 1.0;
  while (sturm_count(diag, off2, lo) > 0 && lo > -1e9) lo *= 2.0;
  while (sturm_count(diag, off2, hi) < 1 && hi < 1e9) hi *= 2.0;
  for (int it = 0; it < 100; ++it) {
    double mid = 0.5 * (lo + hi);
    if (sturm_count(diag, off2, mid) >= 1)
      hi = mid;
    else
      lo = mid;
  }
  rep.smallest = 0.5 * (lo + hi);
  return rep;
}

LowEnergyBasis low_energy_basis(const std::function<double(double)>& V,
                                double lambda, const ZeroEnergyPair& zp,
                                double eps_tilde) {
  if (lambda <= 0) throw std::domain_error("lambda must be positive");
  LowEnergyBasis le;
  le.lambda = lambda;
  le.h = zp.h;
  le.R = eps_tilde / lambda;
  if (le.R <= 1.5) throw std::invalid_argument("lambda too large for the window");
  if (le.R > zp.r_max) throw std::invalid_argument("zero-energy grid too short");
  const std::size_t m = std::size_t(std::llround((le.R - 1.0) / le.h)) + 1;
  le.R = le.r(m - 1);
  const double l2 = lambda * lambda;

  std::vector<double> u0(zp.u0.begin(), zp.u0.begin() + m);
  std::vector<double> u0p(zp.u0p.begin(), zp.u0p.begin() + m);
  std::vector<double> u1(zp.u1.begin(), zp.u1.begin() + m);
  std::vector<double> u1p(zp.u1p.begin(), zp.u1p.begin() + m);

  // Volterra step for the growing branch; the variation-of-parameters kernel
  // for energy +lambda^2 is u0(r) u1(s) - u1(r) u0(s)
  std::vector<double> u1l = u1, a1(m), a2(m), P0, P1;
  for (int it = 0; it < 100; ++it) {
    for (std::size_t i = 0; i < m; ++i) {
      a1[i] = u0[i] * u1l[i];
      a2[i] = u1[i] * u1l[i];
    }
    P0 = cumulative_prefix_cubic(a1, le.h);
    P1 = cumulative_prefix_cubic(a2, le.h);
    double diff = 0, scale = 0;
    for (std::size_t i = 0; i < m; ++i) {
      double nv = u1[i] + l2 * (u0[i] * P1[i] - u1[i] * P0[i]);
      diff = std::max(diff, std::abs(nv - u1l[i]));
      scale = std::max(scale, std::abs(nv));
      u1l[i] = nv;
    }
    le.iters_u1 = it + 1;
    if (diff / std::max(scale, 1e-300) < 1e-14) break;
  }
  le.u1l = u1l;
  le.u1lp.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    le.u1lp[i] = u1p[i] + l2 * (u0p[i] * P1[i] - u1p[i] * P0[i]);

  // fixed-point step for the decaying branch (not of Volterra type)
  std::vector<double> u0l = u0, Q1, Q2;
  for (int it = 0; it < 200; ++it) {
    for (std::size_t i = 0; i < m; ++i) {
      a1[i] = u1[i] * u0l[i];
      a2[i] = u0[i] * u0l[i];
    }
    Q1 = cumulative_prefix_cubic(a1, le.h);
    Q2 = cumulative_suffix_cubic(a2, le.h);
    double diff = 0, scale = 0;
    for (std::size_t i = 0; i < m; ++i) {
      double nv = u0[i] + l2 * (u0[i] * Q1[i] + u1[i] * Q2[i]);
      diff = std::max(diff, std::abs(nv - u0l[i]));
      scale = std::max(scale, std::abs(nv));
      u0l[i] = nv;
    }
    le.iters_u0 = it + 1;
    if (diff / std::max(scale, 1e-300) < 1e-14) break;
  }
  le.u0l = u0l;
  le.u0lp.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    le.u0lp[i] = u0p[i] + l2 * (u0p[i] * Q1[i] + u1p[i] * Q2[i]);

  le.W = le.u0l[0] * le.u1lp[0] - le.u0lp[0] * le.u1l[0];
  for (int k = 1; k <= 8; ++k) {
    std::size_t i = std::size_t(k) * (m - 1) / 8;
    double Wr = le.u0l[i] * le.u1lp[i] - le.u0lp[i] * le.u1l[i];
    le.W_dev = std::max(le.W_dev, std::abs(Wr - le.W));
  }

  // connection to the outgoing solution on a matching grid
  auto pb = volterra_solve(V, lambda, 0.0, le.h);
  const cplx Wpsit =
      cplx(0.0, -2.0) * lambda * lambda * lambda / (1.0 + lambda * lambda);
  double r_eval = std::min(1.0 / std::sqrt(lambda), 1.0 + 0.8 * (le.R - 1.0));
  std::size_t idx = std::size_t(std::llround((r_eval - 1.0) / le.h));
  idx = std::min(idx, m - 1);
  le.r_connect = le.r(idx);
  const double cphi = le.u0l[0] / le.W;
  auto phi_at = [&](std::size_t i) {
    return cphi * (le.u1l[i] - le.u0l[i] * le.u1l[0] / le.u0l[0]);
  };
  auto phip_at = [&](std::size_t i) {
    return cphi * (le.u1lp[i] - le.u0lp[i] * le.u1l[0] / le.u0l[0]);
  };
  le.a = (phi_at(idx) * std::conj(pb.psit_dr[idx]) -
          phip_at(idx) * std::conj(pb.psit[idx])) /
         Wpsit;

  // the real regular solution must equal 2 Re(a psit) identically
  double worst = 0, scale = 0;
  for (int k = 1; k <= 8; ++k) {
    std::size_t i = std::size_t(k) * (m - 1) / 8;
    double ph = phi_at(i);
    worst = std::max(worst,
                     std::abs(ph - 2.0 * (le.a * pb.psit[i]).real()));
    scale = std::max(scale, std::abs(ph));
  }
  le.phi_match = worst / std::max(scale, 1e-300);
  return le;
}

double phi_bound_scan(const std::function<double(double)>& V, double lo,
                      double hi, int n) {
  double sup = 0;
  for (int k = 0; k < n; ++k) {
    double l = lo * std::pow(hi / lo, n == 1 ? 0.0 : double(k) / (n - 1));
    auto pb = perturbed_basis(V, l);
    const std::size_t sz = pb.phi.size();
    const std::size_t stride = std::max<std::size_t>(1, sz / 20000);
    for (std::size_t i = 1; i < sz; i += stride) {
      double denom = std::min(1.0, l * (pb.r(i) - 1.0));
      sup = std::max(sup, l * l * std::abs(pb.phi[i]) / denom);
    }
  }
  return sup;
}

LocalEnergyReport local_energy_check(const std::function<double(double)>& V1,
                                     const std::function<double(double)>& f,
                                     double a, double b, double t_max,
                                     double lambda_max) {
  LocalEnergyReport rep;
  // the lambda comb makes the reconstruction t-periodic with period
  // 2 pi / dlam; keep the window well inside one period
  const double dlam = std::min(0.02, M_PI / (2.0 * t_max));
  const double dr_f = 1e-3, hr = 0.05, dt = 0.25;
  const double r_hi = 30.0;

  std::size_t nf = std::size_t(std::ceil((b - a) / dr_f));
  if (nf % 2) ++nf;
  const double hf = (b - a) / double(nf);
  std::vector<double> fs(nf + 1), rf(nf + 1);
  for (std::size_t i = 0; i <= nf; ++i) {
    rf[i] = a + hf * double(i);
    fs[i] = f(rf[i]);
  }

  std::size_t nl = std::size_t(std::llround(lambda_max / dlam));
  if (nl % 2) ++nl;
  const double hl = lambda_max / double(nl);
  std::vector<double> fhat(nl + 1), lam(nl + 1), wq(nl + 1);
  for (std::size_t k = 0; k <= nl; ++k) {
    lam[k] = hl * double(k);
    std::vector<double> integ(nf + 1);
    for (std::size_t i = 0; i <= nf; ++i)
      integ[i] = phi0(rf[i], lam[k]).real() * fs[i];
    fhat[k] = simpson_samples(integ, hf);
    wq[k] = (k == 0 || k == nl) ? hl / 3.0 : (k % 2 ? 4.0 * hl / 3.0 : 2.0 * hl / 3.0);
  }
  {
    std::vector<double> g(nl + 1);
    for (std::size_t k = 0; k <= nl; ++k)
      g[k] = fhat[k] * fhat[k] * omega0(lam[k]) / M_PI;
    rep.norm2 = simpson_samples(g, hl);
  }

  const std::size_t nr = std::size_t(std::llround((r_hi - 1.0) / hr)) + 1;
  // M[i][k] = phi0(r_i; l_k) fhat_k omega0(l_k) * quadrature weight
  std::vector<double> M(nr * (nl + 1));
  std::vector<double> v1sq(nr);
  for (std::size_t i = 0; i < nr; ++i) {
    double r = 1.0 + hr * double(i);
    double v1 = V1(r);
    v1sq[i] = v1 * v1;
    for (std::size_t k = 0; k <= nl; ++k)
      M[i * (nl + 1) + k] =
          phi0(r, lam[k]).real() * fhat[k] * omega0(lam[k]) / M_PI * wq[k];
  }

  std::vector<cplx> phase(nl + 1, cplx(1.0, 0.0)), rot(nl + 1);
  for (std::size_t k = 0; k <= nl; ++k)
    rot[k] = std::exp(cplx(0.0, -dt * lam[k]));
  const std::size_t nt = std::size_t(std::llround(t_max / dt));
  double acc = 0;
  for (std::size_t s = 0; s <= nt; ++s) {
    double slice = 0;
    for (std::size_t i = 0; i < nr; ++i) {
      if (v1sq[i] < 1e-30) continue;
      cplx u = 0;
      const double* row = &M[i * (nl + 1)];
      for (std::size_t k = 0; k <= nl; ++k) u += row[k] * phase[k];
      double wr = (i == 0 || i + 1 == nr) ? 0.5 : 1.0;
      slice += wr * v1sq[i] * std::norm(u);
    }
    double wt = (s == 0 || s == nt) ? 0.5 : 1.0;
    acc += wt * slice * hr * dt;
    for (std::size_t k = 0; k <= nl; ++k) phase[k] *= rot[k];
  }
  rep.value = acc;
  rep.ratio = rep.value / rep.norm2;
  return rep;
}

}  // namespace extwm::spectral
