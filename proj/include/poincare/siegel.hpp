#pragma once

// Degree-2 building blocks: slash actions, the confluent cone integral
// h_{alpha,beta}(T;Y), the Fourier terms Psi_k and Phi_l, and numeric
// realizations of the lowering operator and the matrix Laplacian.

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "poincare/quadrature.hpp"
#include "poincare/sp2.hpp"
#include "poincare/symmat.hpp"

namespace poincare::siegel {

using quad::QuadratureSpec;

inline Mat2c block_c(const sp2::Mat2& m) {
  return {{cplx(static_cast<double>(m[0][0])), cplx(static_cast<double>(m[0][1])),
           cplx(static_cast<double>(m[1][0])), cplx(static_cast<double>(m[1][1]))}};
}

// M . Z = (AZ + B)(CZ + D)^{-1} together with the factor CZ + D
struct MoebiusResult {
  Mat2c image;
  Mat2c czd;
};

inline MoebiusResult moebius(const sp2::SymplecticRep& M, const Mat2c& Z) {
  const Mat2c num = block_c(M.A) * Z + block_c(M.B);
  const Mat2c den = block_c(M.C) * Z + block_c(M.D);
  return {num * den.inverse(), den};
}

inline MoebiusResult moebius(const sp2::SymplecticRep& M, const SiegelPoint& Z) {
  return moebius(M, Mat2c::from_point(Z));
}

inline SiegelPoint to_point(const Mat2c& Z) {
  return SiegelPoint(Z.real_sym(1e-8), Z.imag_sym(1e-8));
}

// (F |_k M)(Z) = det(CZ + D)^{-k} F(M . Z)
template <class F>
cplx slash(F&& f, int k, const sp2::SymplecticRep& M, const SiegelPoint& Z) {
  const auto mz = moebius(M, Z);
  return pow_int(mz.czd.det(), -k) * f(to_point(mz.image));
}

// (F |_{(alpha,beta)} M)(Z) = det(CZ+D)^{-alpha} det(C conj(Z) + D)^{-beta} F(M . Z);
// single-valued because alpha - beta is integral.
template <class F>
cplx slash_general(F&& f, cplx alpha, cplx beta, const sp2::SymplecticRep& M,
                   const SiegelPoint& Z) {
  const double diff = (alpha - beta).real();
  if (std::abs(alpha.imag() - beta.imag()) > 1e-12 ||
      std::abs(diff - std::round(diff)) > 1e-9)
    throw std::domain_error("slash_general: requires alpha - beta in Z");
  const auto mz = moebius(M, Z);
  const cplx d = mz.czd.det();
  return std::pow(d, -alpha) * std::pow(std::conj(d), -beta) * f(to_point(mz.image));
}

// ---------------------------------------------------------------------------
// h_{alpha,beta}(T;Y) = int_{U -+ T > 0} det(U+T)^{alpha-3/2} det(U-T)^{beta-3/2}
//                         e^{-2 pi tr(YU)} dU
//
// Substituting U = T^{1/2}(I+S)T^{1/2} maps the domain to the cone S > 0 and
//   h = det(T)^{alpha+beta-3/2} e^{-2 pi tr(Yt)} *
//       int_{S>0} det(2I+S)^{alpha-3/2} det(S)^{beta-3/2} e^{-2 pi tr(Yt S)} dS
// with Yt = T^{1/2} Y T^{1/2}. The cone is charted by s11 = u^2, s22 = v^2,
// s12 = u v sin(theta), under which det(S)^{beta-3/2} dS turns into the
// regular density 4 (uv)^{2 beta - 1} cos(theta)^{2 beta - 2} du dv dtheta;
// the boundary singularity at det(U-T) = 0 disappears for beta >= 1 and stays
// integrable for beta > 1/2.

struct HResult {
  double value = 0.0;
  double est_error = 0.0;
  int nodes_u = 0, nodes_theta = 0;
};

namespace detail {

// x^e with a fast path for integer and half-integer e >= 0
inline double pow_real(double x, double e) {
  const double r = std::round(2.0 * e);
  if (std::abs(2.0 * e - r) < 1e-12 && r >= 0.0 && r < 128.0) {
    const long n2 = std::lround(r);
    double acc = (n2 & 1) ? std::sqrt(x) : 1.0;
    double base = x;
    long n = n2 >> 1;
    while (n) {
      if (n & 1) acc *= base;
      base *= base;
      n >>= 1;
    }
    return acc;
  }
  return std::pow(x, e);
}

inline double h_fixed_grid(double alpha, double beta, const SymMat2& Yt, double pref, int nu,
                           int nth, double umax) {
  const auto& [xt, wt] = quad::gauss_legendre(nth);
  const auto& [xu, wu] = quad::gauss_legendre(nu);
  const double cpow = 2.0 * beta - 2.0;
  const double upow = 2.0 * beta - 1.0;
  const bool coupled = std::abs(Yt.m12) > 0.0;
  std::vector<double> u(nu), uwp(nu), e11(nu), e22(nu);
  for (int i = 0; i < nu; ++i) {
    u[i] = 0.5 * umax * (xu[i] + 1.0);
    uwp[i] = 0.5 * umax * wu[i] * pow_real(u[i], upow);
    e11[i] = std::exp(-2.0 * M_PI * Yt.m11 * u[i] * u[i]);
    e22[i] = std::exp(-2.0 * M_PI * Yt.m22 * u[i] * u[i]);
  }
  std::vector<double> sth(nth), thw(nth);
  for (int c = 0; c < nth; ++c) {
    const double th = 0.5 * M_PI * xt[c];
    sth[c] = std::sin(th);
    thw[c] = 0.5 * M_PI * wt[c] * (cpow == 0.0 ? 1.0 : pow_real(std::cos(th), cpow));
  }
  const double ap = alpha - 1.5;
  double total = 0.0;
  for (int a = 0; a < nu; ++a) {
    const double ua = u[a];
    const double s11 = ua * ua;
    const double d1 = 2.0 + s11;
    for (int b = 0; b < nu; ++b) {
      const double vb = u[b];
      const double s22 = vb * vb;
      const double ee = e11[a] * e22[b];
      if (ee < 1e-290) continue;
      const double dd = d1 * (2.0 + s22);
      const double uv = ua * vb;
      double inner = 0.0;
      if (coupled) {
        const double cc = -4.0 * M_PI * Yt.m12 * uv;
        for (int c = 0; c < nth; ++c) {
          const double s12 = uv * sth[c];
          inner += thw[c] * pow_real(dd - s12 * s12, ap) * std::exp(cc * sth[c]);
        }
      } else {
        for (int c = 0; c < nth; ++c) {
          const double s12 = uv * sth[c];
          inner += thw[c] * pow_real(dd - s12 * s12, ap);
        }
      }
      total += uwp[a] * uwp[b] * ee * inner;
    }
  }
  return pref * 4.0 * total;
}

} // namespace detail

// Grid sizes double until two successive evaluations agree to rel_tol; the
// returned node counts can be frozen and reused so that nearby Y give a
// smooth function (needed by the finite-difference operators).
inline HResult h_integral(double alpha, double beta, const SymMat2& T, const SymMat2& Y,
                          const QuadratureSpec& q = {}, int frozen_nu = 0, int frozen_nth = 0,
                          double frozen_umax = 0.0) {
  if (!(alpha > 0.5) || !(beta > 0.5))
    throw std::domain_error("h_integral: requires alpha, beta > 1/2");
  if (!T.positive_definite() || !Y.positive_definite())
    throw std::domain_error("h_integral: T and Y must be positive definite");
  const SymMat2 Th = T.sqrt_psd();
  // Yt = Th * Y * Th
  const SymMat2 Yt = {
      Th.m11 * (Y.m11 * Th.m11 + Y.m12 * Th.m12) + Th.m12 * (Y.m12 * Th.m11 + Y.m22 * Th.m12),
      Th.m11 * (Y.m11 * Th.m12 + Y.m12 * Th.m22) + Th.m12 * (Y.m12 * Th.m12 + Y.m22 * Th.m22),
      Th.m12 * (Y.m11 * Th.m12 + Y.m12 * Th.m22) + Th.m22 * (Y.m12 * Th.m12 + Y.m22 * Th.m22)};
  const double pref =
      std::pow(T.det(), alpha + beta - 1.5) * std::exp(-2.0 * M_PI * Yt.trace());
  const double lam_min = Yt.eigenvalues()[0];
  const double umax = frozen_umax > 0.0 ? frozen_umax : std::sqrt(44.0 / (2.0 * M_PI * lam_min));

  HResult r;
  if (frozen_nu > 0) {
    r.value = detail::h_fixed_grid(alpha, beta, Yt, pref, frozen_nu, frozen_nth, umax);
    r.est_error = std::abs(r.value) * q.rel_tol;
    r.nodes_u = frozen_nu;
    r.nodes_theta = frozen_nth;
    return r;
  }
  int nu = 32, nth = 16;
  double prev = detail::h_fixed_grid(alpha, beta, Yt, pref, nu, nth, umax);
  for (int depth = 0; depth < q.max_depth; ++depth) {
    const int nu2 = nu * 2, nth2 = nth * 2;
    const double cur = detail::h_fixed_grid(alpha, beta, Yt, pref, nu2, nth2, umax);
    const double err = std::abs(cur - prev);
    if (err <= std::max(q.abs_tol, q.rel_tol * std::abs(cur))) {
      r.value = cur;
      r.est_error = err;
      r.nodes_u = nu2;
      r.nodes_theta = nth2;
      return r;
    }
    prev = cur;
    nu = nu2;
    nth = nth2;
  }
  throw std::runtime_error("h_integral: tolerance not reached within max_depth");
}

// Psi_k(T;Z) = det(TY) h_{k+1,1}(T;Y) e^{2 pi i tr(TX)}
inline cplx psi(int k, const SymMat2& T, const SiegelPoint& Z, const QuadratureSpec& q = {}) {
  if (k <= 0 || k % 2 != 0) throw std::domain_error("psi: k must be a positive even integer");
  if (!T.positive_definite()) throw std::domain_error("psi: T must be positive definite");
  const double h = h_integral(k + 1.0, 1.0, T, Z.Y, q).value;
  const double dTY = T.det() * Z.Y.det();
  const double phase = 2.0 * M_PI * tr_product(T, Z.X);
  return dTY * h * std::exp(cplx(0.0, phase));
}

// Phi_l(T;Z) = e^{2 pi i tr(TZ)}
inline cplx phi(int ell, const SymMat2& T, const SiegelPoint& Z) {
  if (ell <= 0 || ell % 2 != 0) throw std::domain_error("phi: l must be a positive even integer");
  const double re = tr_product(T, Z.X);
  const double im = tr_product(T, Z.Y);
  return std::exp(cplx(-2.0 * M_PI * im, 2.0 * M_PI * re));
}

// ---------------------------------------------------------------------------
// numeric covariant operators

using ScalarField = std::function<cplx(const SiegelPoint&)>;

namespace detail {

inline SiegelPoint shift(const SiegelPoint& Z, int coord, double d) {
  SymMat2 X = Z.X, Y = Z.Y;
  switch (coord) {
    case 0: X.m11 += d; break;
    case 1: X.m12 += d; break;
    case 2: X.m22 += d; break;
    case 3: Y.m11 += d; break;
    case 4: Y.m12 += d; break;
    case 5: Y.m22 += d; break;
  }
  return SiegelPoint(X, Y);
}

// symmetrized matrix derivative dZ (bar = false) or dZbar (bar = true):
// entry (i,j) = (1+delta_ij)/2 * d/dz_ij with d/dz = (d/dx - i d/dy)/2
template <class F>
Mat2c matrix_derivative(F&& f, const SiegelPoint& Z, bool bar, double h) {
  Mat2c out;
  static constexpr int xi[3] = {0, 1, 2};
  static constexpr int yi[3] = {3, 4, 5};
  static constexpr int ii[3] = {0, 0, 1};
  static constexpr int jj[3] = {0, 1, 1};
  for (int c = 0; c < 3; ++c) {
    const cplx dx = (f(shift(Z, xi[c], h)) - f(shift(Z, xi[c], -h))) / (2.0 * h);
    const cplx dy = (f(shift(Z, yi[c], h)) - f(shift(Z, yi[c], -h))) / (2.0 * h);
    const cplx d = bar ? 0.5 * (dx + cplx(0, 1) * dy) : 0.5 * (dx - cplx(0, 1) * dy);
    const double w = (ii[c] == jj[c]) ? 1.0 : 0.5;
    out.m[ii[c] * 2 + jj[c]] = w * d;
    out.m[jj[c] * 2 + ii[c]] = w * d;
  }
  return out;
}

} // namespace detail

// L F = Y (dZbar F) Y, realized by central differences
inline Mat2c apply_lowering(const ScalarField& f, const SiegelPoint& Z, double h_step = 1e-4) {
  const Mat2c d = detail::matrix_derivative(f, Z, true, h_step);
  const Mat2c Y = Mat2c::from_sym(Z.Y);
  return Y * d * Y;
}

// Omega_{alpha,beta} F = -4 Y t(Y dZbar) dZ F - 2 i beta Y dZ F + 2 i alpha Y dZbar F,
// a matrix-valued operator; realized by nested central differences.
inline Mat2c apply_omega(cplx alpha, cplx beta, const ScalarField& f, const SiegelPoint& Z,
                         double h1 = 1e-4, double h2 = 2.5e-4) {
  const Mat2c Y = Mat2c::from_sym(Z.Y);
  const Mat2c DzF = detail::matrix_derivative(f, Z, false, h1);
  const Mat2c DzbF = detail::matrix_derivative(f, Z, true, h1);
  Mat2c second{};  // second_{ij} = sum_k [ Y (dZbar (dZ F)_{kj}) Y ]_{ik}
  for (int kk = 0; kk < 2; ++kk)
    for (int jj = 0; jj < 2; ++jj) {
      auto entry = [&](const SiegelPoint& W) {
        return detail::matrix_derivative(f, W, false, h2).m[kk * 2 + jj];
      };
      const Mat2c A = detail::matrix_derivative(entry, Z, true, h2);
      const Mat2c YAY = Y * A * Y;
      second.m[0 * 2 + jj] += YAY.m[0 * 2 + kk];
      second.m[1 * 2 + jj] += YAY.m[1 * 2 + kk];
    }
  return second * cplx(-4.0) + Y * DzF * (cplx(0, -2.0) * beta) + Y * DzbF * (cplx(0, 2.0) * alpha);
}

// Empirical fit of the decay bound det(TY) h_{k+1,1}(T;Y) <= C (1 + det(Y)^{-b}) e^{-pi tr(TY)}
// over a log-spaced grid of diagonal Y. b is read off the small-det growth,
// C is then the smallest admissible constant on the grid.
struct ShimuraFit {
  double b = 0.0;
  double c = 0.0;
};

inline ShimuraFit shimura_fit(int k, const SymMat2& T, QuadratureSpec q = {}, int n_grid = 7,
                              double lam_lo = 1e-2, double lam_hi = 8.0) {
  q.rel_tol = std::max(q.rel_tol, 1e-8);  // a fit does not need quadrature-grade tolerance
  std::vector<double> lam(n_grid), val;
  for (int i = 0; i < n_grid; ++i)
    lam[i] = lam_lo * std::pow(lam_hi / lam_lo, static_cast<double>(i) / (n_grid - 1));
  std::vector<std::pair<double, double>> samples;  // (det Y, v) with v = det(TY) h e^{pi tr(TY)}
  for (double l1 : lam)
    for (double l2 : lam) {
      if (l2 < l1) continue;
      const SymMat2 Y = SymMat2::diag(l1, l2);
      const double h = h_integral(k + 1.0, 1.0, T, Y, q).value;
      const double trTY = T.m11 * l1 + T.m22 * l2;  // diagonal grid
      const double v = T.det() * Y.det() * h * std::exp(M_PI * trTY);
      samples.push_back({Y.det(), v});
    }
  ShimuraFit fit;
  // slope of log v against log(1/det Y) between small-det sample pairs
  std::sort(samples.begin(), samples.end());
  for (std::size_t i = 0; i + 1 < samples.size() && i < samples.size() / 2; ++i) {
    const auto& [d0, v0] = samples[i];
    const auto& [d1, v1] = samples[i + 1];
    if (d1 <= d0 * (1.0 + 1e-12) || v0 <= 0 || v1 <= 0) continue;
    const double slope = (std::log(v0) - std::log(v1)) / (std::log(d1) - std::log(d0));
    fit.b = std::max(fit.b, slope);
  }
  for (const auto& [d, v] : samples) fit.c = std::max(fit.c, v / (1.0 + std::pow(d, -fit.b)));
  return fit;
}

} // namespace poincare::siegel
