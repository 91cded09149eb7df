#pragma once

// Floating-point special functions: gamma on the complex plane, the upper
// incomplete gamma function, and the Whittaker W function. These back the
// numeric evaluation of Fourier terms and the spectral-pairing identity.

#include <cmath>
#include <complex>
#include <stdexcept>

#include "poincare/quadrature.hpp"

namespace poincare::specfun {

using cplx = std::complex<double>;

struct Precision {
  double rel_tol = 1e-12;
  double abs_tol = 1e-15;
  int max_refinement_depth = 14;
};

namespace detail {

// Lanczos approximation, g = 7, 9 terms.
inline constexpr double kLanczosG = 7.0;
inline constexpr double kLanczos[9] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

inline bool near_nonpositive_integer(const cplx& z, double tol = 1e-13) {
  if (std::abs(z.imag()) > tol) return false;
  const double r = z.real();
  if (r > 0.5) return false;
  return std::abs(r - std::round(r)) <= tol * std::max(1.0, std::abs(r));
}

inline cplx lanczos_gamma(cplx z) {
  if (z.real() < 0.5) {
    // reflection
    return M_PI / (std::sin(M_PI * z) * lanczos_gamma(1.0 - z));
  }
  z -= 1.0;
  cplx x = kLanczos[0];
  for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  const cplx t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

} // namespace detail

inline cplx gamma(const cplx& z) {
  if (detail::near_nonpositive_integer(z))
    throw std::domain_error("gamma: pole at nonpositive integer");
  return detail::lanczos_gamma(z);
}

inline double gamma(double x) {
  if (x <= 0.0 && std::abs(x - std::round(x)) < 1e-13)
    throw std::domain_error("gamma: pole at nonpositive integer");
  return std::tgamma(x);
}

// Gamma(s, x) for positive integer s: (s-1)! e^{-x} sum_{j<s} x^j / j!
inline double upper_gamma_integer(long s, double x) {
  if (s < 1) throw std::domain_error("upper_gamma_integer: s must be >= 1");
  double term = 1.0;  // x^j / j!
  double sum = 1.0;
  for (long j = 1; j < s; ++j) {
    term *= x / static_cast<double>(j);
    sum += term;
  }
  double fact = 1.0;
  for (long j = 2; j < s; ++j) fact *= static_cast<double>(j);
  return fact * std::exp(-x) * sum;
}

namespace detail {

// Continued fraction for Gamma(s,x), Lentz with the usual tiny-guard. Valid
// for x not much smaller than |s|.
inline cplx upper_gamma_cf(const cplx& s, double x, const Precision& p) {
  const double tiny = 1e-290;
  cplx b = x + 1.0 - s;
  cplx c = 1.0 / tiny;
  cplx d = 1.0 / b;
  cplx h = d;
  for (int i = 1; i <= 4000; ++i) {
    const cplx an = -static_cast<double>(i) * (static_cast<double>(i) - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const cplx delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < p.rel_tol * 0.1) break;
  }
  return std::exp(-x + s * std::log(x)) * h;
}

// Series for the lower incomplete gamma, used when x is small.
inline cplx lower_gamma_series(const cplx& s, double x, const Precision& p) {
  cplx ap = s;
  cplx sum = 1.0 / s;
  cplx del = sum;
  for (int i = 0; i < 4000; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * p.rel_tol * 0.1) break;
  }
  return std::exp(-x + s * std::log(x)) * sum;
}

} // namespace detail

inline cplx upper_incomplete_gamma(const cplx& s, double x, const Precision& p = {}) {
  if (!(x > 0.0)) throw std::domain_error("upper_incomplete_gamma: requires x > 0");
  if (std::abs(s.imag()) < 1e-14) {
    const double sr = s.real();
    if (sr >= 1.0 && std::abs(sr - std::round(sr)) < 1e-13 && sr < 1e6)
      return upper_gamma_integer(std::lround(sr), x);
  }
  if (x > std::abs(s) + 1.0) return detail::upper_gamma_cf(s, x, p);
  if (detail::near_nonpositive_integer(s)) {
    // Gamma(s) is singular but Gamma(s,x) is fine; fall back to the CF after
    // a few recurrence steps raising s: Gamma(s,x) = (Gamma(s+1,x) - x^s e^{-x})/s
    const cplx up = upper_incomplete_gamma(s + 1.0, x, p);
    return (up - std::exp(-x + s * std::log(x))) / s;
  }
  return gamma(s) - detail::lower_gamma_series(s, x, p);
}

inline double upper_incomplete_gamma(double s, double x, const Precision& p = {}) {
  return upper_incomplete_gamma(cplx(s, 0.0), x, p).real();
}

namespace detail {

// W_{kappa,mu}(z) by the standard integral representation, valid when
// mu - kappa + 1/2 > 0.
inline double whittaker_w_integral(double kappa, double mu, double z, const Precision& p) {
  const double a = mu - kappa - 0.5;  // power of t at 0, a > -1
  const double b = mu + kappa - 0.5;
  quad::QuadratureSpec q;
  q.rel_tol = std::min(1e-12, p.rel_tol * 1e-2);
  q.abs_tol = 1e-300;
  q.max_depth = p.max_refinement_depth;
  auto f = [&](double t) {
    if (t <= 0.0) return 0.0;
    return std::exp(-t + a * std::log(t) + b * std::log1p(t / z));
  };
  double head;
  if (a < 0.0) {
    head = quad::tanh_sinh(f, 0.0, 1.0, q).value;
  } else {
    head = quad::integrate_adaptive(f, 0.0, 1.0, q).value;
  }
  const double tail = quad::integrate_to_infinity(f, 1.0, q).value;
  const double front = std::exp(-0.5 * z + kappa * std::log(z)) / std::tgamma(mu - kappa + 0.5);
  return front * (head + tail);
}

} // namespace detail

// Whittaker W. Uses the integral representation when it applies and the
// three-term recurrence in kappa otherwise:
//   W_{k+1,mu}(z) = (z - 2k) W_{k,mu}(z) - (k - 1/2 - mu)(k - 1/2 + mu) W_{k-1,mu}(z)
inline double whittaker_w(double kappa, double mu, double z, const Precision& p = {}) {
  if (!(z > 0.0)) throw std::domain_error("whittaker_w: requires z > 0");
  if (!std::isfinite(kappa) || !std::isfinite(mu))
    throw std::domain_error("whittaker_w: bad parameters");
  if (kappa < mu) return detail::whittaker_w_integral(kappa, mu, z, p);
  const int steps = static_cast<int>(std::ceil(kappa - mu)) + 1;
  const double k0 = kappa - steps;  // k0 < mu, integral representation valid
  double wm = detail::whittaker_w_integral(k0 - 1.0, mu, z, p);
  double w0 = detail::whittaker_w_integral(k0, mu, z, p);
  double k = k0;
  for (int i = 0; i < steps; ++i) {
    const double wp = (z - 2.0 * k) * w0 - (k - 0.5 - mu) * (k - 0.5 + mu) * wm;
    wm = w0;
    w0 = wp;
    k += 1.0;
  }
  return w0;
}

} // namespace poincare::specfun
