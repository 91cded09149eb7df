#pragma once

// Coset enumeration for Gamma_infty \ SL2(Z), truncated evaluation of the
// elliptic Poincare series built from products of Fourier-series terms, and
// the spectral-pairing integral identity.

#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "poincare/exact_terms.hpp"
#include "poincare/specfun.hpp"

namespace poincare::elliptic {

using cplx = std::complex<double>;

// (a b; c d) with ad - bc = 1, normalized so c > 0, or c = 0 and d = 1.
struct Sl2CosetRep {
  long a = 1, b = 0, c = 0, d = 1;
};

// All cosets Gamma_infty \ SL2(Z) whose bottom row satisfies max(|c|,|d|) <= height,
// in lexicographic (c, d) order. (c, d) ~ (-c, -d) is stored once.
inline std::vector<Sl2CosetRep> enumerate_sl2_cosets(long height) {
  if (height < 1) throw std::domain_error("enumerate_sl2_cosets: height >= 1");
  std::vector<Sl2CosetRep> reps;
  reps.push_back({1, 0, 0, 1});
  for (long c = 1; c <= height; ++c) {
    for (long d = -height; d <= height; ++d) {
      if (std::gcd(c, std::labs(d)) != 1) continue;
      // extended gcd: x*c + y*d = 1, take a = y, b = -x, then reduce a mod c
      long x0 = 1, y0 = 0, x1 = 0, y1 = 1, r0 = c, r1 = d;
      while (r1 != 0) {
        const long q = r0 / r1;
        std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
        std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
        std::tie(y0, y1) = std::make_pair(y1, y0 - q * y1);
      }
      if (r0 < 0) { r0 = -r0; x0 = -x0; y0 = -y0; }
      if (r0 != 1) continue;
      long a = y0, b = -x0;
      a = ((a % c) + c) % c;
      b = (a * d - 1) / c;
      reps.push_back({a, b, c, d});
    }
  }
  return reps;
}

struct SeriesValue {
  cplx value{0.0, 0.0};
  double tail_estimate = 0.0;
  std::size_t n_terms = 0;
  double convergence_margin = 0.0;
};

// Cusp exponent criterion: a term c y^a e(...) contributes |c tau + d|^{-(w + 2a)}
// near the cusps, so the series converges when min_a (w + 2a) > 2. The four
// seed families reduce to their printed thresholds under this rule (gamma
// factors are bounded toward y = 0 after expansion).
inline double convergence_margin(const exact::WeightedFunction& f) {
  const auto [lo, hi] = f.expr.y_exp_range_expanded();
  return static_cast<double>(f.weight + 2 * lo - 2);
}

template <class Seed>
SeriesValue eval_series_over(const std::vector<Sl2CosetRep>& reps, Seed&& seed, int weight,
                             cplx tau, long height, double margin) {
  if (weight % 2 != 0)
    throw std::domain_error("eval_elliptic_poincare: total weight must be even");
  SeriesValue out;
  out.convergence_margin = margin;
  // Neumaier-compensated sums, fixed coset order
  double sr = 0, cr = 0, si = 0, ci = 0;
  double shell_abs = 0.0;
  auto add = [](double& s, double& comp, double v) {
    const double t = s + v;
    if (std::abs(s) >= std::abs(v))
      comp += (s - t) + v;
    else
      comp += (v - t) + s;
    s = t;
  };
  for (const auto& g : reps) {
    const cplx den = cplx(static_cast<double>(g.c)) * tau + cplx(static_cast<double>(g.d));
    const cplx tp = (cplx(static_cast<double>(g.a)) * tau + cplx(static_cast<double>(g.b))) / den;
    cplx j = 1.0;
    const cplx deninv = 1.0 / den;
    for (int i = 0; i < weight; ++i) j *= deninv;
    if (weight < 0) {
      j = 1.0;
      for (int i = 0; i < -weight; ++i) j *= den;
    }
    const cplx v = seed(tp) * j;
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::runtime_error("eval_elliptic_poincare: non-finite summand");
    add(sr, cr, v.real());
    add(si, ci, v.imag());
    if (std::max(std::labs(g.c), std::labs(g.d)) == height) shell_abs += std::abs(v);
    ++out.n_terms;
  }
  out.value = {sr + cr, si + ci};
  // Integral-comparison heuristic: sum_{h > H} shell(h) ~ shell(H) * H / margin.
  // Reported alongside the value, never applied.
  out.tail_estimate = margin > 0 ? shell_abs * static_cast<double>(height) / margin
                                 : std::numeric_limits<double>::infinity();
  return out;
}

inline SeriesValue eval_elliptic_poincare(const exact::WeightedFunction& f, cplx tau, long height,
                                          bool enforce_convergence = true) {
  const double margin = convergence_margin(f);
  if (enforce_convergence && !(margin > 0))
    throw std::domain_error("eval_elliptic_poincare: convergence condition violated");
  const auto reps = enumerate_sl2_cosets(height);
  return eval_series_over(reps, [&](cplx tp) { return f.expr.evaluate(tp); }, f.weight, tau,
                          height, margin);
}

// numeric-only seed path (Selberg-type terms y^s e^{2 pi i n tau} with complex s)
inline SeriesValue eval_elliptic_poincare_numeric(const std::function<cplx(cplx)>& seed,
                                                  int weight, cplx tau, long height) {
  const auto reps = enumerate_sl2_cosets(height);
  return eval_series_over(reps, seed, weight, tau, height, 0.0);
}

inline std::function<cplx(cplx)> selberg_seed(cplx s, int n) {
  return [s, n](cplx tau) {
    return std::pow(tau.imag(), s) * std::exp(cplx(0.0, 2.0 * M_PI * n) * tau);
  };
}

struct SpectralPairing {
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_err = 0.0;
};

// Petersson pairing of the antiholomorphic Poincare series against a weight
// k+l Maass cusp form term, reduced to a single Whittaker-Laplace integral;
// the closed form is the gamma product below (the terminating 2F1 factor
// equals 1).
inline SpectralPairing spectral_pairing_check(int k, int ell, double s, int n, int m,
                                              const specfun::Precision& prec = {}) {
  if (k >= 0 || k % 2 != 0) throw std::domain_error("spectral_pairing_check: k must be negative even");
  if (!(m > n)) throw std::domain_error("spectral_pairing_check: requires m > n");
  if (!(k + ell > 2)) throw std::domain_error("spectral_pairing_check: requires k + l > 2");
  if (!(s > 0.5)) throw std::domain_error("spectral_pairing_check: requires s > 1/2");
  if (!((ell - k) / 2.0 > s)) throw std::domain_error("spectral_pairing_check: requires (l-k)/2 > s");

  const double c = 4.0 * M_PI * (m - n);
  const double kl2 = 0.5 * (k + ell);
  auto integrand = [&](double y) {
    if (y <= 0.0) return 0.0;
    const double w = specfun::whittaker_w(kl2, s - 0.5, c * y, prec);
    return std::pow(y, -k) * std::exp(-2.0 * M_PI * (m - n) * y) * std::pow(c * y, -kl2) * w *
           std::pow(y, k + ell - 2);
  };
  quad::QuadratureSpec q;
  q.rel_tol = 1e-11;
  q.abs_tol = 1e-300;
  SpectralPairing out;
  out.lhs = quad::integrate_adaptive(integrand, 0.0, 2.0, q).value +
            quad::integrate_to_infinity(integrand, 2.0, q).value;
  out.rhs = std::pow(c, 1.0 - ell) * specfun::gamma(0.5 * (ell - k) + s - 1.0) *
            specfun::gamma(0.5 * (ell - k) - s) / specfun::gamma(static_cast<double>(-k));
  out.rel_err = std::abs(out.lhs - out.rhs) / std::abs(out.rhs);
  return out;
}

} // namespace poincare::elliptic
