#pragma once

// One-dimensional quadrature building blocks shared by the special-function
// and cone-integral code: a 15-point Gauss-Kronrod pair with recursive
// bisection, progressive panels for semi-infinite ranges, and tanh-sinh for
// integrable endpoint singularities.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace poincare::quad {

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-15;
  int max_depth = 14;
  // exponents closer than this to -1 at an integration boundary are rejected
  double boundary_exponent_guard = 1e-8;
};

struct QuadResult {
  double value = 0.0;
  double est_error = 0.0;
  std::size_t evaluations = 0;
};

namespace detail {

// Kronrod-15 abscissae/weights with the embedded Gauss-7 rule.
inline constexpr std::array<double, 8> kGk15X = {
    0.000000000000000000000000000000000e+00,
    2.077849550078984676006894037732449e-01,
    4.058451513773971669066064120769615e-01,
    5.860872354676911302941448382587296e-01,
    7.415311855993944398638647732807884e-01,
    8.648644233597690727897127886409262e-01,
    9.491079123427585245261896840478513e-01,
    9.914553711208126392068546975263285e-01};

inline constexpr std::array<double, 8> kGk15W = {
    2.094821410847278280129991748917143e-01,
    2.044329400752988924141619992346491e-01,
    1.903505780647854099132564024210137e-01,
    1.690047266392679028265834265985503e-01,
    1.406532597155259187451895905102379e-01,
    1.047900103222501838398763225415180e-01,
    6.309209262997855329070066318920429e-02,
    2.293532201052922496373200805896959e-02};

inline constexpr std::array<double, 4> kG7W = {
    4.179591836734693877551020408163265e-01,
    3.818300505051189449503697754889751e-01,
    2.797053914892766679014677714237796e-01,
    1.294849661688696932706114326790820e-01};

} // namespace detail

// Single Gauss-Kronrod 15(7) panel on [a, b].
template <class F>
QuadResult gk15(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double f0 = f(c);
  double kron = detail::kGk15W[0] * f0;
  double gauss = detail::kG7W[0] * f0;
  std::size_t evals = 1;
  for (int i = 1; i < 8; ++i) {
    const double dx = h * detail::kGk15X[i];
    const double fp = f(c + dx);
    const double fm = f(c - dx);
    evals += 2;
    kron += detail::kGk15W[i] * (fp + fm);
    if (i % 2 == 0) gauss += detail::kG7W[i / 2] * (fp + fm);
  }
  QuadResult r;
  r.value = kron * h;
  r.est_error = std::abs(kron - gauss) * std::abs(h);
  // sharpen the raw difference the way QUADPACK does
  r.est_error = std::pow(200.0 * r.est_error, 1.5);
  if (!std::isfinite(r.est_error)) r.est_error = std::abs(r.value);
  r.evaluations = evals;
  return r;
}

template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b, const QuadratureSpec& q = {}) {
  struct Seg {
    double a, b;
    int depth;
  };
  QuadResult total;
  std::vector<Seg> stack{{a, b, 0}};
  while (!stack.empty()) {
    Seg s = stack.back();
    stack.pop_back();
    QuadResult r = gk15(f, s.a, s.b);
    total.evaluations += r.evaluations;
    const double tol = std::max(q.abs_tol, q.rel_tol * std::abs(r.value)) *
                       std::max(1.0, (s.b - s.a) / (b - a));
    if (r.est_error <= tol || s.depth >= q.max_depth) {
      total.value += r.value;
      total.est_error += r.est_error;
      continue;
    }
    const double m = 0.5 * (s.a + s.b);
    stack.push_back({s.a, m, s.depth + 1});
    stack.push_back({m, s.b, s.depth + 1});
  }
  return total;
}

// \int_a^\infty f, for integrands with eventual (at least exponential-ish)
// decay. Panels [a+2^k, a+2^{k+1}] are added until they stop contributing.
template <class F>
QuadResult integrate_to_infinity(F&& f, double a, const QuadratureSpec& q = {}) {
  QuadResult total;
  double left = a;
  double width = 1.0;
  int quiet = 0;
  for (int k = 0; k < 128; ++k) {
    QuadResult r = integrate_adaptive(f, left, left + width, q);
    total.value += r.value;
    total.est_error += r.est_error;
    total.evaluations += r.evaluations;
    if (std::abs(r.value) <= std::max(q.abs_tol, 0.5 * q.rel_tol * std::abs(total.value)))
      ++quiet;
    else
      quiet = 0;
    if (quiet >= 2) break;
    left += width;
    width *= 2.0;
  }
  return total;
}

// tanh-sinh rule on (a, b); tolerates integrable singularities at both ends.
// Step-halving trapezoid in the transformed variable, stopping once two
// successive refinements agree to the requested tolerance.
template <class F>
QuadResult tanh_sinh(F&& f, double a, double b, const QuadratureSpec& q = {}) {
  const double c = 0.5 * (a + b);
  const double h0 = 0.5 * (b - a);
  const double tmax = 6.7;
  QuadResult total;

  auto node_sum = [&](double t) {
    const double u = 0.5 * M_PI * std::sinh(t);
    const double x = std::tanh(u);
    const double w = 0.5 * M_PI * std::cosh(t) / (std::cosh(u) * std::cosh(u));
    if (1.0 - std::abs(x) < 1e-17 || w < 1e-300) return 0.0;
    double v = f(c + h0 * x) * w;
    total.evaluations += 1;
    if (t != 0.0) {
      v += f(c - h0 * x) * w;
      total.evaluations += 1;
    }
    return std::isfinite(v) ? v : 0.0;
  };

  double step = 1.0;
  double sum = node_sum(0.0);
  for (double t = step; t <= tmax; t += step) sum += node_sum(t);
  double value = sum * step * h0;
  for (int level = 1; level <= std::max(6, q.max_depth); ++level) {
    step *= 0.5;
    for (double t = step; t <= tmax; t += 2.0 * step) sum += node_sum(t);
    const double refined = sum * step * h0;
    total.est_error = std::abs(refined - value);
    value = refined;
    if (total.est_error <= std::max(q.abs_tol, q.rel_tol * std::abs(value)) && level >= 3) break;
  }
  total.value = value;
  return total;
}

// Cached Gauss-Legendre nodes on [-1, 1].
inline const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
  static std::vector<std::pair<std::vector<double>, std::vector<double>>> cache(1025);
  if (n < 1 || n > 1024) throw std::invalid_argument("gauss_legendre: order out of range");
  auto& entry = cache[static_cast<std::size_t>(n)];
  if (!entry.first.empty()) return entry;
  std::vector<double> x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton from the Chebyshev initial guess
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
  entry = {std::move(x), std::move(w)};
  return entry;
}

} // namespace poincare::quad
