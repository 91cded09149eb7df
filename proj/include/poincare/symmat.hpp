#pragma once

// Symmetric 2x2 real matrices, points of the degree-2 upper half space, and a
// small complex 2x2 type for automorphy factors.

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace poincare::siegel {

using cplx = std::complex<double>;

struct SymMat2 {
  double m11 = 0, m12 = 0, m22 = 0;

  static SymMat2 identity() { return {1.0, 0.0, 1.0}; }
  static SymMat2 diag(double a, double b) { return {a, 0.0, b}; }

  double det() const { return m11 * m22 - m12 * m12; }
  double trace() const { return m11 + m22; }
  bool positive_definite() const { return m11 > 0.0 && det() > 0.0; }
  bool half_integral(double tol = 1e-12) const {
    auto is_int = [tol](double v) { return std::abs(v - std::round(v)) <= tol; };
    return is_int(m11) && is_int(m22) && is_int(2.0 * m12);
  }

  SymMat2 operator+(const SymMat2& o) const { return {m11 + o.m11, m12 + o.m12, m22 + o.m22}; }
  SymMat2 operator-(const SymMat2& o) const { return {m11 - o.m11, m12 - o.m12, m22 - o.m22}; }
  SymMat2 operator*(double s) const { return {m11 * s, m12 * s, m22 * s}; }

  // eigenvalues, ascending
  std::array<double, 2> eigenvalues() const {
    const double tr = trace();
    const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det()));
    return {0.5 * tr - disc, 0.5 * tr + disc};
  }

  // symmetric square root of a positive semidefinite matrix (closed form)
  SymMat2 sqrt_psd() const {
    const double d = det();
    const double t = trace();
    if (d < -1e-14 || t < -1e-14) throw std::domain_error("sqrt_psd: matrix not PSD");
    const double s = std::sqrt(std::max(0.0, d));
    const double u = std::sqrt(std::max(0.0, t + 2.0 * s));
    if (u == 0.0) return {0.0, 0.0, 0.0};
    return {(m11 + s) / u, m12 / u, (m22 + s) / u};
  }

  SymMat2 inverse() const {
    const double d = det();
    if (d == 0.0) throw std::domain_error("SymMat2::inverse: singular");
    return {m22 / d, -m12 / d, m11 / d};
  }

  // tr(A * B) for symmetric A, B
  double inner(const SymMat2& o) const { return m11 * o.m11 + 2.0 * m12 * o.m12 + m22 * o.m22; }

  // loewner order check: *this - o positive semidefinite
  bool loewner_geq(const SymMat2& o, double tol = 0.0) const {
    const SymMat2 d = *this - o;
    return d.m11 >= -tol && d.m22 >= -tol && d.det() >= -tol;
  }
};

inline double tr_product(const SymMat2& a, const SymMat2& b) { return a.inner(b); }

struct SiegelPoint {
  SymMat2 X;
  SymMat2 Y;

  SiegelPoint() : X{0, 0, 0}, Y{1, 0, 1} {}
  SiegelPoint(const SymMat2& x, const SymMat2& y) : X(x), Y(y) {
    if (!Y.positive_definite()) throw std::domain_error("SiegelPoint: Im Z must be positive definite");
  }
  static SiegelPoint scaled_i(double y0) { return SiegelPoint({0, 0, 0}, {y0, 0, y0}); }
};

// complex 2x2, row-major
struct Mat2c {
  std::array<cplx, 4> m{};  // [a b; c d]

  static Mat2c from_sym(const SymMat2& s) { return {{s.m11, s.m12, s.m12, s.m22}}; }
  static Mat2c from_point(const SiegelPoint& Z) {
    return {{cplx(Z.X.m11, Z.Y.m11), cplx(Z.X.m12, Z.Y.m12), cplx(Z.X.m12, Z.Y.m12),
             cplx(Z.X.m22, Z.Y.m22)}};
  }
  static Mat2c identity() { return {{1.0, 0.0, 0.0, 1.0}}; }

  cplx det() const { return m[0] * m[3] - m[1] * m[2]; }
  Mat2c inverse() const {
    const cplx d = det();
    if (std::abs(d) == 0.0) throw std::domain_error("Mat2c::inverse: singular");
    return {{m[3] / d, -m[1] / d, -m[2] / d, m[0] / d}};
  }
  Mat2c operator*(const Mat2c& o) const {
    return {{m[0] * o.m[0] + m[1] * o.m[2], m[0] * o.m[1] + m[1] * o.m[3],
             m[2] * o.m[0] + m[3] * o.m[2], m[2] * o.m[1] + m[3] * o.m[3]}};
  }
  Mat2c operator+(const Mat2c& o) const {
    return {{m[0] + o.m[0], m[1] + o.m[1], m[2] + o.m[2], m[3] + o.m[3]}};
  }
  Mat2c operator*(cplx s) const { return {{m[0] * s, m[1] * s, m[2] * s, m[3] * s}}; }

  SymMat2 real_sym(double tol = 1e-9) const {
    if (std::abs(m[1] - m[2]) > tol * (1.0 + std::abs(m[1])))
      throw std::runtime_error("Mat2c::real_sym: not symmetric");
    return {m[0].real(), 0.5 * (m[1] + m[2]).real(), m[3].real()};
  }
  SymMat2 imag_sym(double tol = 1e-9) const {
    if (std::abs(m[1] - m[2]) > tol * (1.0 + std::abs(m[1])))
      throw std::runtime_error("Mat2c::imag_sym: not symmetric");
    return {m[0].imag(), 0.5 * (m[1] + m[2]).imag(), m[3].imag()};
  }

  double frobenius() const {
    double s = 0.0;
    for (const auto& v : m) s += std::norm(v);
    return std::sqrt(s);
  }
};

inline cplx pow_int(cplx base, int e) {
  cplx acc = 1.0;
  const cplx b = e < 0 ? 1.0 / base : base;
  for (int i = 0; i < std::abs(e); ++i) acc *= b;
  return acc;
}

} // namespace poincare::siegel
