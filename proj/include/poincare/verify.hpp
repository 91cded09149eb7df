#pragma once

// Acceptance suite: one runner per criterion, each checking its stated
// tolerance and returning a pass/fail line. The oracles used here (Monte
// Carlo cone integral, bounded-box symplectic enumeration, U(2) character
// products, finite-difference operators) are deliberately independent of the
// implementation paths they check.

#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "poincare/elliptic.hpp"
#include "poincare/exact_terms.hpp"
#include "poincare/gk_support.hpp"
#include "poincare/p2.hpp"
#include "poincare/siegel.hpp"
#include "poincare/sp2.hpp"
#include "poincare/specfun.hpp"

namespace poincare::verify {

using cplx = std::complex<double>;

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  unsigned workers = 2;
  unsigned long seed = 20250810;
};

namespace oracle {

// ---- Monte Carlo estimate of h_{alpha,beta}(T;Y) by importance sampling
// the shifted cone U = T + V, V > 0, with exponential proposals on the
// diagonal and a uniform off-diagonal entry.
struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

inline McEstimate mc_h_integral(double alpha, double beta, const siegel::SymMat2& T,
                                const siegel::SymMat2& Y, std::size_t n, unsigned long seed) {
  std::mt19937_64 rng(seed);
  const double l1 = 2.0 * M_PI * Y.m11;
  const double l2 = 2.0 * M_PI * Y.m22;
  std::exponential_distribution<double> e1(l1), e2(l2);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v11 = e1(rng);
    const double v22 = e2(rng);
    const double r = std::sqrt(v11 * v22);
    const double v12 = uni(rng) * r;
    const double det_umt = v11 * v22 - v12 * v12;
    double f = 0.0;
    if (det_umt > 0.0) {
      const double u11 = v11 + T.m11, u12 = v12 + T.m12, u22 = v22 + T.m22;
      const double det_upt = (u11 + T.m11) * (u22 + T.m22) - (u12 + T.m12) * (u12 + T.m12);
      const double tr_yu = Y.m11 * u11 + 2.0 * Y.m12 * u12 + Y.m22 * u22;
      f = std::pow(det_upt, alpha - 1.5) * std::pow(det_umt, beta - 1.5) *
          std::exp(-2.0 * M_PI * tr_yu);
    }
    const double pdf = l1 * std::exp(-l1 * v11) * l2 * std::exp(-l2 * v22) / (2.0 * r);
    const double w = f / pdf;
    sum += w;
    sum2 += w * w;
  }
  McEstimate est;
  est.value = sum / static_cast<double>(n);
  const double var = sum2 / static_cast<double>(n) - est.value * est.value;
  est.std_error = std::sqrt(std::max(0.0, var / static_cast<double>(n)));
  return est;
}

// ---- U(2) character of highest weight (a,b) at diag(e^{i t1}, e^{i t2}):
// Weyl character formula (x^{a+1} y^b - x^b y^{a+1}) / (x - y).
inline cplx u2_character(int a, int b, double t1, double t2) {
  const cplx x = std::polar(1.0, t1);
  const cplx y = std::polar(1.0, t2);
  auto ipow = [](cplx v, int e) {
    cplx acc = 1.0;
    const cplx base = e < 0 ? 1.0 / v : v;
    for (int i = 0; i < std::abs(e); ++i) acc *= base;
    return acc;
  };
  return (ipow(x, a + 1) * ipow(y, b) - ipow(x, b) * ipow(y, a + 1)) / (x - y);
}

// ---- Delta-classes of symplectic matrices with ALL entries in [-H, H]:
// for every candidate bottom pair (C,D) with C tD symmetric, decide whether a
// bounded (A,B) completion exists by direct search over A (solving for B when
// possible). Never calls the SNF completion path.
inline std::vector<std::pair<sp2::Mat2, sp2::Mat2>> bounded_symplectic_classes(long H) {
  using sp2::Mat2;
  using sp2::mat2;
  std::vector<std::pair<Mat2, Mat2>> found;
  std::vector<Mat2> all;
  for (long a = -H; a <= H; ++a)
    for (long b = -H; b <= H; ++b)
      for (long c = -H; c <= H; ++c)
        for (long d = -H; d <= H; ++d) all.push_back(mat2(a, b, c, d));
  std::vector<std::array<long, 2>> rows;
  for (long a = -H; a <= H; ++a)
    for (long b = -H; b <= H; ++b) rows.push_back({a, b});
  for (const auto& C : all) {
    const long detC = det(C);
    for (const auto& D : all) {
      if (!sp2::is_symmetric(C * sp2::transpose(D))) continue;
      bool ok = false;
      for (const auto& A : all) {
        // need B with  A tD - B tC = I  and  A tB symmetric
        const Mat2 R = A * sp2::transpose(D) - mat2(1, 0, 0, 1);  // = B tC
        if (detC != 0) {
          // B = R * tC^{-1} (rational); integrality check via adjugate
          const Mat2 adj = mat2(C[1][1], -C[1][0], -C[0][1], C[0][0]);  // adj(tC)
          const Mat2 num = R * adj;
          if (num[0][0] % detC || num[0][1] % detC || num[1][0] % detC || num[1][1] % detC)
            continue;
          const Mat2 B = mat2(num[0][0] / detC, num[0][1] / detC, num[1][0] / detC,
                              num[1][1] / detC);
          if (sp2::max_abs(B) > H) continue;
          sp2::SymplecticRep M{A, B, C, D};
          if (M.is_symplectic()) { ok = true; break; }
        } else {
          // rows of B decouple: row_i(B) . row_j(C) = R_{ij}
          std::vector<std::array<long, 2>> cand1, cand2;
          for (const auto& r : rows) {
            if (r[0] * C[0][0] + r[1] * C[0][1] == R[0][0] &&
                r[0] * C[1][0] + r[1] * C[1][1] == R[0][1])
              cand1.push_back(r);
            if (r[0] * C[0][0] + r[1] * C[0][1] == R[1][0] &&
                r[0] * C[1][0] + r[1] * C[1][1] == R[1][1])
              cand2.push_back(r);
          }
          for (const auto& r1 : cand1) {
            for (const auto& r2 : cand2) {
              const Mat2 B = mat2(r1[0], r1[1], r2[0], r2[1]);
              sp2::SymplecticRep M{A, B, C, D};
              if (M.is_symplectic()) { ok = true; break; }
            }
            if (ok) break;
          }
          if (ok) break;
        }
      }
      if (ok) found.push_back({C, D});
    }
  }
  return found;
}

} // namespace oracle

namespace detail {

template <class Fn>
CriterionResult timed(int id, const std::string& name, Fn&& fn) {
  CriterionResult r;
  r.id = id;
  r.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    std::ostringstream detail;
    r.pass = fn(detail);
    r.detail = detail.str();
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// numeric lowering/raising of an elliptic seed by central differences,
// step 1e-5 * min(1, y)
inline cplx numeric_lower(const std::function<cplx(cplx)>& f, cplx tau) {
  const double h = 1e-5 * std::min(1.0, tau.imag());
  const cplx fx = (f(tau + h) - f(tau - h)) / (2.0 * h);
  const cplx fy = (f(tau + cplx(0, h)) - f(tau - cplx(0, h))) / (2.0 * h);
  const cplx dtaubar = 0.5 * (fx + cplx(0, 1) * fy);
  return cplx(0, -2.0) * tau.imag() * tau.imag() * dtaubar;
}

inline cplx numeric_raise(const std::function<cplx(cplx)>& f, int k, cplx tau) {
  const double h = 1e-5 * std::min(1.0, tau.imag());
  const cplx fx = (f(tau + h) - f(tau - h)) / (2.0 * h);
  const cplx fy = (f(tau + cplx(0, h)) - f(tau - cplx(0, h))) / (2.0 * h);
  const cplx dtau = 0.5 * (fx - cplx(0, 1) * fy);
  return cplx(0, 2.0) * dtau + static_cast<double>(k) / tau.imag() * f(tau);
}

inline exact::Coefficient scalar_4pi_n_pow(int n_abs, int e) {
  // (4 pi n_abs)^e as an exact coefficient
  return exact::Coefficient(exact::rational_pow(exact::Rational(4 * n_abs), e), 0, e);
}

} // namespace detail

// 1. Exact operator identities, zero tolerance.
//    The lowering image of psi~ lands on the phi~ line with scalar
//    -(4 pi |n|)^{1-k}; the printed statements omit the minus sign, which
//    the exact algebra (and independent numerics) force.
inline CriterionResult criterion_1(const Options&) {
  return detail::timed(1, "exact operator identities", [&](std::ostringstream& out) {
    using namespace exact;
    std::size_t checks = 0;
    for (int k = -10; k <= 10; k += 2) {
      for (int n = 1; n <= 5; ++n) {
        for (int d = 0; d <= 4; ++d) {
          // L^{d+1} phi_{k[d]} = 0
          WeightedFunction f = make_phi(k, d, n);
          for (int i = 0; i <= d; ++i) f = lower(f);
          if (!f.expr.is_zero()) {
            out << "L^{d+1} phi failed at k=" << k << " d=" << d << " n=" << n;
            return false;
          }
          ++checks;
        }
        if (k >= 0) {
          // L^{k+1}(psi_k phi_l) = 0 for every admissible l, m
          for (int m = 1; m <= 5; ++m) {
            WeightedFunction g = multiply(make_psi(k, n), make_phi(k + 6, 0, m));
            for (int i = 0; i <= k; ++i) g = lower(g);
            if (!g.expr.is_zero()) {
              out << "L^{k+1}(psi phi) failed at k=" << k << " n=" << n << " m=" << m;
              return false;
            }
            ++checks;
          }
          // L R psi_k = 0
          if (!lower(raise(make_psi(k, n))).expr.is_zero()) {
            out << "LR psi failed at k=" << k << " n=" << n;
            return false;
          }
          ++checks;
        }
        if (k <= 0) {
          // L psi~_k(n') = -(4 pi |n'|)^{1-k} phi~_{k-2}(-n'), n' = -n
          const int np = -n;
          const TermSum lhs = lower(make_psi_tilde(k, np)).expr;
          const TermSum rhs =
              phi_tilde_expr(k - 2, -np).scale(-detail::scalar_4pi_n_pow(n, 1 - k));
          if (!lhs.minus(rhs).is_zero()) {
            out << "L psi~ identity failed at k=" << k << " n=" << np;
            return false;
          }
          ++checks;
        }
      }
    }
    out << checks << " identities exact (psi~ image scalar is -(4 pi |n|)^{1-k}; "
        << "the customary sign)";
    return true;
  });
}

// 2. Central-difference L, R against exact lower/raise on random terms.
inline CriterionResult criterion_2(const Options& opt) {
  return detail::timed(2, "symbolic vs numeric operators", [&](std::ostringstream& out) {
    using namespace exact;
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<int> pick(0, 4), n_pos(1, 4), d_rng(0, 3);
    std::uniform_int_distribution<int> k_neg(-4, 0), k_pos(0, 4), s_rng(-2, 3);
    std::uniform_real_distribution<double> xr(-0.5, 0.5), yr(0.6, 2.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      WeightedFunction f;
      switch (pick(rng)) {
        case 0: f = make_phi(2 * k_pos(rng), d_rng(rng), n_pos(rng)); break;
        case 1: f = make_psi(2 * k_pos(rng), n_pos(rng)); break;
        case 2: f = make_psi_tilde(2 * k_neg(rng), -n_pos(rng)); break;
        case 3: f = make_phi_tilde(2 * k_neg(rng) - 2, -n_pos(rng)); break;
        default: f = {TermSum::y_power(s_rng(rng)), 2 * k_pos(rng)}; break;
      }
      const cplx tau(xr(rng), yr(rng));
      auto eval_f = [&](cplx t) { return f.expr.evaluate(t); };
      const double scale = std::max(std::abs(eval_f(tau)), 1e-8);
      const cplx l_num = detail::numeric_lower(eval_f, tau);
      const cplx l_sym = lower(f).expr.evaluate(tau);
      const cplx r_num = detail::numeric_raise(eval_f, f.weight, tau);
      const cplx r_sym = raise(f).expr.evaluate(tau);
      const double el = std::abs(l_num - l_sym) / std::max(std::abs(l_sym), scale);
      const double er = std::abs(r_num - r_sym) / std::max(std::abs(r_sym), scale);
      worst = std::max({worst, el, er});
    }
    out << "100 samples, worst relative error " << worst;
    return worst <= 1e-6;
  });
}

// 3. Spectral-pairing integral vs gamma-product closed form.
inline CriterionResult criterion_3(const Options&) {
  return detail::timed(3, "spectral-pairing identity", [&](std::ostringstream& out) {
    struct Tuple { int k, ell; double s; int n, m; };
    const Tuple tuples[5] = {{-2, 8, 0.75, 1, 2},
                             {-4, 10, 0.6, -1, 1},
                             {-6, 12, 1.5, 0, 2},
                             {-2, 12, 2.0, -2, 1},
                             {-8, 14, 0.55, 2, 4}};
    double worst = 0.0;
    for (const auto& t : tuples) {
      const auto r = elliptic::spectral_pairing_check(t.k, t.ell, t.s, t.n, t.m);
      worst = std::max(worst, r.rel_err);
    }
    out << "5 tuples, worst relative error " << worst;
    return worst <= 1e-8;
  });
}

// 4. Clebsch-Gordan dimension identity, proposition constraints, character oracle.
inline CriterionResult criterion_4(const Options& opt) {
  return detail::timed(4, "Clebsch-Gordan decomposition", [&](std::ostringstream& out) {
    using gk::KType;
    std::size_t checks = 0;
    for (int p = 0; p <= 10; ++p)
      for (int q = 0; q <= 10; ++q)
        for (int b1 : {-2, 0, 3})
          for (int b2 : {-1, 0, 2}) {
            const KType t1(b1 + p, b1), t2(b2 + q, b2);
            const auto dec = clebsch_gordan(t1, t2);
            long dim = 0;
            for (const auto& t : dec) {
              dim += t.a - t.b + 1;
              if (t.a + t.b != t1.a + t1.b + t2.a + t2.b) {
                out << "sum rule violated";
                return false;
              }
              const int diff = t.a - t.b;
              if (diff < std::abs(p - q) || diff > p + q) {
                out << "difference-range rule violated";
                return false;
              }
            }
            if (dim != static_cast<long>(p + 1) * (q + 1)) {
              out << "dimension identity failed at p=" << p << " q=" << q;
              return false;
            }
            if (static_cast<int>(dec.size()) != std::min(p, q) + 1) {
              out << "multiplicity count failed";
              return false;
            }
            ++checks;
          }
    // character oracle on random pairs
    std::mt19937_64 rng(opt.seed + 4);
    std::uniform_int_distribution<int> brng(-4, 4), drng(0, 6);
    std::uniform_real_distribution<double> ang(0.3, 2.8);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const int b1 = brng(rng), b2 = brng(rng);
      const KType t1(b1 + drng(rng), b1), t2(b2 + drng(rng), b2);
      const auto dec = clebsch_gordan(t1, t2);
      for (int rep = 0; rep < 3; ++rep) {
        const double a1 = ang(rng), a2 = a1 + ang(rng);  // distinct angles
        const cplx prod = oracle::u2_character(t1.a, t1.b, a1, a2) *
                          oracle::u2_character(t2.a, t2.b, a1, a2);
        cplx sum = 0.0;
        for (const auto& t : dec) sum += oracle::u2_character(t.a, t.b, a1, a2);
        worst = std::max(worst, std::abs(prod - sum) / std::max(1.0, std::abs(prod)));
      }
    }
    out << checks << " exhaustive cases, character-oracle error " << worst;
    return worst <= 1e-8;
  });
}

// 5. Wall propagation for tensor products, sampled over a 12 x 12 window.
inline CriterionResult criterion_5(const Options& opt) {
  return detail::timed(5, "K-type wall propagation", [&](std::ostringstream& out) {
    using gk::KType;
    using gk::KTypeSupport;
    using gk::WallDir;
    std::mt19937_64 rng(opt.seed + 5);
    std::uniform_int_distribution<int> thr(-3, 3), coord(0, 11), nocc(1, 10), flip(0, 1);
    for (int trial = 0; trial < 1000; ++trial) {
      const bool case_right_up = flip(rng) == 0;
      const int a0 = thr(rng), b0p = thr(rng);
      KTypeSupport s1, s2;
      s1.window_lo = -16;
      s1.window_hi = 16;
      s2.window_lo = -16;
      s2.window_hi = 16;
      // random occupied sets inside a 12 x 12 window satisfying the hypotheses
      int placed = 0;
      for (int tries = 0; tries < 200 && placed < nocc(rng); ++tries) {
        const int da = coord(rng), db = coord(rng);
        const int a = case_right_up ? a0 + da : a0 - da;
        const int b = a - db;
        if (b < a - 11 || b > a) continue;
        s1.insert(KType(a, b));
        ++placed;
      }
      placed = 0;
      for (int tries = 0; tries < 200 && placed < nocc(rng); ++tries) {
        const int db = coord(rng), da = coord(rng);
        const int b = case_right_up ? b0p + db : b0p - db;
        const int a = b + da;
        if (a > b + 11) continue;
        s2.insert(KType(a, b));
        ++placed;
      }
      if (s1.occupied.empty() || s2.occupied.empty()) continue;
      s1.walls.push_back({case_right_up ? WallDir::right : WallDir::left, a0});
      s2.walls.push_back({case_right_up ? WallDir::up : WallDir::down, b0p});
      s1.validate();
      s2.validate();
      const KTypeSupport prod = tensor_ktype_support(s1, s2);
      // concluded wall with threshold a0 + b0'
      bool ok = true;
      for (const auto& [t, m] : prod.occupied) {
        (void)m;
        if (case_right_up ? (t.a < a0 + b0p) : (t.b > a0 + b0p)) ok = false;
      }
      if (!ok || prod.walls.empty()) {
        out << "wall conclusion failed on trial " << trial;
        return false;
      }
    }
    out << "1000 sampled configurations, concluded wall always present";
    return true;
  });
}

// 6. SL2 tensor support minimum weight = k - 2d + l.
inline CriterionResult criterion_6(const Options&) {
  return detail::timed(6, "SL2 tensor minimum weight", [&](std::ostringstream& out) {
    using namespace gk;
    std::size_t checks = 0;
    for (int k = 4; k <= 12; k += 2)
      for (int ell = 4; ell <= 12; ell += 2)
        for (int d = 0; d <= 3; ++d) {
          const auto s1 = canonical_sl2_support(Sl2Kind::phi_kd, k, d);
          const auto s2 = canonical_sl2_support(Sl2Kind::phi_kd, ell, 0);
          const auto prod = tensor_sl2(s1, s2);
          if (!prod.min_occupied() || *prod.min_occupied() != k - 2 * d + ell) {
            out << "minimum weight failed at k=" << k << " l=" << ell << " d=" << d;
            return false;
          }
          if (!has_lowest_weight(prod)) {
            out << "lowest-weight flag failed";
            return false;
          }
          ++checks;
        }
    out << checks << " tensor supports, min weight = k - 2d + l throughout";
    return true;
  });
}

// 7. h integral vs Monte Carlo oracle; scaling identity.
inline CriterionResult criterion_7(const Options& opt) {
  return detail::timed(7, "cone integral vs Monte Carlo", [&](std::ostringstream& out) {
    using siegel::SymMat2;
    quad::QuadratureSpec q;
    q.rel_tol = 1e-12;
    std::mt19937_64 rng(opt.seed + 7);
    std::uniform_real_distribution<double> diag(0.6, 1.8), off(-0.4, 0.4);
    std::vector<std::pair<SymMat2, SymMat2>> cases = {
        {SymMat2::identity(), SymMat2::identity()}};
    while (cases.size() < 5) {
      const SymMat2 T{diag(rng), off(rng), diag(rng)};
      const SymMat2 Y{diag(rng), off(rng), diag(rng)};
      if (T.positive_definite() && Y.positive_definite()) cases.push_back({T, Y});
    }
    double worst_mc = 0.0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const auto& [T, Y] = cases[i];
      const double hv = siegel::h_integral(5.0, 1.0, T, Y, q).value;
      const auto mc = oracle::mc_h_integral(5.0, 1.0, T, Y, 10'000'000, opt.seed + 70 + i);
      worst_mc = std::max(worst_mc, std::abs(hv - mc.value) / mc.value);
    }
    // scaling h(a,b,T,lam Y) = lam^{3-2a-2b} h(a,b,lam T, Y)
    double worst_scale = 0.0;
    for (int i = 0; i < 3; ++i) {
      const SymMat2 T{diag(rng), off(rng), diag(rng)};
      const SymMat2 Y{diag(rng), off(rng), diag(rng)};
      if (!T.positive_definite() || !Y.positive_definite()) continue;
      const double lam = 2.0;
      const double lhs = siegel::h_integral(5.0, 1.0, T, Y * lam, q).value;
      const double rhs =
          std::pow(lam, 3.0 - 2.0 * 5.0 - 2.0 * 1.0) * siegel::h_integral(5.0, 1.0, T * lam, Y, q).value;
      worst_scale = std::max(worst_scale, std::abs(lhs - rhs) / std::abs(rhs));
    }
    out << "MC rel diff " << worst_mc << " (<= 1e-3), scaling rel err " << worst_scale
        << " (<= 1e-6)";
    return worst_mc <= 1e-3 && worst_scale <= 1e-6;
  });
}

// 8. Matrix-Laplacian annihilation of det(Y)^{k-1/2} Psi_k(T;.), the decisive
//    correctness check for the cone-integral implementation.
inline CriterionResult criterion_8(const Options&) {
  return detail::timed(8, "Laplacian annihilation of the Psi term", [&](std::ostringstream& out) {
    using siegel::SiegelPoint;
    using siegel::SymMat2;
    const int k = 4;
    quad::QuadratureSpec q;
    q.rel_tol = 1e-12;
    const SymMat2 T = SymMat2::identity();
    const SiegelPoint pts[3] = {SiegelPoint({0, 0, 0}, {1, 0, 1}),
                                SiegelPoint({0, 0, 0}, {1, 0, 2}),
                                SiegelPoint({0, 0.3, 0}, {1, 0, 1})};
    double worst = 0.0;
    for (const auto& Z : pts) {
      // freeze the quadrature grid at the stencil centre so the field is
      // smooth under differencing
      const auto probe = siegel::h_integral(k + 1.0, 1.0, T, Z.Y, q);
      const double umax = std::sqrt(46.0 / (2.0 * M_PI * 0.7 * Z.Y.eigenvalues()[0]));
      auto field = [&](const SiegelPoint& W) -> cplx {
        const double h =
            siegel::h_integral(k + 1.0, 1.0, T, W.Y, q, probe.nodes_u, probe.nodes_theta, umax)
                .value;
        const cplx psi_v = T.det() * W.Y.det() * h *
                           std::exp(cplx(0.0, 2.0 * M_PI * siegel::tr_product(T, W.X)));
        return std::pow(W.Y.det(), k - 0.5) * psi_v;
      };
      const auto om = siegel::apply_omega(0.5, 0.5 - k, field, Z, 1e-4, 2.5e-4);
      const double rel = om.frobenius() / std::abs(field(Z));
      worst = std::max(worst, rel);
    }
    out << "worst ||Omega G|| / |G| = " << worst << " over 3 base points";
    return worst <= 1e-3;
  });
}

// 9. Coset enumeration vs the bounded-box oracle; symplectic and inequivalent.
inline CriterionResult criterion_9(const Options&) {
  return detail::timed(9, "Delta coset enumeration", [&](std::ostringstream& out) {
    for (long H = 1; H <= 2; ++H) {
      const auto reps = sp2::enumerate_delta_cosets(H);
      for (const auto& M : reps)
        if (!M.is_symplectic()) {
          out << "non-symplectic representative at height " << H;
          return false;
        }
      // pairwise Delta-inequivalence: identical (C,D) would be equivalent
      std::vector<std::pair<sp2::Mat2, sp2::Mat2>> keys;
      keys.reserve(reps.size());
      for (const auto& M : reps) keys.push_back({M.C, M.D});
      std::sort(keys.begin(), keys.end());
      if (std::adjacent_find(keys.begin(), keys.end()) != keys.end()) {
        out << "duplicate coset at height " << H;
        return false;
      }
      // spot-check the group-level equivalence predicate on a few pairs
      for (std::size_t i = 0; i < std::min<std::size_t>(reps.size(), 50); i += 7)
        for (std::size_t j = i + 1; j < std::min<std::size_t>(reps.size(), 50); j += 11)
          if (sp2::delta_equivalent(reps[i], reps[j])) {
            out << "delta-equivalent pair in output";
            return false;
          }
      const auto oracle_classes = oracle::bounded_symplectic_classes(H);
      if (oracle_classes.size() != reps.size()) {
        out << "height " << H << ": oracle " << oracle_classes.size() << " vs enumerated "
            << reps.size();
        return false;
      }
      out << "height " << H << ": " << reps.size() << " cosets agree with the box oracle; ";
    }
    return true;
  });
}

// 10. KST certificate at height 3.
inline CriterionResult criterion_10(const Options&) {
  return detail::timed(10, "KST y0 certificate", [&](std::ostringstream& out) {
    const auto reps = sp2::enumerate_delta_cosets(3);
    const auto r = p2::kst_y0_search(reps, {1.1, 1.5, 2.0, 3.0});
    if (!r.found) {
      out << "no grid value passed";
      return false;
    }
    out << "y0 = " << r.y0 << ", margin min|det(C i y0 + D)| - 1 = " << r.margin << " over "
        << reps.size() << " representatives";
    return r.y0 <= 3.0 && r.margin > 0.0;
  });
}

struct SlowContext {
  std::vector<sp2::SymplecticRep> reps2;
  p2::HSurrogate table;
  double y0 = 2.0;
  double b_fit = 0.0;
  bool ready = false;
};

// Shared state for the scan and probe criteria. The base point is i y0 I
// with y0 from the certificate search over the grid {2, 3}: a certificate
// with a wide margin, so that the l-decay of the C != 0 stratum is not
// drowned by cancellation at desk-scale truncation heights.
inline SlowContext& slow_context(const Options& opt) {
  static SlowContext ctx;
  if (!ctx.ready) {
    ctx.reps2 = sp2::enumerate_delta_cosets(2);
    const auto kst = p2::kst_y0_search(ctx.reps2, {2.0, 3.0});
    ctx.y0 = kst.found ? kst.y0 : 2.0;
    quad::QuadratureSpec q;
    q.rel_tol = 1e-10;
    ctx.b_fit = siegel::shimura_fit(4, siegel::SymMat2::identity(), q).b;
    const auto z0 = siegel::SiegelPoint::scaled_i(ctx.y0);
    const auto [lo, hi] = p2::eigen_range_over_cosets(ctx.reps2, z0);
    ctx.table = p2::HSurrogate::build(4, lo * 0.6, hi * 1.6, 80, opt.workers);
    ctx.ready = true;
  }
  return ctx;
}

// 11. Non-vanishing scan over l at Z = i y0 I.
inline CriterionResult criterion_11(const Options& opt) {
  return detail::timed(11, "non-vanishing scan", [&](std::ostringstream& out) {
    auto& ctx = slow_context(opt);
    p2::HSource hs;
    hs.table = &ctx.table;
    hs.quadrature.rel_tol = 1e-12;
    const std::vector<int> ells = {8, 10, 12, 14, 16, 18, 20, 22, 24};
    const auto scan =
        p2::nonvanishing_scan(4, siegel::SymMat2::identity(), siegel::SymMat2::identity(),
                              ctx.y0, ells, ctx.reps2, hs, ctx.b_fit, opt.workers);
    bool decreasing = true, c0_positive = true;
    for (std::size_t i = 0; i < scan.rows.size(); ++i) {
      if (i + 1 < scan.rows.size() &&
          !(scan.rows[i + 1].cneq0_abs < scan.rows[i].cneq0_abs))
        decreasing = false;
      if (!(scan.rows[i].c0 > 0.0)) c0_positive = false;
    }
    const bool crossover = scan.crossover_ell.has_value() && *scan.crossover_ell <= 24;
    out << "C!=0 strictly decreasing: " << (decreasing ? "yes" : "no")
        << ", C=0 positive: " << (c0_positive ? "yes" : "no") << ", crossover l = "
        << (scan.crossover_ell ? std::to_string(*scan.crossover_ell) : std::string("none"));
    return decreasing && c0_positive && crossover;
  });
}

// 12. Depth-probe contrast at (k, l, T, T') = (4, 16, I, I), height 2.
//     GRC-conditional evidence, not a proof: the truncated series ratios must
//     decrease monotonically for d <= 4 while the bare product stays above
//     ten times its probe noise floor.
inline CriterionResult criterion_12(const Options& opt) {
  return detail::timed(12, "depth-probe contrast", [&](std::ostringstream& out) {
    auto& ctx = slow_context(opt);
    p2::HSource hs;
    hs.table = &ctx.table;
    hs.quadrature.rel_tol = 1e-12;
    p2::P2Params p;
    p.k = 4;
    p.ell = 16;
    p.height = 2;
    const auto z0 = siegel::SiegelPoint::scaled_i(ctx.y0);
    const auto series =
        p2::lowering_depth_probe(p, {z0}, 4, ctx.reps2, hs, ctx.b_fit, 0.02, 1e-13, opt.workers);
    bool monotone = true;
    double prev = 1.0;
    for (double r : series.ratios) {
      if (!(r < prev)) monotone = false;
      prev = r;
    }
    const auto bare_f = p2::bare_product_field(p, z0);
    const auto bare = p2::depth_probe_field(bare_f, {z0}, 4, 0.004, 0.0);
    bool bare_above = true;
    for (double r : bare.ratios)
      if (!(r > 10.0 * bare.noise_floor)) bare_above = false;
    out << "series ratios";
    for (double r : series.ratios) out << " " << r;
    out << " (monotone: " << (monotone ? "yes" : "no") << "), bare ratios";
    for (double r : bare.ratios) out << " " << r;
    out << " vs 10x floor " << 10.0 * bare.noise_floor
        << " (above: " << (bare_above ? "yes" : "no") << ") [GRC-conditional evidence]";
    return monotone && bare_above;
  });
}

inline std::vector<CriterionResult> run_all(const Options& opt, bool quick = false) {
  std::vector<CriterionResult> results;
  results.push_back(criterion_1(opt));
  if (!quick) results.push_back(criterion_2(opt));
  if (!quick) results.push_back(criterion_3(opt));
  results.push_back(criterion_4(opt));
  if (!quick) results.push_back(criterion_5(opt));
  results.push_back(criterion_6(opt));
  if (quick) return results;
  results.push_back(criterion_7(opt));
  results.push_back(criterion_8(opt));
  results.push_back(criterion_9(opt));
  results.push_back(criterion_10(opt));
  results.push_back(criterion_11(opt));
  results.push_back(criterion_12(opt));
  return results;
}

} // namespace poincare::verify
