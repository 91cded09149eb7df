#pragma once

// Integral symplectic 4x4 matrices and enumeration of Delta \ Sp2(Z) coset
// representatives by height of the bottom block row (C D). A coset is
// determined by its coprime symmetric pair (C, D); representatives are
// completed constructively via Smith normal form and canonicalized by
// Hermite reduction of (A, B) modulo {(SC, SD) : S symmetric integral}.

#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace poincare::sp2 {

using i64 = std::int64_t;
using Mat2 = std::array<std::array<i64, 2>, 2>;

inline Mat2 mat2(i64 a, i64 b, i64 c, i64 d) { return {{{a, b}, {c, d}}}; }
inline Mat2 operator*(const Mat2& x, const Mat2& y) {
  return mat2(x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1],
              x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]);
}
inline Mat2 operator+(const Mat2& x, const Mat2& y) {
  return mat2(x[0][0] + y[0][0], x[0][1] + y[0][1], x[1][0] + y[1][0], x[1][1] + y[1][1]);
}
inline Mat2 operator-(const Mat2& x, const Mat2& y) {
  return mat2(x[0][0] - y[0][0], x[0][1] - y[0][1], x[1][0] - y[1][0], x[1][1] - y[1][1]);
}
inline Mat2 transpose(const Mat2& x) { return mat2(x[0][0], x[1][0], x[0][1], x[1][1]); }
inline i64 det(const Mat2& x) { return x[0][0] * x[1][1] - x[0][1] * x[1][0]; }
inline bool is_symmetric(const Mat2& x) { return x[0][1] == x[1][0]; }
inline bool is_zero(const Mat2& x) {
  return x[0][0] == 0 && x[0][1] == 0 && x[1][0] == 0 && x[1][1] == 0;
}
inline i64 max_abs(const Mat2& x) {
  i64 m = 0;
  for (const auto& row : x)
    for (i64 v : row) m = std::max(m, std::abs(v));
  return m;
}

struct SymplecticRep {
  Mat2 A{}, B{}, C{}, D{};

  // tM J M = J  <=>  A tB, C tD symmetric and A tD - B tC = I
  bool is_symplectic() const {
    const Mat2 AtB = A * transpose(B);
    const Mat2 CtD = C * transpose(D);
    const Mat2 AtD_BtC = A * transpose(D) - B * transpose(C);
    return is_symmetric(AtB) && is_symmetric(CtD) && AtD_BtC == mat2(1, 0, 0, 1);
  }

  // exact integer inverse: M^{-1} = (tD -tB; -tC tA)
  SymplecticRep inverse() const {
    const Mat2 tB = transpose(B);
    const Mat2 tC = transpose(C);
    SymplecticRep r;
    r.A = transpose(D);
    r.B = mat2(-tB[0][0], -tB[0][1], -tB[1][0], -tB[1][1]);
    r.C = mat2(-tC[0][0], -tC[0][1], -tC[1][0], -tC[1][1]);
    r.D = transpose(A);
    return r;
  }

  SymplecticRep operator*(const SymplecticRep& o) const {
    SymplecticRep r;
    r.A = A * o.A + B * o.C;
    r.B = A * o.B + B * o.D;
    r.C = C * o.A + D * o.C;
    r.D = C * o.B + D * o.D;
    return r;
  }

  friend bool operator==(const SymplecticRep&, const SymplecticRep&) = default;
};

inline SymplecticRep sp2_identity() {
  SymplecticRep r;
  r.A = mat2(1, 0, 0, 1);
  r.D = mat2(1, 0, 0, 1);
  return r;
}

// M1 ~ M2 in Delta \ Gamma  <=>  M1 M2^{-1} = (I S; 0 I) with S symmetric
inline bool delta_equivalent(const SymplecticRep& m1, const SymplecticRep& m2) {
  const SymplecticRep q = m1 * m2.inverse();
  return q.A == mat2(1, 0, 0, 1) && q.D == mat2(1, 0, 0, 1) && is_zero(q.C) && is_symmetric(q.B);
}

namespace detail {

// Smith normal form of a 2x4 integer matrix with row/column transforms:
// P * M * Q = (diag(d1, d2) | 0). Entries stay small for the heights used here.
struct Snf2x4 {
  std::array<std::array<i64, 4>, 2> s{};
  std::array<std::array<i64, 2>, 2> p{};
  std::array<std::array<i64, 4>, 4> q{};
};

inline Snf2x4 snf_2x4(const std::array<std::array<i64, 4>, 2>& m_in) {
  Snf2x4 r;
  r.s = m_in;
  r.p = {{{1, 0}, {0, 1}}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r.q[i][j] = (i == j) ? 1 : 0;
  auto& s = r.s;
  auto& p = r.p;
  auto& q = r.q;

  auto swap_rows = [&](int i, int j) {
    std::swap(s[i], s[j]);
    std::swap(p[i], p[j]);
  };
  auto add_row = [&](int i, int j, i64 t) {  // row i += t * row j
    for (int c = 0; c < 4; ++c) s[i][c] += t * s[j][c];
    for (int c = 0; c < 2; ++c) p[i][c] += t * p[j][c];
  };
  auto swap_cols = [&](int i, int j) {
    for (int rr = 0; rr < 2; ++rr) std::swap(s[rr][i], s[rr][j]);
    for (int rr = 0; rr < 4; ++rr) std::swap(q[rr][i], q[rr][j]);
  };
  auto add_col = [&](int i, int j, i64 t) {  // col i += t * col j
    for (int rr = 0; rr < 2; ++rr) s[rr][i] += t * s[rr][j];
    for (int rr = 0; rr < 4; ++rr) q[rr][i] += t * q[rr][j];
  };

  for (int k = 0; k < 2; ++k) {
    for (;;) {
      int pi = -1, pj = -1;
      i64 best = 0;
      for (int i = k; i < 2; ++i)
        for (int j = k; j < 4; ++j)
          if (s[i][j] != 0 && (best == 0 || std::abs(s[i][j]) < best)) {
            best = std::abs(s[i][j]);
            pi = i;
            pj = j;
          }
      if (pi < 0) break;  // zero block
      if (pi != k) swap_rows(k, pi);
      if (pj != k) swap_cols(k, pj);
      bool clean = true;
      for (int i = k + 1; i < 2; ++i)
        if (s[i][k] != 0) {
          add_row(i, k, -(s[i][k] / s[k][k]));
          if (s[i][k] != 0) clean = false;
        }
      for (int j = k + 1; j < 4; ++j)
        if (s[k][j] != 0) {
          add_col(j, k, -(s[k][j] / s[k][k]));
          if (s[k][j] != 0) clean = false;
        }
      if (clean) break;
    }
    if (s[k][k] < 0) {
      for (int c = 0; c < 4; ++c) s[k][c] = -s[k][c];
      for (int c = 0; c < 2; ++c) p[k][c] = -p[k][c];
    }
  }
  // divisibility d1 | d2 is irrelevant for the unit test we need (both 1)
  return r;
}

} // namespace detail

// (C D) is a bottom block row of an integral symplectic matrix iff C tD is
// symmetric and the 2x4 matrix (C D) has both elementary divisors 1.
inline bool is_coprime_symmetric_pair(const Mat2& C, const Mat2& D) {
  if (!is_symmetric(C * transpose(D))) return false;
  const std::array<std::array<i64, 4>, 2> m = {
      {{C[0][0], C[0][1], D[0][0], D[0][1]}, {C[1][0], C[1][1], D[1][0], D[1][1]}}};
  i64 g1 = 0;
  for (const auto& row : m)
    for (i64 v : row) g1 = std::gcd(g1, v);
  if (g1 != 1) return false;
  i64 g2 = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      g2 = std::gcd(g2, m[0][i] * m[1][j] - m[0][j] * m[1][i]);
  return g2 == 1;
}

// Complete a coprime symmetric pair to a symplectic matrix:
// solve (C D) J tF0 = I via SNF, then correct F0 by a symmetric shear so the
// top row block is isotropic.
inline std::optional<SymplecticRep> complete_pair(const Mat2& C, const Mat2& D) {
  if (!is_coprime_symmetric_pair(C, D)) return std::nullopt;
  // R J, with J = (0 -I; I 0) acting on row vectors: (c1 c2 d1 d2) J = (d1 d2 -c1 -c2)
  const std::array<std::array<i64, 4>, 2> rj = {
      {{D[0][0], D[0][1], -C[0][0], -C[0][1]}, {D[1][0], D[1][1], -C[1][0], -C[1][1]}}};
  const auto snf = detail::snf_2x4(rj);
  if (std::abs(snf.s[0][0]) != 1 || std::abs(snf.s[1][1]) != 1) return std::nullopt;
  // rj = P^{-1} (I 0) Q^{-1}; G = Q[:, :2] * P solves rj * G = I
  std::array<std::array<i64, 2>, 4> g{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 2; ++j)
      g[i][j] = snf.q[i][0] * snf.p[0][j] + snf.q[i][1] * snf.p[1][j];
  // F0 = tG (2x4), rows (A0 | B0)
  Mat2 A0 = mat2(g[0][0], g[1][0], g[0][1], g[1][1]);
  Mat2 B0 = mat2(g[2][0], g[3][0], g[2][1], g[3][1]);
  // pairing t = (F0 J tF0)_{12}; F = F0 + (0 -t; 0 0) (C D) restores isotropy
  const i64 pairing = B0[0][0] * A0[1][0] + B0[0][1] * A0[1][1] - A0[0][0] * B0[1][0] -
                      A0[0][1] * B0[1][1];
  const Mat2 Lam = mat2(0, -pairing, 0, 0);
  SymplecticRep M;
  M.A = A0 + Lam * C;
  M.B = B0 + Lam * D;
  M.C = C;
  M.D = D;
  if (!M.is_symplectic()) return std::nullopt;
  return M;
}

namespace detail {

// Hermite-style reduction of (A, B) modulo the rank-3 lattice {(SC, SD)}.
struct ABLattice {
  std::array<std::array<i64, 8>, 3> rows{};
  std::vector<std::pair<int, int>> pivots;  // (row, col)
  int nrows = 0;
};

inline ABLattice ab_lattice(const Mat2& C, const Mat2& D) {
  ABLattice L;
  const Mat2 Es[3] = {mat2(1, 0, 0, 0), mat2(0, 0, 0, 1), mat2(0, 1, 1, 0)};
  for (int e = 0; e < 3; ++e) {
    const Mat2 sc = Es[e] * C;
    const Mat2 sd = Es[e] * D;
    L.rows[e] = {sc[0][0], sc[0][1], sc[1][0], sc[1][1], sd[0][0], sd[0][1], sd[1][0], sd[1][1]};
  }
  // row HNF with gcd pivoting
  int r = 0;
  for (int c = 0; c < 8 && r < 3; ++c) {
    int piv = -1;
    for (int i = r; i < 3; ++i)
      if (L.rows[i][c] != 0) { piv = i; break; }
    if (piv < 0) continue;
    std::swap(L.rows[r], L.rows[piv]);
    for (int i = r + 1; i < 3; ++i) {
      while (L.rows[i][c] != 0) {
        const i64 q = L.rows[r][c] / L.rows[i][c];
        for (int j = 0; j < 8; ++j) L.rows[r][j] -= q * L.rows[i][j];
        std::swap(L.rows[r], L.rows[i]);
      }
    }
    if (L.rows[r][c] < 0)
      for (int j = 0; j < 8; ++j) L.rows[r][j] = -L.rows[r][j];
    L.pivots.push_back({r, c});
    ++r;
  }
  L.nrows = r;
  return L;
}

} // namespace detail

// Canonical representative of the coset: reduce vec(A, B) modulo {(SC, SD)}.
inline SymplecticRep canonicalize(SymplecticRep M) {
  const auto L = detail::ab_lattice(M.C, M.D);
  std::array<i64, 8> v = {M.A[0][0], M.A[0][1], M.A[1][0], M.A[1][1],
                          M.B[0][0], M.B[0][1], M.B[1][0], M.B[1][1]};
  for (const auto& [ri, ci] : L.pivots) {
    const i64 p = L.rows[ri][ci];
    i64 q = v[ci] / p;
    if (v[ci] % p < 0) q -= 1;  // floor division
    for (int j = 0; j < 8; ++j) v[j] -= q * L.rows[ri][j];
  }
  M.A = mat2(v[0], v[1], v[2], v[3]);
  M.B = mat2(v[4], v[5], v[6], v[7]);
  return M;
}

// One representative per Delta-coset with bottom block entries bounded by
// height, ordered lexicographically by (C, D).
inline std::vector<SymplecticRep> enumerate_delta_cosets(i64 height) {
  if (height < 1) throw std::domain_error("enumerate_delta_cosets: height >= 1");
  std::vector<SymplecticRep> out;
  Mat2 C{}, D{};
  for (i64 c11 = -height; c11 <= height; ++c11)
    for (i64 c12 = -height; c12 <= height; ++c12)
      for (i64 c21 = -height; c21 <= height; ++c21)
        for (i64 c22 = -height; c22 <= height; ++c22) {
          C = mat2(c11, c12, c21, c22);
          for (i64 d11 = -height; d11 <= height; ++d11)
            for (i64 d12 = -height; d12 <= height; ++d12)
              for (i64 d21 = -height; d21 <= height; ++d21)
                for (i64 d22 = -height; d22 <= height; ++d22) {
                  D = mat2(d11, d12, d21, d22);
                  // cheap symmetry filter before the SNF test
                  if (C[0][0] * D[1][0] + C[0][1] * D[1][1] !=
                      C[1][0] * D[0][0] + C[1][1] * D[0][1])
                    continue;
                  auto M = complete_pair(C, D);
                  if (!M) continue;
                  out.push_back(canonicalize(*M));
                }
        }
  return out;
}

inline nlohmann::json rep_to_json(const SymplecticRep& M) {
  auto block = [](const Mat2& m) {
    return nlohmann::json::array({{m[0][0], m[0][1]}, {m[1][0], m[1][1]}});
  };
  return nlohmann::json{{"A", block(M.A)}, {"B", block(M.B)}, {"C", block(M.C)}, {"D", block(M.D)}};
}

} // namespace poincare::sp2
