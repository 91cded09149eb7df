#pragma once

// Truncated evaluation of the degree-2 Poincare series built from
// Psi_k(T;.) Phi_l(T';.), with per-stratum breakdown, the y0 certificate
// search, the non-vanishing scan over l, and the lowering depth probe.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "poincare/parallel.hpp"
#include "poincare/siegel.hpp"
#include "poincare/sp2.hpp"

namespace poincare::p2 {

using siegel::cplx;
using siegel::Mat2c;
using siegel::SiegelPoint;
using siegel::SymMat2;
using quad::QuadratureSpec;

struct P2Params {
  int k = 4;
  int ell = 16;
  SymMat2 T = SymMat2::identity();
  SymMat2 Tp = SymMat2::identity();
  long height = 2;
  QuadratureSpec quadrature{};

  void validate() const {
    if (k <= 0 || k % 2 != 0 || ell <= 0 || ell % 2 != 0)
      throw std::domain_error("P2Params: k and l must be positive even integers");
    if (!T.positive_definite() || !Tp.positive_definite() || !T.half_integral() ||
        !Tp.half_integral())
      throw std::domain_error("P2Params: T, T' must be positive definite half-integral");
    if (height < 1) throw std::domain_error("P2Params: height >= 1");
  }
  // printed convergence condition l + k - 2b >= 6, with the empirically
  // fitted b; violation is advisory, not fatal
  bool below_convergence_threshold(double b_fit) const {
    return ell + k - 2.0 * b_fit < 6.0;
  }
};

// ---------------------------------------------------------------------------
// Chebyshev surrogate for h_{k+1,1}(I; Y) as a symmetric function of the
// eigenvalues of Y, fitted in log-eigenvalue coordinates. Smooth in Y, cheap
// to evaluate, and safe to difference; used by the depth probe and scans.

class HSurrogate {
 public:
  HSurrogate() = default;

  static HSurrogate build(int k, double lam_lo, double lam_hi, int degree = 64,
                          unsigned workers = 1) {
    HSurrogate s;
    s.k_ = k;
    s.lo_ = std::log(lam_lo);
    s.hi_ = std::log(lam_hi);
    s.n_ = degree;
    const int n = degree;
    std::vector<double> grid(n + 1);
    for (int i = 0; i <= n; ++i)
      grid[i] = s.lo_ + (s.hi_ - s.lo_) * 0.5 * (1.0 + std::cos(M_PI * i / n));
    std::vector<double> vals((n + 1) * (n + 1));
    // upper triangle only; the function is symmetric
    std::vector<std::pair<int, int>> jobs;
    for (int i = 0; i <= n; ++i)
      for (int j = i; j <= n; ++j) jobs.push_back({i, j});
    QuadratureSpec q;
    q.rel_tol = 1e-12;
    par::chunked_parallel(jobs.size(), 16, workers, [&](std::size_t, std::size_t b, std::size_t e) {
      for (std::size_t idx = b; idx < e; ++idx) {
        const auto [i, j] = jobs[idx];
        const double l1 = std::exp(grid[i]);
        const double l2 = std::exp(grid[j]);
        const double v =
            siegel::h_integral(k + 1.0, 1.0, SymMat2::identity(), SymMat2::diag(l1, l2), q).value;
        vals[i * (n + 1) + j] = std::log(v);
        vals[j * (n + 1) + i] = std::log(v);
      }
    });
    // coefficients by the cosine transform on the Lobatto grid
    s.coef_.assign((n + 1) * (n + 1), 0.0);
    std::vector<double> tmat((n + 1) * (n + 1));
    for (int kk = 0; kk <= n; ++kk)
      for (int j = 0; j <= n; ++j) {
        const double w = (j == 0 || j == n) ? 0.5 : 1.0;
        tmat[kk * (n + 1) + j] = w * std::cos(M_PI * kk * j / n);
      }
    const double scale = 2.0 / n;
    std::vector<double> half((n + 1) * (n + 1), 0.0);
    for (int kk = 0; kk <= n; ++kk)
      for (int j = 0; j <= n; ++j) {
        double acc = 0.0;
        for (int m = 0; m <= n; ++m) acc += tmat[kk * (n + 1) + m] * vals[m * (n + 1) + j];
        half[kk * (n + 1) + j] = acc;
      }
    for (int kk = 0; kk <= n; ++kk)
      for (int ll = 0; ll <= n; ++ll) {
        double acc = 0.0;
        for (int m = 0; m <= n; ++m) acc += half[kk * (n + 1) + m] * tmat[ll * (n + 1) + m];
        double c = scale * scale * acc;
        if (kk == 0) c *= 0.5;
        if (ll == 0) c *= 0.5;
        s.coef_[kk * (n + 1) + ll] = c;
      }
    return s;
  }

  bool valid() const { return n_ > 0; }
  int degree() const { return n_; }
  double lam_lo() const { return std::exp(lo_); }
  double lam_hi() const { return std::exp(hi_); }

  double eval_eigen(double l1, double l2) const {
    const double s = std::log(l1);
    const double t = std::log(l2);
    if (s < lo_ - 1e-9 || s > hi_ + 1e-9 || t < lo_ - 1e-9 || t > hi_ + 1e-9)
      throw std::domain_error("HSurrogate: eigenvalue outside fitted domain");
    const int n = n_;
    std::vector<double> Tx(n + 1), Ty(n + 1);
    cheb_basis(2.0 * (s - lo_) / (hi_ - lo_) - 1.0, Tx);
    cheb_basis(2.0 * (t - lo_) / (hi_ - lo_) - 1.0, Ty);
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
      double row = 0.0;
      const double* c = &coef_[i * (n + 1)];
      for (int j = 0; j <= n; ++j) row += c[j] * Ty[j];
      acc += Tx[i] * row;
    }
    return std::exp(acc);
  }

  double eval(const SymMat2& Y) const {
    const auto ev = Y.eigenvalues();
    return eval_eigen(ev[0], ev[1]);
  }

 private:
  static void cheb_basis(double x, std::vector<double>& T) {
    x = std::min(1.0, std::max(-1.0, x));
    T[0] = 1.0;
    if (T.size() > 1) T[1] = x;
    for (std::size_t i = 2; i < T.size(); ++i) T[i] = 2.0 * x * T[i - 1] - T[i - 2];
  }

  int k_ = 0, n_ = 0;
  double lo_ = 0.0, hi_ = 0.0;
  std::vector<double> coef_;
};

// ---------------------------------------------------------------------------

// how eval_p2 obtains h values
struct HSource {
  const HSurrogate* table = nullptr;  // used when T = I and the point is in range
  mutable std::map<std::pair<long long, long long>, double> memo;
  mutable std::mutex memo_mutex;
  QuadratureSpec quadrature{};

  double value(int k, const SymMat2& T, const SymMat2& Y) const {
    const bool t_is_identity = std::abs(T.m11 - 1) < 1e-14 && std::abs(T.m12) < 1e-14 &&
                               std::abs(T.m22 - 1) < 1e-14;
    if (table && table->valid() && t_is_identity) {
      const auto ev = Y.eigenvalues();
      if (ev[0] > table->lam_lo() && ev[1] < table->lam_hi())
        return table->eval_eigen(ev[0], ev[1]);
    }
    if (t_is_identity) {
      // h(I; Y) depends only on the eigenvalues of Y
      const auto ev = Y.eigenvalues();
      const auto key = std::make_pair(static_cast<long long>(std::llround(ev[0] * 1e12)),
                                      static_cast<long long>(std::llround(ev[1] * 1e12)));
      {
        std::lock_guard<std::mutex> lock(memo_mutex);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
      }
      const double v =
          siegel::h_integral(k + 1.0, 1.0, SymMat2::identity(), SymMat2::diag(ev[0], ev[1]),
                             quadrature)
              .value;
      std::lock_guard<std::mutex> lock(memo_mutex);
      memo.emplace(key, v);
      return v;
    }
    return siegel::h_integral(k + 1.0, 1.0, T, Y, quadrature).value;
  }
};

struct P2Value {
  cplx total{0, 0};
  cplx c0_subtotal{0, 0};
  cplx cneq0_subtotal{0, 0};
  double tail_estimate = 0.0;
  std::size_t n_cosets = 0;
  bool convergence_advisory = false;
};

struct CosetSeed {
  cplx seed;      // (Psi_k(T;.) Phi_l(T';.)) (M . Z), without the automorphy factor
  cplx det_czd;   // det(CZ + D)
  bool c_zero;    // C = 0 stratum flag
  double majorant_scale;  // (1 + det(Y')^{-b}) e^{-pi tr((T+T') Y')}
};

// per-coset data at a fixed Z; everything l-dependent is left out so scans
// over l reuse it
inline std::vector<CosetSeed> coset_seeds(const P2Params& p,
                                          const std::vector<sp2::SymplecticRep>& reps,
                                          const SiegelPoint& Z, const HSource& hs,
                                          double b_fit = 0.0, unsigned workers = 1) {
  std::vector<CosetSeed> seeds(reps.size());
  const SymMat2 Tt = p.T + p.Tp;
  par::chunked_parallel(reps.size(), 256, workers, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const auto& M = reps[i];
      const auto mz = siegel::moebius(M, Z);
      const SiegelPoint W = siegel::to_point(mz.image);
      const double h = hs.value(p.k, p.T, W.Y);
      const double dTY = p.T.det() * W.Y.det();
      const double ph_psi = 2.0 * M_PI * siegel::tr_product(p.T, W.X);
      const cplx psi_v = dTY * h * std::exp(cplx(0.0, ph_psi));
      const cplx phi_v = std::exp(cplx(-2.0 * M_PI * siegel::tr_product(p.Tp, W.Y),
                                       2.0 * M_PI * siegel::tr_product(p.Tp, W.X)));
      CosetSeed s;
      s.seed = psi_v * phi_v;
      s.det_czd = mz.czd.det();
      s.c_zero = sp2::is_zero(M.C);
      s.majorant_scale = (1.0 + std::pow(W.Y.det(), -b_fit)) *
                         std::exp(-M_PI * siegel::tr_product(Tt, W.Y));
      seeds[i] = s;
    }
  });
  return seeds;
}

inline P2Value accumulate(const P2Params& p, const std::vector<sp2::SymplecticRep>& reps,
                          const std::vector<CosetSeed>& seeds, long height, double b_fit) {
  P2Value out;
  out.n_cosets = seeds.size();
  const int w = p.k + p.ell;
  double c0r = 0, c0c = 0, c0i = 0, c0ci = 0;
  double c1r = 0, c1c = 0, c1i = 0, c1ci = 0;
  auto add = [](double& s, double& comp, double v) {
    const double t = s + v;
    if (std::abs(s) >= std::abs(v))
      comp += (s - t) + v;
    else
      comp += (v - t) + s;
    s = t;
  };
  double shell_majorant = 0.0;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const auto& s = seeds[i];
    const cplx v = s.seed * siegel::pow_int(s.det_czd, -w);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::runtime_error("eval_p2: non-finite summand");
    if (s.c_zero) {
      add(c0r, c0c, v.real());
      add(c0i, c0ci, v.imag());
    } else {
      add(c1r, c1c, v.real());
      add(c1i, c1ci, v.imag());
    }
    const long hgt = std::max(sp2::max_abs(reps[i].C), sp2::max_abs(reps[i].D));
    if (hgt == height)
      shell_majorant += s.majorant_scale * std::pow(std::abs(s.det_czd), -w);
  }
  out.c0_subtotal = {c0r + c0c, c0i + c0ci};
  out.cneq0_subtotal = {c1r + c1c, c1i + c1ci};
  out.total = out.c0_subtotal + out.cneq0_subtotal;
  // Crude integral-comparison continuation of the outermost shell majorant;
  // reported, never applied.
  const double decay = std::max(1.0, static_cast<double>(w) - 2.0 * b_fit - 4.0);
  out.tail_estimate = shell_majorant * static_cast<double>(height) / decay;
  return out;
}

inline P2Value eval_p2(const P2Params& p, const SiegelPoint& Z, const HSource& hs,
                       double b_fit = 0.0, unsigned workers = 1,
                       const std::vector<sp2::SymplecticRep>* reps_in = nullptr) {
  p.validate();
  std::vector<sp2::SymplecticRep> reps_local;
  const std::vector<sp2::SymplecticRep>* reps = reps_in;
  if (!reps) {
    reps_local = sp2::enumerate_delta_cosets(p.height);
    reps = &reps_local;
  }
  const auto seeds = coset_seeds(p, *reps, Z, hs, b_fit, workers);
  P2Value v = accumulate(p, *reps, seeds, p.height, b_fit);
  v.convergence_advisory = b_fit > 0.0 && p.below_convergence_threshold(b_fit);
  return v;
}

// ---------------------------------------------------------------------------
// KST certificate: smallest grid y0 with |det(C i y0 I + D)| > 1 on every
// enumerated C != 0 representative. A finite certificate, not a proof.

struct KstResult {
  double y0 = 0.0;
  double margin = 0.0;           // min |det| - 1 at the accepted y0
  sp2::SymplecticRep worst{};    // attaining the minimum
  bool found = false;
  std::vector<std::pair<double, double>> rejected;  // (y, min |det| - 1) for failing grid values
};

inline KstResult kst_y0_search(const std::vector<sp2::SymplecticRep>& reps,
                               const std::vector<double>& y_grid) {
  KstResult out;
  for (double y : y_grid) {
    double min_abs = std::numeric_limits<double>::infinity();
    const sp2::SymplecticRep* worst = nullptr;
    for (const auto& M : reps) {
      if (sp2::is_zero(M.C)) continue;
      const Mat2c czd =
          siegel::block_c(M.C) * Mat2c{{cplx(0, y), 0, 0, cplx(0, y)}} + siegel::block_c(M.D);
      const double a = std::abs(czd.det());
      if (a < min_abs) {
        min_abs = a;
        worst = &M;
      }
    }
    if (min_abs > 1.0) {
      out.y0 = y;
      out.margin = min_abs - 1.0;
      out.worst = *worst;
      out.found = true;
      return out;
    }
    out.rejected.push_back({y, min_abs - 1.0});
    if (worst) out.worst = *worst;
  }
  return out;
}

// ---------------------------------------------------------------------------
// non-vanishing scan over l at Z = i y0 I

struct ScanRow {
  int ell = 0;
  double c0 = 0.0;           // C = 0 subtotal (real, l-independent)
  double cneq0_abs = 0.0;    // |C != 0 subtotal|
  double total = 0.0;        // real part of the full partial sum
  bool positive = false;
  bool advisory = false;
};

struct ScanResult {
  std::vector<ScanRow> rows;
  std::optional<int> crossover_ell;  // least scanned l from which on total > 0
};

inline ScanResult nonvanishing_scan(int k, const SymMat2& T, const SymMat2& Tp, double y0,
                                    const std::vector<int>& ells,
                                    const std::vector<sp2::SymplecticRep>& reps,
                                    const HSource& hs, double b_fit = 0.0, unsigned workers = 1) {
  P2Params base;
  base.k = k;
  base.T = T;
  base.Tp = Tp;
  base.ell = ells.empty() ? 8 : ells.front();
  base.validate();
  const SiegelPoint Z = SiegelPoint::scaled_i(y0);
  const auto seeds = coset_seeds(base, reps, Z, hs, b_fit, workers);
  long height = 0;
  for (const auto& M : reps)
    height = std::max(height, std::max(sp2::max_abs(M.C), sp2::max_abs(M.D)));
  ScanResult out;
  for (int ell : ells) {
    P2Params p = base;
    p.ell = ell;
    const P2Value v = accumulate(p, reps, seeds, height, b_fit);
    ScanRow row;
    row.ell = ell;
    row.c0 = v.c0_subtotal.real();
    row.cneq0_abs = std::abs(v.cneq0_subtotal);
    row.total = v.total.real();
    row.positive = row.total > 0.0;
    row.advisory = b_fit > 0.0 && p.below_convergence_threshold(b_fit);
    out.rows.push_back(row);
  }
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    bool all_pos = true;
    for (std::size_t j = i; j < out.rows.size(); ++j) all_pos = all_pos && out.rows[j].positive;
    if (all_pos) {
      out.crossover_ell = out.rows[i].ell;
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// lowering depth probe
//
// The d-th tensor power of L = Y t(Y dZbar) is realized by nested central
// differences on a coordinate lattice Z0 + step * (integer offsets); values
// are memoized per level so overlapping stencils are shared. Norms are
// Frobenius over all 4^d tensor entries.

struct DepthProbeResult {
  std::vector<double> ratios;  // d = 1 .. d_max: ||L^d F|| / ||F||
  double base_norm = 0.0;
  double tail_rel = 0.0;       // relative truncation tail at the base point
  double diff_err_est = 0.0;   // step-halving estimate on the first ratio
  double noise_floor = 0.0;    // max(tail_rel, 10 * diff_err_est)
  std::string assumption = "GRC-conditional";
};

namespace detail {

using Offset = std::array<int, 6>;

inline std::uint64_t offset_key(const Offset& o) {
  std::uint64_t k = 0;
  for (int i = 0; i < 6; ++i) k = (k << 10) | static_cast<std::uint64_t>(o[i] + 512);
  return k;
}

inline SiegelPoint offset_point(const SiegelPoint& Z0, const Offset& o, double step) {
  SymMat2 X = Z0.X, Y = Z0.Y;
  X.m11 += o[0] * step;
  X.m12 += o[1] * step;
  X.m22 += o[2] * step;
  Y.m11 += o[3] * step;
  Y.m12 += o[4] * step;
  Y.m22 += o[5] * step;
  return SiegelPoint(X, Y);
}

class TensorLowering {
 public:
  TensorLowering(std::function<cplx(const SiegelPoint&)> f, SiegelPoint z0, double step)
      : f_(std::move(f)), z0_(std::move(z0)), step_(step), memo_(1) {}

  // level-d tensor at an offset, entries indexed (i,j) x previous
  const std::vector<cplx>& get(int level, const Offset& o) {
    while (memo_.size() <= static_cast<std::size_t>(level)) memo_.emplace_back();
    auto& m = memo_[static_cast<std::size_t>(level)];
    const auto key = offset_key(o);
    if (auto it = m.find(key); it != m.end()) return it->second;
    std::vector<cplx> val;
    if (level == 0) {
      val.push_back(f_(offset_point(z0_, o, step_)));
    } else {
      const std::size_t prev_size = std::size_t(1) << (2 * (level - 1));
      val.assign(prev_size * 4, cplx(0, 0));
      const SymMat2 Ys = offset_point(z0_, o, step_).Y;
      const Mat2c Y = Mat2c::from_sym(Ys);
      // fourth-order five-point first differences; the dx and i dy parts of
      // dZbar cancel strongly on near-holomorphic fields, so second-order
      // stencils would lose most of their accuracy to that cancellation
      std::array<std::vector<cplx>, 6> dp1, dm1, dp2, dm2;
      for (int c = 0; c < 6; ++c) {
        Offset op = o, om = o, op2 = o, om2 = o;
        op[c] += 1;
        om[c] -= 1;
        op2[c] += 2;
        om2[c] -= 2;
        dp1[c] = get(level - 1, op);
        dm1[c] = get(level - 1, om);
        dp2[c] = get(level - 1, op2);
        dm2[c] = get(level - 1, om2);
      }
      for (std::size_t rest = 0; rest < prev_size; ++rest) {
        // symmetrized dZbar of the previous-level entry
        auto diff = [&](int c) {
          return (8.0 * (dp1[c][rest] - dm1[c][rest]) - (dp2[c][rest] - dm2[c][rest])) /
                 (12.0 * step_);
        };
        const cplx d11 = 0.5 * (diff(0) + cplx(0, 1) * diff(3));
        const cplx d12 = 0.25 * (diff(1) + cplx(0, 1) * diff(4));
        const cplx d22 = 0.5 * (diff(2) + cplx(0, 1) * diff(5));
        const Mat2c A{{d11, d12, d12, d22}};
        const Mat2c YAY = Y * A * Y;
        for (int ij = 0; ij < 4; ++ij)
          val[static_cast<std::size_t>(ij) * prev_size + rest] = YAY.m[ij];
      }
    }
    return m.emplace(key, std::move(val)).first->second;
  }

 private:
  std::function<cplx(const SiegelPoint&)> f_;
  SiegelPoint z0_;
  double step_;
  std::vector<std::unordered_map<std::uint64_t, std::vector<cplx>>> memo_;
};

inline double frobenius(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

} // namespace detail

// Smooth realization of the bare product Psi_k(T;.) Phi_l(T';.) for
// differencing: h is evaluated on a quadrature grid frozen at Z0, so the
// field has no adaptive-refinement jitter.
inline std::function<cplx(const SiegelPoint&)> bare_product_field(const P2Params& p,
                                                                  const SiegelPoint& Z0) {
  const auto probe = siegel::h_integral(p.k + 1.0, 1.0, p.T, Z0.Y, p.quadrature);
  const double lam_min = Z0.Y.eigenvalues()[0];
  const double umax = std::sqrt(46.0 / (2.0 * M_PI * 0.7 * lam_min));
  const int nu = probe.nodes_u, nth = probe.nodes_theta;
  const P2Params pc = p;
  return [pc, nu, nth, umax](const SiegelPoint& W) -> cplx {
    const double h =
        siegel::h_integral(pc.k + 1.0, 1.0, pc.T, W.Y, pc.quadrature, nu, nth, umax).value;
    const cplx psi_v = pc.T.det() * W.Y.det() * h *
                       std::exp(cplx(0.0, 2.0 * M_PI * siegel::tr_product(pc.T, W.X)));
    const cplx phi_v = std::exp(cplx(-2.0 * M_PI * siegel::tr_product(pc.Tp, W.Y),
                                     2.0 * M_PI * siegel::tr_product(pc.Tp, W.X)));
    return psi_v * phi_v;
  };
}

// eigenvalue range of Im(M . Z) over the coset list, padded for stencils
inline std::pair<double, double> eigen_range_over_cosets(
    const std::vector<sp2::SymplecticRep>& reps, const SiegelPoint& Z, double pad = 1.6) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& M : reps) {
    const auto mz = siegel::moebius(M, Z);
    const auto ev = mz.image.imag_sym(1e-7).eigenvalues();
    lo = std::min(lo, ev[0]);
    hi = std::max(hi, ev[1]);
  }
  return {lo / pad, hi * pad};
}

// probe a scalar field (either a bare product seed or a truncated series)
inline DepthProbeResult depth_probe_field(const std::function<cplx(const SiegelPoint&)>& f,
                                          const std::vector<SiegelPoint>& z_grid, int d_max,
                                          double step, double tail_rel = 0.0) {
  if (d_max < 1) throw std::domain_error("depth_probe: d_max >= 1");
  DepthProbeResult out;
  out.tail_rel = tail_rel;
  std::vector<double> norms(static_cast<std::size_t>(d_max) + 1, 0.0);
  double r1_half = 0.0, r1_full = 0.0;
  for (const auto& z0 : z_grid) {
    detail::TensorLowering eng(f, z0, step);
    const detail::Offset center{};
    for (int d = 0; d <= d_max; ++d)
      norms[static_cast<std::size_t>(d)] += detail::frobenius(eng.get(d, center));
    detail::TensorLowering eng_half(f, z0, step * 0.5);
    const double b0 = detail::frobenius(eng_half.get(0, center));
    const double b1 = detail::frobenius(eng_half.get(1, center));
    r1_half += b1 / b0;
    r1_full += detail::frobenius(eng.get(1, center)) / detail::frobenius(eng.get(0, center));
  }
  const double n = static_cast<double>(z_grid.size());
  out.base_norm = norms[0] / n;
  for (int d = 1; d <= d_max; ++d)
    out.ratios.push_back(norms[static_cast<std::size_t>(d)] / norms[0]);
  out.diff_err_est = std::abs(r1_full - r1_half) / n;
  out.noise_floor = std::max(out.tail_rel, 10.0 * out.diff_err_est);
  return out;
}

// probe the truncated series itself. Cosets whose majorant is below
// prune_rel * (current scale) at the base point are dropped once, uniformly
// over the whole stencil, so the probed function stays smooth; the discarded
// mass is part of the reported truncation term.
inline DepthProbeResult lowering_depth_probe(const P2Params& p,
                                             const std::vector<SiegelPoint>& z_grid, int d_max,
                                             const std::vector<sp2::SymplecticRep>& reps,
                                             const HSource& hs, double b_fit,
                                             double step = 0.02, double prune_rel = 1e-13,
                                             unsigned workers = 1) {
  p.validate();
  if (z_grid.empty()) throw std::domain_error("depth_probe: empty Z grid");
  // prune once at the first grid point, relative to the largest term; the
  // dropped mass is reported as part of the truncation tail
  const auto seeds = coset_seeds(p, reps, z_grid.front(), hs, b_fit, workers);
  const int w = p.k + p.ell;
  double max_term = 0.0;
  std::vector<double> term_bound(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    term_bound[i] = std::abs(seeds[i].seed) * std::pow(std::abs(seeds[i].det_czd), -w);
    max_term = std::max(max_term, term_bound[i]);
  }
  std::vector<sp2::SymplecticRep> kept;
  double dropped = 0.0;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (term_bound[i] >= prune_rel * max_term)
      kept.push_back(reps[i]);
    else
      dropped += term_bound[i];
  }
  const P2Value base = eval_p2(p, z_grid.front(), hs, b_fit, workers, &kept);
  const double tail_rel =
      (base.tail_estimate + dropped) / std::max(1e-300, std::abs(base.total));
  auto field = [&](const SiegelPoint& Z) -> cplx {
    return eval_p2(p, Z, hs, b_fit, 1, &kept).total;
  };
  return depth_probe_field(field, z_grid, d_max, step, tail_rel);
}

} // namespace poincare::p2
