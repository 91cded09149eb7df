#pragma once

// Closed exact algebra for elliptic Fourier-series terms.
//
// A term is
//     c * pi^p * y^a * e^{2 pi i n x} * e^{-2 pi m y} * [ Gamma(s, 4 pi g y) ]
// with c a Gaussian rational, p, a, n, m, s integers and g >= 1. The algebra
// is closed under d/dx, d/dy, multiplication by y^{+-1} and term products
// (after expanding integer-s incomplete gamma factors), which is exactly what
// the weight-shifting operators need. Coefficients stay in Q(i) * pi^Z, so
// zero-testing is exact.

#include <algorithm>
#include <complex>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include <json.hpp>

#include "poincare/specfun.hpp"

namespace poincare::exact {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline Rational rational_pow(Rational base, long e) {
  if (e == 0) return Rational(1);
  bool inv = e < 0;
  unsigned long n = inv ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  Rational acc(1);
  while (n) {
    if (n & 1) acc *= base;
    base *= base;
    n >>= 1;
  }
  if (inv) acc = Rational(1) / acc;
  return acc;
}

// c = (re + i im) * pi^pi_pow. Canonical form: re == im == 0 forces pi_pow == 0.
struct Coefficient {
  Rational re{0};
  Rational im{0};
  int pi_pow = 0;

  Coefficient() = default;
  Coefficient(Rational r, Rational i, int p) : re(std::move(r)), im(std::move(i)), pi_pow(p) {
    canonicalize();
  }
  static Coefficient one() { return Coefficient(1, 0, 0); }
  static Coefficient integer(long v) { return Coefficient(v, 0, 0); }

  bool is_zero() const { return re == 0 && im == 0; }

  void canonicalize() {
    if (is_zero()) pi_pow = 0;
  }

  Coefficient operator-() const { return Coefficient(-re, -im, pi_pow); }

  Coefficient times(const Coefficient& o) const {
    return Coefficient(re * o.re - im * o.im, re * o.im + im * o.re, pi_pow + o.pi_pow);
  }
  Coefficient times_int(long v) const { return Coefficient(re * v, im * v, pi_pow); }
  Coefficient times_rational(const Rational& v) const {
    return Coefficient(re * v, im * v, pi_pow);
  }
  // multiply by (v * i) * pi
  Coefficient times_i_int_pi(long v) const {
    return Coefficient(-im * v, re * v, pi_pow + 1);
  }
  Coefficient times_i() const { return Coefficient(-im, re, pi_pow); }
  Coefficient times_pi_pow(const Rational& v, int dp) const {
    return Coefficient(re * v, im * v, pi_pow + dp);
  }
  Coefficient conj() const { return Coefficient(re, -im, pi_pow); }

  // addition is only defined for aligned pi powers; TermSum keeps them apart
  Coefficient plus_aligned(const Coefficient& o) const {
    if (!is_zero() && !o.is_zero() && pi_pow != o.pi_pow)
      throw std::logic_error("Coefficient: adding distinct pi powers");
    const int p = is_zero() ? o.pi_pow : pi_pow;
    return Coefficient(re + o.re, im + o.im, p);
  }

  std::complex<double> to_complex() const {
    const double r = static_cast<double>(re);
    const double i = static_cast<double>(im);
    const double pw = std::pow(M_PI, pi_pow);
    return {r * pw, i * pw};
  }
};

struct GammaFactor {
  int s = 0;  // Gamma(s, 4 pi g y)
  int g = 1;  // g >= 1
  friend auto operator<=>(const GammaFactor&, const GammaFactor&) = default;
};

struct ExactTerm {
  Coefficient coeff;
  int y_exp = 0;  // y^a
  int freq = 0;   // e^{2 pi i n x}
  int decay = 0;  // e^{-2 pi m y}
  std::optional<GammaFactor> gamma;

  // sort/merge key; pi_pow is part of it because sums across pi powers stay
  // multi-term
  auto key() const {
    const int hs = gamma ? 1 : 0;
    const int s = gamma ? gamma->s : 0;
    const int g = gamma ? gamma->g : 0;
    return std::tuple(y_exp, freq, decay, hs, s, g, coeff.pi_pow);
  }

  std::complex<double> evaluate(std::complex<double> tau) const {
    const double x = tau.real();
    const double y = tau.imag();
    std::complex<double> v = coeff.to_complex();
    v *= std::pow(y, y_exp);
    v *= std::exp(std::complex<double>(0.0, 2.0 * M_PI * freq * x));
    v *= std::exp(-2.0 * M_PI * decay * y);
    if (gamma)
      v *= specfun::upper_incomplete_gamma(static_cast<double>(gamma->s),
                                           4.0 * M_PI * gamma->g * y);
    return v;
  }
};

class TermSum {
 public:
  TermSum() = default;
  explicit TermSum(std::vector<ExactTerm> terms) : terms_(std::move(terms)) { normalize(); }
  static TermSum zero() { return TermSum(); }
  static TermSum from_term(ExactTerm t) { return TermSum(std::vector<ExactTerm>{std::move(t)}); }
  static TermSum one() {
    ExactTerm t;
    t.coeff = Coefficient::one();
    return from_term(t);
  }
  // c * y^a
  static TermSum y_power(int a, Coefficient c = Coefficient::one()) {
    ExactTerm t;
    t.coeff = std::move(c);
    t.y_exp = a;
    return from_term(t);
  }

  const std::vector<ExactTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  TermSum plus(const TermSum& o) const {
    std::vector<ExactTerm> all = terms_;
    all.insert(all.end(), o.terms_.begin(), o.terms_.end());
    return TermSum(std::move(all));
  }
  TermSum minus(const TermSum& o) const { return plus(o.negate()); }
  TermSum negate() const {
    auto copy = terms_;
    for (auto& t : copy) t.coeff = -t.coeff;
    return TermSum(std::move(copy));
  }
  TermSum scale(const Coefficient& c) const {
    auto copy = terms_;
    for (auto& t : copy) t.coeff = t.coeff.times(c);
    return TermSum(std::move(copy));
  }
  TermSum mul_y(int power) const {
    auto copy = terms_;
    for (auto& t : copy) t.y_exp += power;
    return TermSum(std::move(copy));
  }
  // conjugation: conjugate coefficients, flip the x-frequency; y-factors and
  // the (real) gamma factor are fixed
  TermSum conjugate() const {
    auto copy = terms_;
    for (auto& t : copy) {
      t.coeff = t.coeff.conj();
      t.freq = -t.freq;
    }
    return TermSum(std::move(copy));
  }

  TermSum dx() const {
    std::vector<ExactTerm> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
      if (t.freq == 0) continue;
      ExactTerm n = t;
      n.coeff = t.coeff.times_i_int_pi(2L * t.freq);
      out.push_back(std::move(n));
    }
    return TermSum(std::move(out));
  }

  TermSum dy() const {
    std::vector<ExactTerm> out;
    out.reserve(terms_.size() * 3);
    for (const auto& t : terms_) {
      if (t.y_exp != 0) {
        ExactTerm n = t;
        n.coeff = t.coeff.times_int(t.y_exp);
        n.y_exp -= 1;
        out.push_back(std::move(n));
      }
      if (t.decay != 0) {
        ExactTerm n = t;
        n.coeff = t.coeff.times_pi_pow(Rational(-2L * t.decay), 1);
        out.push_back(std::move(n));
      }
      if (t.gamma) {
        // d/dy Gamma(s, 4 pi g y) = -(4 pi g)^s y^{s-1} e^{-4 pi g y}
        const int s = t.gamma->s;
        const int g = t.gamma->g;
        ExactTerm n = t;
        n.gamma.reset();
        n.coeff = t.coeff.times_pi_pow(-rational_pow(Rational(4L * g), s), s);
        n.y_exp = t.y_exp + s - 1;
        n.decay = t.decay + 2 * g;
        out.push_back(std::move(n));
      }
    }
    return TermSum(std::move(out));
  }

  // Gamma(s, 4 pi g y) = (s-1)! e^{-4 pi g y} sum_{j<s} (4 pi g y)^j / j!  for s >= 1.
  // Terms whose gamma factor has s < 1 are left untouched.
  TermSum expand_gammas() const {
    std::vector<ExactTerm> out;
    for (const auto& t : terms_) {
      if (!t.gamma || t.gamma->s < 1) {
        out.push_back(t);
        continue;
      }
      const int s = t.gamma->s;
      const int g = t.gamma->g;
      Integer fact = 1;
      for (int j = 2; j < s; ++j) fact *= j;
      Integer jfact = 1;
      Integer cg = 1;  // (4g)^j
      for (int j = 0; j < s; ++j) {
        if (j > 0) {
          jfact *= j;
          cg *= 4 * g;
        }
        ExactTerm n = t;
        n.gamma.reset();
        n.coeff = t.coeff.times_pi_pow(Rational(fact * cg, jfact), j);
        n.y_exp = t.y_exp + j;
        n.decay = t.decay + 2 * g;
        out.push_back(std::move(n));
      }
    }
    return TermSum(std::move(out));
  }

  // Termwise product. Incomplete gamma factors with integer s >= 1 are
  // expanded first to keep the algebra closed; a pair of unexpandable gamma
  // factors leaves it and is reported.
  TermSum times(const TermSum& o) const {
    const TermSum a = needs_expansion_for_product(*this, o) ? expand_gammas() : *this;
    const TermSum b = needs_expansion_for_product(*this, o) ? o.expand_gammas() : o;
    std::vector<ExactTerm> out;
    out.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& s : a.terms_) {
      for (const auto& t : b.terms_) {
        ExactTerm n;
        n.coeff = s.coeff.times(t.coeff);
        n.y_exp = s.y_exp + t.y_exp;
        n.freq = s.freq + t.freq;
        n.decay = s.decay + t.decay;
        if (s.gamma && t.gamma)
          throw std::domain_error(
              "TermSum: product of two unexpandable incomplete gamma factors leaves the algebra");
        n.gamma = s.gamma ? s.gamma : t.gamma;
        out.push_back(std::move(n));
      }
    }
    return TermSum(std::move(out));
  }

  // Exact zero test. Mixed expanded/unexpanded presentations of the same
  // function must cancel, so the test normalizes a fully expanded copy.
  bool is_zero() const {
    if (terms_.empty()) return true;
    return expand_gammas().empty();
  }

  std::complex<double> evaluate(std::complex<double> tau) const {
    if (!(tau.imag() > 0.0)) throw std::domain_error("TermSum::evaluate: Im tau must be > 0");
    std::complex<double> acc{0.0, 0.0};
    for (const auto& t : terms_) acc += t.evaluate(tau);
    return acc;
  }

  // y-exponent range of the fully expanded form (gamma factors are bounded
  // near y = 0 and do not contribute)
  std::pair<int, int> y_exp_range_expanded() const {
    const TermSum e = expand_gammas();
    int lo = 0, hi = 0;
    bool first = true;
    for (const auto& t : e.terms_) {
      if (first) {
        lo = hi = t.y_exp;
        first = false;
      } else {
        lo = std::min(lo, t.y_exp);
        hi = std::max(hi, t.y_exp);
      }
    }
    return {lo, hi};
  }

  nlohmann::json to_json() const {
    auto num = [](const Rational& r) {
      nlohmann::json pair = nlohmann::json::array();
      const Integer n = boost::multiprecision::numerator(r);
      const Integer d = boost::multiprecision::denominator(r);
      auto emit = [&pair](const Integer& v) {
        if (v >= std::numeric_limits<std::int64_t>::min() &&
            v <= std::numeric_limits<std::int64_t>::max())
          pair.push_back(static_cast<std::int64_t>(v));
        else
          pair.push_back(v.str());
      };
      emit(n);
      emit(d);
      return pair;
    };
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : terms_) {
      nlohmann::json j;
      j["coeff"] = {{"re", num(t.coeff.re)}, {"im", num(t.coeff.im)}, {"pi_pow", t.coeff.pi_pow}};
      j["y_exp"] = t.y_exp;
      j["freq"] = t.freq;
      j["decay"] = t.decay;
      j["gamma"] = t.gamma ? nlohmann::json(std::array<int, 2>{t.gamma->s, t.gamma->g})
                           : nlohmann::json(nullptr);
      arr.push_back(std::move(j));
    }
    return arr;
  }

  static TermSum from_json(const nlohmann::json& arr) {
    auto num = [](const nlohmann::json& pair) {
      auto part = [](const nlohmann::json& v) {
        return v.is_string() ? Integer(v.get<std::string>()) : Integer(v.get<std::int64_t>());
      };
      return Rational(part(pair.at(0)), part(pair.at(1)));
    };
    std::vector<ExactTerm> terms;
    for (const auto& j : arr) {
      ExactTerm t;
      t.coeff = Coefficient(num(j.at("coeff").at("re")), num(j.at("coeff").at("im")),
                            j.at("coeff").at("pi_pow").get<int>());
      t.y_exp = j.at("y_exp").get<int>();
      t.freq = j.at("freq").get<int>();
      t.decay = j.at("decay").get<int>();
      if (!j.at("gamma").is_null())
        t.gamma = GammaFactor{j.at("gamma").at(0).get<int>(), j.at("gamma").at(1).get<int>()};
      terms.push_back(std::move(t));
    }
    return TermSum(std::move(terms));
  }

 private:
  static bool needs_expansion_for_product(const TermSum& a, const TermSum& b) {
    auto has_gamma = [](const TermSum& s) {
      return std::any_of(s.terms_.begin(), s.terms_.end(),
                         [](const ExactTerm& t) { return t.gamma.has_value(); });
    };
    return has_gamma(a) || has_gamma(b);
  }

  void normalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const ExactTerm& a, const ExactTerm& b) { return a.key() < b.key(); });
    std::vector<ExactTerm> merged;
    for (auto& t : terms_) {
      if (t.gamma && t.gamma->g < 1)
        throw std::invalid_argument("ExactTerm: gamma factor requires g >= 1");
      if (!merged.empty() && merged.back().key() == t.key())
        merged.back().coeff = merged.back().coeff.plus_aligned(t.coeff);
      else
        merged.push_back(std::move(t));
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const ExactTerm& t) { return t.coeff.is_zero(); }),
                 merged.end());
    terms_ = std::move(merged);
  }

  std::vector<ExactTerm> terms_;
};

// The pair (f, k): expression plus the weight grading it carries.
struct WeightedFunction {
  TermSum expr;
  int weight = 0;
};

// phi_{k[d]}(n; tau) = y^{-d} e^{2 pi i n tau}, n > 0
inline WeightedFunction make_phi(int k, int d, int n) {
  if (n <= 0) throw std::domain_error("make_phi: requires n > 0");
  if (d < 0) throw std::domain_error("make_phi: requires d >= 0");
  ExactTerm t;
  t.coeff = Coefficient::one();
  t.y_exp = -d;
  t.freq = n;
  t.decay = n;
  return {TermSum::from_term(t), k};
}

// psi~_k(n; tau) = Gamma(1-k, 4 pi |n| y) e^{2 pi i n tau}, k <= 0, n < 0
inline WeightedFunction make_psi_tilde(int k, int n) {
  if (k > 0) throw std::domain_error("make_psi_tilde: requires k <= 0");
  if (n >= 0) throw std::domain_error("make_psi_tilde: requires n < 0");
  ExactTerm t;
  t.coeff = Coefficient::one();
  t.freq = n;
  t.decay = n;
  t.gamma = GammaFactor{1 - k, -n};
  return {TermSum::from_term(t), k};
}

// phi~_k(n; tau) = y^{-k} e^{-2 pi i n conj(tau)}, k < 0, n < 0
//               = y^{-k} e^{-2 pi i n x} e^{-2 pi n y}
inline WeightedFunction make_phi_tilde(int k, int n) {
  if (k >= 0) throw std::domain_error("make_phi_tilde: requires k < 0");
  if (n >= 0) throw std::domain_error("make_phi_tilde: requires n < 0");
  ExactTerm t;
  t.coeff = Coefficient::one();
  t.y_exp = -k;
  t.freq = -n;
  t.decay = n;
  return {TermSum::from_term(t), k};
}

// psi_k(n; tau) = y^{-k} Gamma(1+k, 4 pi n y) e^{2 pi i n conj(tau)}, k >= 0, n > 0
inline WeightedFunction make_psi(int k, int n) {
  if (k < 0) throw std::domain_error("make_psi: requires k >= 0");
  if (n <= 0) throw std::domain_error("make_psi: requires n > 0");
  ExactTerm t;
  t.coeff = Coefficient::one();
  t.y_exp = -k;
  t.freq = n;
  t.decay = -n;
  t.gamma = GammaFactor{1 + k, n};
  return {TermSum::from_term(t), k};
}

// the expression y^{-k} e^{-2 pi i n conj(tau)} without the sign constraints,
// used as the target of lowering identities (the -n there is positive)
inline TermSum phi_tilde_expr(int k, int n) {
  ExactTerm t;
  t.coeff = Coefficient::one();
  t.y_exp = -k;
  t.freq = -n;
  t.decay = n;
  return TermSum::from_term(t);
}

// L_k = -2i y^2 d/dconj(tau) = -i y^2 d/dx + y^2 d/dy; weight k-2
inline WeightedFunction lower(const WeightedFunction& f) {
  const TermSum lx = f.expr.dx().scale(Coefficient(0, -1, 0)).mul_y(2);
  const TermSum ly = f.expr.dy().mul_y(2);
  return {lx.plus(ly), f.weight - 2};
}

// R_k = 2i d/dtau + k y^{-1} = i d/dx + d/dy + k y^{-1}; weight k+2
inline WeightedFunction raise(const WeightedFunction& f) {
  const TermSum rx = f.expr.dx().scale(Coefficient(0, 1, 0));
  const TermSum ry = f.expr.dy();
  const TermSum rk = f.expr.scale(Coefficient::integer(f.weight)).mul_y(-1);
  return {rx.plus(ry).plus(rk), f.weight + 2};
}

// xi_k f = 2i y^k conj(d f / dconj(tau)) = y^{k-2} conj(L_k f); weight 2-k
inline WeightedFunction xi(const WeightedFunction& f) {
  const TermSum lf = lower(f).expr;
  return {lf.conjugate().mul_y(f.weight - 2), 2 - f.weight};
}

// tensor product (f, k) x (g, l) = (f g, k + l)
inline WeightedFunction multiply(const WeightedFunction& f, const WeightedFunction& g) {
  return {f.expr.times(g.expr), f.weight + g.weight};
}

// smallest d <= d_max with L^{d+1} f = 0 exactly
inline std::optional<int> almost_holomorphic_depth(const WeightedFunction& f, int d_max) {
  if (d_max < 0) throw std::domain_error("almost_holomorphic_depth: requires d_max >= 0");
  WeightedFunction cur = f;
  for (int d = 0; d <= d_max; ++d) {
    cur = lower(cur);
    if (cur.expr.is_zero()) return d;
  }
  return std::nullopt;
}

inline std::complex<double> evaluate(const WeightedFunction& f, std::complex<double> tau) {
  return f.expr.evaluate(tau);
}

} // namespace poincare::exact
