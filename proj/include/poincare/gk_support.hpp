#pragma once

// Weight-support combinatorics: graded C[L,R]-module supports for SL2 with
// wall metadata, U(2) K-types with Clebsch-Gordan decomposition, and the
// wall-propagation rule for tensor products of walled supports.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace poincare::gk {

enum class Sl2Kind { phi_kd, psi, phi_tilde, psi_tilde, custom };
enum class WallDir { left, right, up, down };

inline const char* to_string(WallDir d) {
  switch (d) {
    case WallDir::left: return "left";
    case WallDir::right: return "right";
    case WallDir::up: return "up";
    case WallDir::down: return "down";
  }
  return "?";
}

struct Sl2Wall {
  int position = 0;  // even weight
  WallDir direction = WallDir::right;
};

struct Sl2Support {
  Sl2Kind kind = Sl2Kind::custom;
  int w_min = 0, w_max = 0;          // even window bounds
  std::set<int> occupied;            // even weights inside the window
  std::optional<Sl2Wall> solid_wall;
  std::optional<int> dashed_wall;    // inert principal-series marker

  void validate() const {
    for (int w : occupied) {
      if (w % 2 != 0) throw std::invalid_argument("Sl2Support: occupied weights must be even");
      if (w < w_min || w > w_max) throw std::invalid_argument("Sl2Support: weight outside window");
    }
    if (solid_wall && solid_wall->direction == WallDir::right)
      for (int w : occupied)
        if (w < solid_wall->position)
          throw std::invalid_argument("Sl2Support: weight below a right wall");
  }

  std::optional<int> min_occupied() const {
    return occupied.empty() ? std::nullopt : std::optional<int>(*occupied.begin());
  }
  std::optional<int> max_occupied() const {
    return occupied.empty() ? std::nullopt : std::optional<int>(*occupied.rbegin());
  }
};

// Supports of the four canonical term families, per their module diagrams:
//   phi_{k[d]} : weights >= k-2d, solid right wall k-2d, dashed 2d-k
//   psi_k      : weights >= -k,   solid right wall k+2,  dashed -k-2
//   phi~_k     : weights <= k,    solid left wall k,     dashed -k
//   psi~_k     : weights <= -k,   solid left wall k-2,   dashed -k+2
inline Sl2Support canonical_sl2_support(Sl2Kind kind, int k, int d = 0, int window_radius = 20) {
  if (k % 2 != 0) throw std::invalid_argument("canonical_sl2_support: k must be even");
  Sl2Support s;
  s.kind = kind;
  int anchor = 0;
  bool fill_up = true;
  switch (kind) {
    case Sl2Kind::phi_kd:
      if (d < 0) throw std::invalid_argument("canonical_sl2_support: d >= 0");
      anchor = k - 2 * d;
      fill_up = true;
      s.solid_wall = Sl2Wall{anchor, WallDir::right};
      s.dashed_wall = 2 * d - k;
      break;
    case Sl2Kind::psi:
      if (k < 0) throw std::invalid_argument("canonical_sl2_support: psi requires k >= 0");
      anchor = -k;
      fill_up = true;
      s.solid_wall = Sl2Wall{k + 2, WallDir::right};
      s.dashed_wall = -k - 2;
      break;
    case Sl2Kind::phi_tilde:
      if (k >= 0) throw std::invalid_argument("canonical_sl2_support: phi~ requires k < 0");
      anchor = k;
      fill_up = false;
      s.solid_wall = Sl2Wall{k, WallDir::left};
      s.dashed_wall = -k;
      break;
    case Sl2Kind::psi_tilde:
      if (k > 0) throw std::invalid_argument("canonical_sl2_support: psi~ requires k <= 0");
      anchor = -k;
      fill_up = false;
      s.solid_wall = Sl2Wall{k - 2, WallDir::left};
      s.dashed_wall = -k + 2;
      break;
    case Sl2Kind::custom:
      throw std::invalid_argument("canonical_sl2_support: custom has no canonical shape");
  }
  s.w_min = anchor - 2 * window_radius;
  s.w_max = anchor + 2 * window_radius;
  if (fill_up) {
    s.w_min = std::min(s.w_min, anchor);
    for (int w = anchor; w <= s.w_max; w += 2) s.occupied.insert(w);
  } else {
    s.w_max = std::max(s.w_max, anchor);
    for (int w = anchor; w >= s.w_min; w -= 2) s.occupied.insert(w);
  }
  s.validate();
  return s;
}

// Minkowski sum of the occupied sets, clipped to the combined window. Right
// wall thresholds add when both factors carry right walls (same for left).
inline Sl2Support tensor_sl2(const Sl2Support& s1, const Sl2Support& s2) {
  Sl2Support out;
  out.kind = Sl2Kind::custom;
  out.w_min = s1.w_min + s2.w_min;
  out.w_max = s1.w_max + s2.w_max;
  for (int w1 : s1.occupied)
    for (int w2 : s2.occupied) {
      const int w = w1 + w2;
      if (w >= out.w_min && w <= out.w_max) out.occupied.insert(w);
    }
  if (s1.solid_wall && s2.solid_wall && s1.solid_wall->direction == s2.solid_wall->direction) {
    out.solid_wall =
        Sl2Wall{s1.solid_wall->position + s2.solid_wall->position, s1.solid_wall->direction};
  }
  out.validate();
  return out;
}

// Lowest-weight flag: a right wall bounding the occupied set from below.
// This is the almost-holomorphy indicator for the module.
inline bool has_lowest_weight(const Sl2Support& s) {
  if (s.occupied.empty()) return true;
  return s.solid_wall && s.solid_wall->direction == WallDir::right &&
         *s.occupied.begin() >= s.solid_wall->position;
}

inline std::string render_sl2_diagram(const Sl2Support& s, std::optional<int> encircled = {}) {
  std::ostringstream row, marks, labels;
  for (int w = s.w_min; w <= s.w_max; w += 2) {
    const bool occ = s.occupied.count(w) > 0;
    const bool enc = encircled && *encircled == w;
    row << (enc ? (occ ? "(*)" : "( )") : (occ ? " * " : " . "));
    std::string mark = "   ";
    if (s.solid_wall && s.solid_wall->position == w)
      mark = s.solid_wall->direction == WallDir::right ? "|> " : "<| ";
    else if (s.dashed_wall && *s.dashed_wall == w)
      mark = " : ";
    marks << mark;
  }
  std::ostringstream out;
  out << "weights " << s.w_min << " .. " << s.w_max << " (step 2)\n"
      << row.str() << "\n"
      << marks.str() << "\n";
  if (s.solid_wall)
    out << "solid wall at " << s.solid_wall->position << " (" << to_string(s.solid_wall->direction)
        << ")";
  if (s.dashed_wall) out << (s.solid_wall ? ", " : "") << "dashed wall at " << *s.dashed_wall;
  out << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// U(2) K-types

struct KType {
  int a = 0, b = 0;  // highest weight, a >= b; scalar iff a == b
  KType() = default;
  KType(int a_, int b_) : a(a_), b(b_) {
    if (a < b) throw std::invalid_argument("KType: requires a >= b");
  }
  bool scalar() const { return a == b; }
  friend auto operator<=>(const KType&, const KType&) = default;
};

// (a,b) x (a',b') = sum over j of (a + a' - j, b + b' + j), 0 <= j <= min(a-b, a'-b').
// Multiplicity-free.
inline std::vector<KType> clebsch_gordan(const KType& t1, const KType& t2) {
  const int jmax = std::min(t1.a - t1.b, t2.a - t2.b);
  std::vector<KType> out;
  out.reserve(static_cast<std::size_t>(jmax) + 1);
  for (int j = 0; j <= jmax; ++j) out.emplace_back(t1.a + t2.a - j, t1.b + t2.b + j);
  return out;
}

struct KWall {
  WallDir direction = WallDir::right;
  int threshold = 0;
};

struct KTypeSupport {
  std::map<KType, int> occupied;  // K-type -> multiplicity
  std::vector<KWall> walls;
  int window_lo = -64, window_hi = 64;  // clip bounds on a and b

  void insert(const KType& t, int mult = 1) {
    if (t.a < window_lo || t.a > window_hi || t.b < window_lo || t.b > window_hi) return;
    occupied[t] += mult;
  }

  bool satisfies_wall(const KWall& w) const {
    for (const auto& [t, m] : occupied) {
      (void)m;
      switch (w.direction) {
        case WallDir::right: if (t.a < w.threshold) return false; break;
        case WallDir::left:  if (t.a > w.threshold) return false; break;
        case WallDir::up:    if (t.b < w.threshold) return false; break;
        case WallDir::down:  if (t.b > w.threshold) return false; break;
      }
    }
    return true;
  }

  void validate() const {
    for (const auto& w : walls)
      if (!satisfies_wall(w)) throw std::invalid_argument("KTypeSupport: wall violated");
  }
};

// Tensor product of walled supports. Occupancy is the multiplicity-weighted
// union of pairwise Clebsch-Gordan decompositions. Wall propagation:
//   right wall a0 (x) up wall b0'   ->  right wall a0 + b0'
//   left  wall a0 (x) down wall b0' ->  down  wall a0 + b0'
inline KTypeSupport tensor_ktype_support(const KTypeSupport& s1, const KTypeSupport& s2) {
  KTypeSupport out;
  out.window_lo = s1.window_lo + s2.window_lo;
  out.window_hi = s1.window_hi + s2.window_hi;
  for (const auto& [t1, m1] : s1.occupied)
    for (const auto& [t2, m2] : s2.occupied)
      for (const auto& t : clebsch_gordan(t1, t2)) out.insert(t, m1 * m2);
  for (const auto& w1 : s1.walls)
    for (const auto& w2 : s2.walls) {
      if (w1.direction == WallDir::right && w2.direction == WallDir::up)
        out.walls.push_back({WallDir::right, w1.threshold + w2.threshold});
      if (w1.direction == WallDir::left && w2.direction == WallDir::down)
        out.walls.push_back({WallDir::down, w1.threshold + w2.threshold});
    }
  out.validate();
  return out;
}

inline bool contains_scalar_ktype(const KTypeSupport& s) {
  for (const auto& [t, m] : s.occupied) {
    (void)m;
    if (t.scalar()) return true;
  }
  return false;
}

inline nlohmann::json ktype_support_to_json(const KTypeSupport& s) {
  nlohmann::json occ = nlohmann::json::array();
  for (const auto& [t, m] : s.occupied) occ.push_back({{"a", t.a}, {"b", t.b}, {"mult", m}});
  nlohmann::json walls = nlohmann::json::array();
  for (const auto& w : s.walls)
    walls.push_back({{"direction", to_string(w.direction)}, {"threshold", w.threshold}});
  return {{"occupied", occ}, {"walls", walls}};
}

inline nlohmann::json sl2_support_to_json(const Sl2Support& s) {
  nlohmann::json j;
  j["occupied"] = std::vector<int>(s.occupied.begin(), s.occupied.end());
  j["window"] = {s.w_min, s.w_max};
  if (s.solid_wall)
    j["solid_wall"] = {{"position", s.solid_wall->position},
                       {"direction", to_string(s.solid_wall->direction)}};
  else
    j["solid_wall"] = nullptr;
  j["dashed_wall"] = s.dashed_wall ? nlohmann::json(*s.dashed_wall) : nlohmann::json(nullptr);
  return j;
}

// Half-grid rendering of a K-type support (rows: b descending; cols: a).
inline std::string render_ktype_grid(const KTypeSupport& s, int lo, int hi) {
  std::ostringstream out;
  for (int b = hi; b >= lo; --b) {
    for (int a = lo; a <= hi; ++a) {
      if (a < b) { out << "  "; continue; }
      out << (s.occupied.count(KType(a, b)) ? "* " : ". ");
    }
    out << "   b=" << b << "\n";
  }
  return out.str();
}

} // namespace poincare::gk
