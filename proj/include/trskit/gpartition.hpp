#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"

namespace trs {

// Group given by its multiplication table, validated exhaustively on use.
struct finite_group {
  std::size_t order = 1;
  std::size_t unit = 0;
  std::vector<std::size_t> cayley;

  std::size_t mul(std::size_t a, std::size_t b) const { return cayley[a * order + b]; }
  auto operator<=>(const finite_group&) const = default;
};

inline void group_validate(const finite_group& g) {
  expect(g.order > 0, "group needs a positive order");
  expect(g.unit < g.order, "unit element outside the group");
  expect(g.cayley.size() == g.order * g.order, "cayley table must be order x order");
  for (std::size_t v : g.cayley) expect(v < g.order, "cayley entry outside the group");
  for (std::size_t a = 0; a < g.order; ++a)
    expect(g.mul(g.unit, a) == a && g.mul(a, g.unit) == a, "unit laws fail");
  for (std::size_t a = 0; a < g.order; ++a)
    for (std::size_t b = 0; b < g.order; ++b)
      for (std::size_t c = 0; c < g.order; ++c)
        expect(g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c)), "multiplication not associative");
  for (std::size_t a = 0; a < g.order; ++a) {
    bool inv = false;
    for (std::size_t b = 0; b < g.order && !inv; ++b)
      inv = g.mul(a, b) == g.unit && g.mul(b, a) == g.unit;
    expect(inv, "an element has no inverse");
  }
}

inline finite_group trivial_group() { return finite_group{1, 0, {0}}; }

inline finite_group cyclic_group(std::size_t n) {
  expect(n > 0, "cyclic group needs a positive order");
  finite_group g{n, 0, std::vector<std::size_t>(n * n, 0)};
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) g.cayley[a * n + b] = (a + b) % n;
  return g;
}

inline std::size_t group_inv(const finite_group& g, std::size_t a) {
  for (std::size_t b = 0; b < g.order; ++b)
    if (g.mul(a, b) == g.unit && g.mul(b, a) == g.unit) return b;
  throw domain_error("an element has no inverse");
}

// Partial partition word: position i holds either the hole or a pair
// (block, group element), packed as 0 and 1 + block*order + elem.
struct gpart_word {
  finite_group g;
  std::size_t k = 0;
  std::vector<std::size_t> vals;

  std::size_t n() const { return vals.size(); }
  bool is_nu(std::size_t i) const { return vals[i] == 0; }
  std::size_t block(std::size_t i) const { return (vals[i] - 1) / g.order; }
  std::size_t elem(std::size_t i) const { return (vals[i] - 1) % g.order; }
  auto operator<=>(const gpart_word&) const = default;
};

inline std::size_t gpart_pack(std::size_t block, std::size_t elem, const finite_group& g) {
  return 1 + block * g.order + elem;
}

// First position carrying the block; the word must be checked first.
inline std::size_t gpart_anchor(const gpart_word& w, std::size_t j) {
  for (std::size_t i = 0; i < w.n(); ++i)
    if (!w.is_nu(i) && w.block(i) == j) return i;
  throw domain_error("block unattained");
}

// 0 ok; 1 some block missing or its first occurrence not carrying the unit;
// 2 block first occurrences not strictly increasing. Holes may precede the
// first anchor; only the two defining conditions constrain them.
inline int gpart_check(const gpart_word& w) {
  group_validate(w.g);
  for (std::size_t v : w.vals)
    expect(v <= w.k * w.g.order, "value outside the block range");
  std::vector<std::optional<std::size_t>> first(w.k);
  int bad = 0;
  for (std::size_t i = 0; i < w.n(); ++i) {
    if (w.is_nu(i)) continue;
    std::size_t j = w.block(i);
    if (!first[j]) {
      first[j] = i;
      if (w.elem(i) != w.g.unit && bad == 0) bad = 1;
    }
  }
  for (std::size_t j = 0; j < w.k; ++j)
    if (!first[j]) return 1;
  if (bad != 0) return bad;
  for (std::size_t j = 0; j + 1 < w.k; ++j)
    if (*first[j] >= *first[j + 1]) return 2;
  return 0;
}

inline void gpart_validate(const gpart_word& w) {
  int c = gpart_check(w);
  if (c != 0)
    throw domain_error("invalid partial partition word (condition " + std::to_string(c) + ")");
}

// Two-sided identity: position i anchors block i with the unit.
inline gpart_word gpart_identity(const finite_group& g, std::size_t n) {
  gpart_word w{g, n, {}};
  for (std::size_t i = 0; i < n; ++i) w.vals.push_back(gpart_pack(i, g.unit, g));
  return w;
}

// Composite: holes propagate, the inner word relabels blocks and the group
// elements multiply (outer on the left).
inline gpart_word gpart_compose(const gpart_word& outer, const gpart_word& inner) {
  expect(outer.g == inner.g, "compose needs a common group");
  expect(inner.n() == outer.k, "compose: inner domain must equal outer block range");
  gpart_word r{outer.g, inner.k, {}};
  r.vals.reserve(outer.n());
  for (std::size_t i = 0; i < outer.n(); ++i) {
    if (outer.is_nu(i)) {
      r.vals.push_back(0);
      continue;
    }
    std::size_t j = outer.block(i);
    if (inner.is_nu(j)) {
      r.vals.push_back(0);
      continue;
    }
    r.vals.push_back(gpart_pack(inner.block(j), outer.g.mul(outer.elem(i), inner.elem(j)), r.g));
  }
  gpart_validate(r);
  return r;
}

// r_n: the prefix before the anchor of block n. At n == k the word is its
// own restriction; r_0 is the empty word even when holes precede the first
// anchor.
inline gpart_word gpart_restrict(std::size_t n, const gpart_word& w) {
  if (n > w.k) throw budget_error("restriction depth exceeds the truncation");
  if (n == w.k) return w;
  if (n == 0) return gpart_word{w.g, 0, {}};
  std::size_t cut = gpart_anchor(w, n);
  gpart_word r{w.g, n, std::vector<std::size_t>(w.vals.begin(),
                                                w.vals.begin() + static_cast<std::ptrdiff_t>(cut))};
  gpart_validate(r);
  return r;
}

inline bool gpart_is_restriction(const gpart_word& a, const gpart_word& b) {
  if (a.g != b.g || a.k > b.k) return false;
  return a == gpart_restrict(a.k, b);
}

// All words with the given domain and block extents, in ascending packed
// value order. Values are built left to right: a position may hold the hole,
// any already-anchored block with any element, or anchor the next block with
// the unit.
inline std::vector<gpart_word> gpart_enumerate(const finite_group& g, std::size_t n,
                                               std::size_t k, node_counter* nc = nullptr) {
  group_validate(g);
  std::vector<gpart_word> out;
  gpart_word w{g, k, {}};
  auto rec = [&](auto&& self, std::size_t placed) -> void {
    if (nc) nc->tick();
    if (w.vals.size() == n) {
      if (placed == k) out.push_back(w);
      return;
    }
    if (k - placed > n - w.vals.size()) return;
    w.vals.push_back(0);
    self(self, placed);
    w.vals.pop_back();
    for (std::size_t j = 0; j < placed; ++j)
      for (std::size_t b = 0; b < g.order; ++b) {
        w.vals.push_back(gpart_pack(j, b, g));
        self(self, placed);
        w.vals.pop_back();
      }
    if (placed < k) {
      w.vals.push_back(gpart_pack(placed, g.unit, g));
      self(self, placed + 1);
      w.vals.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

// a is below b exactly when the domains agree and the cellwise-forced inner
// witness solves a = b composed with it: each position of b forces the
// witness value of its block, so the witness is unique when it exists.
inline bool gpart_le_fin(const gpart_word& a, const gpart_word& b) {
  gpart_validate(a);
  gpart_validate(b);
  if (a.g != b.g || a.n() != b.n()) return false;
  std::vector<std::optional<std::size_t>> c(b.k);
  for (std::size_t i = 0; i < b.n(); ++i) {
    if (b.is_nu(i)) {
      if (!a.is_nu(i)) return false;
      continue;
    }
    std::size_t j = b.block(i);
    std::size_t forced =
        a.is_nu(i) ? 0
                   : gpart_pack(a.block(i), b.g.mul(group_inv(b.g, b.elem(i)), a.elem(i)), b.g);
    if (c[j] && *c[j] != forced) return false;
    c[j] = forced;
  }
  gpart_word w{b.g, a.k, {}};
  for (std::size_t j = 0; j < b.k; ++j) {
    expect(c[j].has_value(), "every block of a valid word is attained");
    w.vals.push_back(*c[j]);
  }
  return gpart_check(w) == 0;
}

// Depth of a inside b: the unique n with a = r_n(b) . c for some c, if any.
// Anchors strictly increase, so restriction lengths are distinct and the
// domain of a pins the only candidate level.
inline std::optional<std::size_t> gpart_depth(const gpart_word& a, const gpart_word& b) {
  if (a.g != b.g) return std::nullopt;
  if (a.n() == 0 && a.k == 0) return 0;
  for (std::size_t n = 1; n <= b.k; ++n) {
    const gpart_word base = gpart_restrict(n, b);
    if (base.n() != a.n()) continue;
    if (gpart_le_fin(a, base)) return n;
  }
  return std::nullopt;
}

// Projected point: blocks past the projection extent collapse to (0, unit)
// and their anchor positions survive as the cut chain, closed by the extent.
struct gpart_point {
  gpart_word w;
  std::vector<std::size_t> cuts;

  std::size_t proj_k() const { return w.k; }
  std::size_t depth() const { return w.k + cuts.size() - 1; }
  auto operator<=>(const gpart_point&) const = default;
};

// Validity: the word is a valid element, the cut chain is strictly
// increasing past the last kept anchor and ends at the extent, and every
// interior cut position carries (0, unit) so the cut can anchor its
// collapsed block.
inline bool gpart_point_ok(const gpart_point& p) {
  const gpart_word& w = p.w;
  if (w.k < 1) return false;
  try {
    if (gpart_check(w) != 0) return false;
  } catch (const domain_error&) {
    return false;
  }
  if (p.cuts.empty() || p.cuts.back() != w.n()) return false;
  for (std::size_t j = 0; j + 1 < p.cuts.size(); ++j)
    if (p.cuts[j] >= p.cuts[j + 1]) return false;
  if (p.cuts.front() <= gpart_anchor(w, w.k - 1)) return false;
  for (std::size_t j = 0; j + 1 < p.cuts.size(); ++j)
    if (w.vals[p.cuts[j]] != gpart_pack(0, w.g.unit, w.g)) return false;
  return true;
}

inline gpart_point gpart_project(std::size_t k, const gpart_word& w) {
  expect(k >= 1, "projection extent must be at least 1");
  if (k > w.k) throw domain_error("projection extent exceeds the block range");
  gpart_point p;
  p.w = w;
  p.w.k = k;
  for (std::size_t j = k; j < w.k; ++j) p.cuts.push_back(gpart_anchor(w, j));
  for (std::size_t i = 0; i < w.n(); ++i)
    if (!w.is_nu(i) && w.block(i) >= k) p.w.vals[i] = gpart_pack(0, w.g.unit, w.g);
  p.cuts.push_back(w.n());
  return p;
}

inline gpart_point gpart_as_point(const gpart_word& w) { return gpart_point{w, {w.n()}}; }

// s_approx at a level of the stored chain: prefix at the cut, chain
// shortened to match.
inline gpart_point gpart_truncate_point(const gpart_point& p, std::size_t level) {
  if (level < p.proj_k()) throw domain_error("level below the projection extent");
  if (level > p.depth()) throw budget_error("level beyond the stored truncation");
  const std::size_t idx = level - p.proj_k();
  gpart_point r;
  r.w = gpart_word{p.w.g, p.w.k,
                   std::vector<std::size_t>(p.w.vals.begin(),
                                            p.w.vals.begin() +
                                                static_cast<std::ptrdiff_t>(p.cuts[idx]))};
  r.cuts.assign(p.cuts.begin(), p.cuts.begin() + static_cast<std::ptrdiff_t>(idx) + 1);
  return r;
}

// Composite of an element-shaped outer point with an inner point: values
// compose by the three-case rule, interior cuts of the inner point land at
// the outer anchors of their cut blocks, outer cuts follow unchanged.
inline gpart_point gpart_compose_points(const gpart_point& outer, const gpart_point& inner) {
  expect(outer.w.g == inner.w.g, "compose needs a common group");
  expect(inner.w.n() == outer.w.k, "compose: inner domain must equal outer block range");
  gpart_point r;
  r.w = gpart_word{outer.w.g, inner.w.k, {}};
  r.w.vals.reserve(outer.w.n());
  for (std::size_t i = 0; i < outer.w.n(); ++i) {
    if (outer.w.is_nu(i)) {
      r.w.vals.push_back(0);
      continue;
    }
    std::size_t j = outer.w.block(i);
    if (inner.w.is_nu(j)) {
      r.w.vals.push_back(0);
      continue;
    }
    r.w.vals.push_back(gpart_pack(inner.w.block(j),
                                  outer.w.g.mul(outer.w.elem(i), inner.w.elem(j)), r.w.g));
  }
  for (std::size_t j = 0; j + 1 < inner.cuts.size(); ++j)
    r.cuts.push_back(gpart_anchor(outer.w, inner.cuts[j]));
  r.cuts.insert(r.cuts.end(), outer.cuts.begin(), outer.cuts.end());
  return r;
}

inline gpart_point gpart_compose_point(const gpart_word& outer, const gpart_point& x) {
  return gpart_compose_points(gpart_as_point(outer), x);
}

inline bool gpart_point_lt(const gpart_point& a, const gpart_point& b) {
  if (a.w.g != b.w.g || a.proj_k() != b.proj_k()) return false;
  if (a.depth() >= b.depth()) return false;
  return a == gpart_truncate_point(b, a.depth());
}

// Canonical lift: each collapsed block occupies exactly its cut position.
inline gpart_word gpart_point_lift(const gpart_point& p) {
  expect(gpart_point_ok(p), "invalid projected point");
  gpart_word a = p.w;
  a.k = p.depth();
  for (std::size_t j = 0; j + 1 < p.cuts.size(); ++j)
    a.vals[p.cuts[j]] = gpart_pack(p.w.k + j, a.g.unit, a.g);
  gpart_validate(a);
  return a;
}

// All projected points with the given extent, as projection images of
// enumerated elements.
inline std::vector<gpart_point> gpart_enumerate_points(const finite_group& g, std::size_t k,
                                                       std::size_t extent,
                                                       node_counter* nc = nullptr) {
  expect(k >= 1, "projection extent must be at least 1");
  std::vector<gpart_point> out;
  for (std::size_t d = k; d <= extent; ++d)
    for (const gpart_word& w : gpart_enumerate(g, extent, d, nc)) {
      if (nc) nc->tick();
      out.push_back(gpart_project(k, w));
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline json group_to_json(const finite_group& g) {
  json j;
  j["schema"] = schema_tag;
  j["space"] = "group";
  j["order"] = g.order;
  j["unit"] = g.unit;
  json rows = json::array();
  for (std::size_t a = 0; a < g.order; ++a)
    rows.push_back(std::vector<std::size_t>(g.cayley.begin() + static_cast<std::ptrdiff_t>(a * g.order),
                                            g.cayley.begin() + static_cast<std::ptrdiff_t>((a + 1) * g.order)));
  j["cayley"] = std::move(rows);
  return j;
}

inline finite_group group_from_json(const json& j) {
  expect(j.is_object() && j.value("space", "") == "group", "expected a group object");
  finite_group g;
  g.order = j.at("order").get<std::size_t>();
  g.unit = j.at("unit").get<std::size_t>();
  for (const json& row : j.at("cayley"))
    for (const json& v : row) g.cayley.push_back(v.get<std::size_t>());
  group_validate(g);
  return g;
}

// Values print as "v" for the hole or [block, element].
inline json gpart_to_json(const gpart_word& w) {
  json j;
  j["schema"] = schema_tag;
  j["space"] = "gpart";
  j["group"] = group_to_json(w.g);
  j["n"] = w.n();
  j["k"] = w.k;
  json vals = json::array();
  for (std::size_t i = 0; i < w.n(); ++i) {
    if (w.is_nu(i))
      vals.push_back("v");
    else
      vals.push_back(json::array({w.block(i), w.elem(i)}));
  }
  j["values"] = std::move(vals);
  return j;
}

inline gpart_word gpart_from_json(const json& j) {
  expect(j.is_object() && j.value("space", "") == "gpart", "expected a partition word object");
  gpart_word w;
  w.g = group_from_json(j.at("group"));
  w.k = j.at("k").get<std::size_t>();
  for (const json& v : j.at("values")) {
    if (v.is_string()) {
      expect(v.get<std::string>() == "v", "hole values must be the string v");
      w.vals.push_back(0);
    } else {
      expect(v.is_array() && v.size() == 2, "values must be v or a block/element pair");
      std::size_t block = v[0].get<std::size_t>(), elem = v[1].get<std::size_t>();
      expect(block < w.k && elem < w.g.order, "value outside the block range");
      w.vals.push_back(gpart_pack(block, elem, w.g));
    }
  }
  gpart_validate(w);
  return w;
}

inline json gpart_point_to_json(const gpart_point& p) {
  json j = gpart_to_json(p.w);
  j["space"] = "gpart_point";
  j["cuts"] = p.cuts;
  j["depth"] = p.depth();
  return j;
}

inline gpart_point gpart_point_from_json(const json& j) {
  expect(j.is_object() && j.value("space", "") == "gpart_point", "expected a point object");
  gpart_point p;
  p.w.g = group_from_json(j.at("group"));
  p.w.k = j.at("k").get<std::size_t>();
  for (const json& v : j.at("values")) {
    if (v.is_string()) {
      expect(v.get<std::string>() == "v", "hole values must be the string v");
      p.w.vals.push_back(0);
    } else {
      expect(v.is_array() && v.size() == 2, "values must be v or a block/element pair");
      p.w.vals.push_back(gpart_pack(v[0].get<std::size_t>(), v[1].get<std::size_t>(), p.w.g));
    }
  }
  p.cuts = j.at("cuts").get<std::vector<std::size_t>>();
  expect(gpart_point_ok(p), "invalid projected point");
  return p;
}

}  // namespace trs
