#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "common.hpp"

namespace trs {

// Finite truncation of a parameter word: a surjection from t+n positions onto
// t+k classes. Positions below t are fixed points and classes below t are the
// constants; classes t..t+k-1 are free. First occurrences of all classes are
// strictly increasing. Ascending variant: the position sets of the free
// classes are pairwise order-separated (every cell of class t+i precedes
// every cell of class t+j for i < j); constants stay unconstrained.
//
// The empty word (no positions, k = 0) is the 0-th restriction of every word.
struct param_word {
  std::size_t t = 0;
  bool ascending = false;
  std::size_t k = 0;
  std::vector<std::size_t> vals;  // length t + n, values in [0, t+k)

  std::size_t length() const { return vals.size(); }
  std::size_t extent() const { return vals.empty() ? 0 : vals.size() - t; }
  std::size_t class_count() const { return vals.empty() ? 0 : t + k; }
  bool empty() const { return vals.empty(); }
  auto operator<=>(const param_word&) const = default;
};

// Condition numbers reported by the checker:
//   1  position below t is not a fixed point
//   2  value out of range or some class not attained
//   3  first occurrences of classes not strictly increasing
//   4  ascending only: free classes not order-separated
inline int param_check(const param_word& w) {
  const std::size_t cc = w.t + w.k;
  if (w.empty()) return w.k == 0 ? 0 : 2;
  if (w.vals.size() < w.t) return 1;
  for (std::size_t i = 0; i < w.t; ++i)
    if (w.vals[i] != i) return 1;
  std::vector<std::size_t> first(cc, SIZE_MAX), last(cc, 0);
  for (std::size_t i = 0; i < w.vals.size(); ++i) {
    const std::size_t v = w.vals[i];
    if (v >= cc) return 2;
    if (first[v] == SIZE_MAX) first[v] = i;
    last[v] = i;
  }
  for (std::size_t v = 0; v < cc; ++v)
    if (first[v] == SIZE_MAX) return 2;
  for (std::size_t v = 1; v < cc; ++v)
    if (first[v - 1] >= first[v]) return 3;
  if (w.ascending) {
    for (std::size_t v = w.t; v + 1 < cc; ++v)
      if (last[v] >= first[v + 1]) return 4;
  }
  return 0;
}

inline void param_validate(const param_word& w) {
  int c = param_check(w);
  if (c != 0) throw domain_error("invalid parameter word (condition " + std::to_string(c) + ")");
}

inline param_word param_identity(std::size_t t, bool ascending, std::size_t k) {
  param_word w{t, ascending, k, {}};
  w.vals.resize(t + k);
  for (std::size_t i = 0; i < t + k; ++i) w.vals[i] = i;
  return w;
}

// (outer . inner)(i) = inner(outer(i)). Inner consumes outer's classes, so
// inner's domain must equal outer's class range. The composite is always a
// valid word: first occurrences compose through minima.
inline param_word param_compose(const param_word& outer, const param_word& inner) {
  expect(outer.t == inner.t && outer.ascending == inner.ascending, "compose: mixed word kinds");
  expect(inner.length() == outer.class_count(), "compose: inner domain must equal outer class range");
  param_word r{outer.t, outer.ascending, inner.k, {}};
  r.vals.reserve(outer.length());
  for (std::size_t v : outer.vals) r.vals.push_back(inner.vals[v]);
  param_validate(r);
  return r;
}

// Relaxed composite used on approximations: inner may be longer than outer's
// class range (the tail is simply never read). The result can fail to attain
// every class of inner's range, so the operation is partial.
inline std::optional<param_word> param_compose_relaxed(const param_word& outer, const param_word& inner) {
  if (outer.t != inner.t || outer.ascending != inner.ascending) return std::nullopt;
  if (inner.length() < outer.class_count()) return std::nullopt;
  param_word r{outer.t, outer.ascending, inner.k, {}};
  r.vals.reserve(outer.length());
  for (std::size_t v : outer.vals) r.vals.push_back(inner.vals[v]);
  if (param_check(r) != 0) return std::nullopt;
  return r;
}

// r_n: cut before the first occurrence of class t+n. At n == k the word is
// its own restriction (truncation convention); past k the data is not held.
inline param_word restrict_to(std::size_t n, const param_word& w) {
  if (n > w.k) throw budget_error("restriction depth exceeds the truncation");
  if (n == w.k) return w;
  if (n == 0) return param_word{w.t, w.ascending, 0, {}};
  std::size_t cut = 0;
  while (w.vals[cut] != w.t + n) ++cut;
  param_word r{w.t, w.ascending, n, {}};
  r.vals.assign(w.vals.begin(), w.vals.begin() + static_cast<std::ptrdiff_t>(cut));
  return r;
}

// Solve target = base . c for the unique candidate witness c: the value of c
// at class x is forced by target at the first occurrence of x in base. A
// witness exists iff the forced c is consistent and itself a valid word.
inline std::optional<param_word> param_factor(const param_word& target, const param_word& base) {
  if (target.t != base.t || target.ascending != base.ascending) return std::nullopt;
  if (target.length() != base.length()) return std::nullopt;
  if (target.empty()) return param_word{target.t, target.ascending, 0, {}};
  const std::size_t cc = base.class_count();
  param_word c{base.t, base.ascending, target.k, {}};
  c.vals.assign(cc, SIZE_MAX);
  for (std::size_t i = 0; i < base.length(); ++i) {
    std::size_t& cell = c.vals[base.vals[i]];
    if (cell == SIZE_MAX) cell = target.vals[i];
    else if (cell != target.vals[i]) return std::nullopt;
  }
  for (std::size_t v : c.vals)
    if (v == SIZE_MAX) return std::nullopt;
  if (param_check(c) != 0) return std::nullopt;
  return c;
}

// Elements: B <= A iff B factors through A.
inline bool param_le(const param_word& b, const param_word& a) {
  return param_factor(b, a).has_value();
}

// Finite-level order on approximations: equal domains plus factorization.
// Strictly increasing first occurrences make the domain extent pin the depth,
// so no search over depths is needed.
inline bool param_le_fin(const param_word& a, const param_word& b) {
  if (a.empty() || b.empty()) return a.empty() && b.empty() && a.t == b.t && a.ascending == b.ascending;
  return a.length() == b.length() && param_factor(a, b).has_value();
}

// depth_B(a): least n with a <=_fin r_n(B); nullopt when no restriction of
// the held truncation works.
inline std::optional<std::size_t> param_depth(const param_word& a, const param_word& b) {
  for (std::size_t n = 0; n <= b.k; ++n)
    if (param_le_fin(a, restrict_to(n, b))) return n;
  return std::nullopt;
}

// a = r_m(b) for some m, i.e. a is an initial restriction of b.
inline bool param_is_restriction(const param_word& a, const param_word& b) {
  if (a.t != b.t || a.ascending != b.ascending || a.k > b.k) return false;
  return a == restrict_to(a.k, b);
}

// Projected point: the image of a word under collapsing all classes >= t+k
// to 0, together with the cut positions where the collapsed classes began.
// cuts[i] is the boundary of level k+i; the final cut equals the length.
// Keeping the cuts is what makes level data (and hence the s-approximation
// sequence) well-defined: distinct words can project to the same plain word
// while their boundary data differs.
struct param_point {
  param_word w;                    // w.k == projected class extent
  std::vector<std::size_t> cuts;   // strictly increasing, back() == w.length()

  std::size_t proj_k() const { return w.k; }
  std::size_t depth() const { return w.k + cuts.size() - 1; }
  auto operator<=>(const param_point&) const = default;
};

inline param_point param_project(std::size_t k, const param_word& a) {
  expect(k >= 1, "project: class extent must be at least 1");
  if (k > a.k) throw budget_error("projection extent exceeds the truncation");
  param_point p;
  p.w.t = a.t;
  p.w.ascending = a.ascending;
  p.w.k = k;
  p.w.vals.reserve(a.length());
  for (std::size_t v : a.vals) p.w.vals.push_back(v < a.t + k ? v : 0);
  for (std::size_t j = k; j < a.k; ++j) {
    std::size_t cut = 0;
    while (a.vals[cut] != a.t + j) ++cut;
    p.cuts.push_back(cut);
  }
  p.cuts.push_back(a.length());
  return p;
}

// Point-word shape test: like param_check, except that collapsed cells read
// as extra zeros. For the ascending variant with t = 0 the zeros split into
// the genuine class-0 run and a trailing collapsed region, which is not a
// valid word on its own; all other variants coincide with param_check.
inline bool param_point_word_ok(const param_word& w) {
  if (w.k < 1 || w.empty()) return false;
  if (!(w.ascending && w.t == 0)) return param_check(w) == 0;
  // shape 0^a 1^b1 .. (k-1)^b_{k-1} 0^z with a, b_i >= 1
  std::size_t i = 0;
  const std::size_t n = w.vals.size();
  for (std::size_t c = 0; c < w.k; ++c) {
    std::size_t run = 0;
    while (i < n && w.vals[i] == c) { ++i; ++run; }
    if (run == 0) return false;
  }
  while (i < n && w.vals[i] == 0) ++i;
  return i == n;
}

// Cut chain validity over a point word: strictly increasing, final cut at the
// extent, every interior cut sits on a zero cell positioned after all real
// free-class activity (after the first cell of the last class in the plain
// variant; after the last free cell in the ascending variant, where a fresh
// class may not interleave).
inline bool param_point_ok(const param_point& p) {
  if (!param_point_word_ok(p.w)) return false;
  if (p.cuts.empty() || p.cuts.back() != p.w.length()) return false;
  for (std::size_t i = 1; i < p.cuts.size(); ++i)
    if (p.cuts[i - 1] >= p.cuts[i]) return false;
  const std::size_t t = p.w.t, k = p.w.k;
  std::size_t lo = 0;
  if (p.w.ascending) {
    const std::size_t free_floor = std::max<std::size_t>(t, 1);
    for (std::size_t i = 0; i < p.w.vals.size(); ++i)
      if (p.w.vals[i] >= free_floor && p.w.vals[i] < t + k) lo = i + 1;
    if (t == 0 && lo == 0) lo = 1;  // class 0 must keep at least one cell
    // With t = 0 and k >= 2 a trailing zero cannot rejoin class 0 (the word
    // is order-separated), so the whole tail is collapsed territory and the
    // first cut must sit exactly where the tail starts.
    if (t == 0 && k >= 2 && lo < p.w.length())
      if (p.cuts.size() < 2 || p.cuts.front() != lo) return false;
  } else {
    std::size_t first_last = 0;
    while (p.w.vals[first_last] != t + k - 1) ++first_last;
    lo = first_last + 1;
  }
  for (std::size_t c : p.cuts) {
    if (c == p.w.length()) continue;
    if (c < lo || p.w.vals[c] != 0) return false;
  }
  return true;
}

// s-approximation at a level in [proj_k, depth]: truncate at the stored cut.
inline param_point param_truncate_point(const param_point& p, std::size_t level) {
  if (level < p.proj_k()) throw domain_error("truncate level below the projected class extent");
  if (level > p.depth()) throw budget_error("truncate level exceeds the point's depth");
  const std::size_t idx = level - p.proj_k();
  param_point r;
  r.w.t = p.w.t;
  r.w.ascending = p.w.ascending;
  r.w.k = p.w.k;
  r.w.vals.assign(p.w.vals.begin(), p.w.vals.begin() + static_cast<std::ptrdiff_t>(p.cuts[idx]));
  r.cuts.assign(p.cuts.begin(), p.cuts.begin() + static_cast<std::ptrdiff_t>(idx) + 1);
  return r;
}

// Elements embed into points as their own projection at full class extent:
// no collapsed cells, a single end cut.
inline param_point param_as_point(const param_word& a) {
  return param_point{a, {a.length()}};
}

// Finitized composite. Outer is an n-class approximation, inner a k-class
// approximation whose word domain equals outer's class range t+n. The word
// parts compose cellwise. Interior cuts of inner (its boundaries below t+n)
// push to the first position of outer attaining them; from inner's final
// boundary on, outer's own cut chain takes over. First occurrences compose
// through minima, which is what keeps this associative and order-preserving.
inline param_point param_compose_points(const param_point& outer, const param_point& inner) {
  expect(outer.w.t == inner.w.t && outer.w.ascending == inner.w.ascending, "compose: mixed word kinds");
  expect(inner.w.length() == outer.w.t + outer.w.k, "compose: inner domain must equal outer class range");
  param_point r;
  r.w.t = outer.w.t;
  r.w.ascending = outer.w.ascending;
  r.w.k = inner.w.k;
  r.w.vals.reserve(outer.w.length());
  for (std::size_t v : outer.w.vals) r.w.vals.push_back(inner.w.vals[v]);
  r.cuts.reserve(inner.cuts.size() - 1 + outer.cuts.size());
  for (std::size_t i = 0; i + 1 < inner.cuts.size(); ++i) {
    std::size_t pos = 0;
    while (outer.w.vals[pos] != inner.cuts[i]) ++pos;
    r.cuts.push_back(pos);
  }
  r.cuts.insert(r.cuts.end(), outer.cuts.begin(), outer.cuts.end());
  return r;
}

// Element composed with a point: the common case of the finitized composite.
inline param_point param_compose_point(const param_word& outer, const param_point& x) {
  return param_compose_points(param_as_point(outer), x);
}

// Order on approximations at a shared class extent: a = s(m, X), b = s(n, X)
// for some point X and m < n, which in structured form says a is exactly b
// truncated at a's level.
inline bool param_point_lt(const param_point& a, const param_point& b) {
  return a.w.t == b.w.t && a.w.ascending == b.w.ascending && a.proj_k() == b.proj_k() &&
         a.depth() < b.depth() && a == param_truncate_point(b, a.depth());
}

// All valid words with domain extent `extent` and exactly `classes` free
// classes, in lexicographic order on the value vector.
inline std::vector<param_word> param_enumerate(std::size_t t, bool ascending, std::size_t extent,
                                               std::size_t classes) {
  std::vector<param_word> out;
  if (classes > extent) return out;
  if (extent == 0) {
    if (classes == 0) out.push_back(param_identity(t, ascending, 0));
    return out;
  }
  if (t == 0 && classes == 0) return out;  // no values available
  param_word w{t, ascending, classes, {}};
  w.vals.resize(t + extent);
  for (std::size_t i = 0; i < t; ++i) w.vals[i] = i;
  auto rec = [&](auto&& self, std::size_t pos, std::size_t used) -> void {
    if (pos == w.vals.size()) {
      if (used == classes) out.push_back(w);
      return;
    }
    if (classes - used > w.vals.size() - pos) return;  // cannot finish introductions
    for (std::size_t v = 0; v < t; ++v) {
      w.vals[pos] = v;
      self(self, pos + 1, used);
    }
    if (used > 0) {
      if (ascending) {
        w.vals[pos] = t + used - 1;  // only the most recent free class stays open
        self(self, pos + 1, used);
      } else {
        for (std::size_t j = 0; j < used; ++j) {
          w.vals[pos] = t + j;
          self(self, pos + 1, used);
        }
      }
    }
    if (used < classes) {
      w.vals[pos] = t + used;
      self(self, pos + 1, used + 1);
    }
  };
  rec(rec, t, 0);
  return out;
}

// All projected points with class extent k over words of the given domain
// extent. Point words are enumerated directly (valid words plus, in the
// ascending t = 0 case, valid words padded by a collapsed zero tail), then
// every eligible cut chain is attached.
inline std::vector<param_point> param_enumerate_points(std::size_t t, bool ascending, std::size_t k,
                                                       std::size_t extent) {
  std::vector<param_word> words;
  if (ascending && t == 0) {
    for (std::size_t e = k; e <= extent; ++e)
      for (param_word w : param_enumerate(t, ascending, e, k)) {
        w.vals.resize(t + extent, 0);
        words.push_back(std::move(w));
      }
    std::sort(words.begin(), words.end(), [](const param_word& a, const param_word& b) { return a.vals < b.vals; });
    words.erase(std::unique(words.begin(), words.end()), words.end());
  } else {
    words = param_enumerate(t, ascending, extent, k);
  }
  std::vector<param_point> out;
  for (const param_word& w : words) {
    std::vector<std::size_t> zeros;
    for (std::size_t i = 1; i < w.vals.size(); ++i)
      if (w.vals[i] == 0) zeros.push_back(i);
    const std::size_t m = zeros.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
      param_point p{w, {}};
      for (std::size_t i = 0; i < m; ++i)
        if (mask & (std::size_t{1} << i)) p.cuts.push_back(zeros[i]);
      p.cuts.push_back(w.length());
      if (param_point_ok(p)) out.push_back(std::move(p));
    }
  }
  return out;
}

inline json param_to_json(const param_word& w) {
  json j;
  j["schema"] = schema_tag;
  j["space"] = "param";
  j["t"] = w.t;
  j["ascending"] = w.ascending;
  j["n"] = w.extent();
  j["k"] = w.k;
  j["data"] = w.vals;
  return j;
}

inline param_word param_from_json(const json& j) {
  expect(j.is_object() && j.value("space", "") == "param", "expected a param word object");
  param_word w;
  w.t = j.at("t").get<std::size_t>();
  w.ascending = j.value("ascending", false);
  w.k = j.at("k").get<std::size_t>();
  w.vals = j.at("data").get<std::vector<std::size_t>>();
  param_validate(w);
  return w;
}

inline json param_point_to_json(const param_point& p) {
  json j = param_to_json(p.w);
  j["space"] = "param_point";
  j["cuts"] = p.cuts;
  j["depth"] = p.depth();
  return j;
}

inline param_point param_point_from_json(const json& j) {
  expect(j.is_object() && j.value("space", "") == "param_point", "expected a param point object");
  param_point p;
  p.w.t = j.at("t").get<std::size_t>();
  p.w.ascending = j.value("ascending", false);
  p.w.k = j.at("k").get<std::size_t>();
  p.w.vals = j.at("data").get<std::vector<std::size_t>>();
  p.cuts = j.at("cuts").get<std::vector<std::size_t>>();
  expect(param_point_ok(p), "invalid projected point");
  return p;
}

}  // namespace trs
