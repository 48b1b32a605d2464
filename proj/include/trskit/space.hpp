#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"
#include "echelon.hpp"
#include "gap_word.hpp"
#include "gpartition.hpp"
#include "param_word.hpp"

// Uniform facades over the space families, plus the generic operations the
// axiom harness, the tests and the CLI share. Every facade exposes the same
// member set:
//   words(extent, k, nc)   elements with domain extent `extent` and class
//                          extent k; a pair is composable exactly when the
//                          inner extent equals the outer class extent
//   points(k, extent, nc)  projected points stored over the full window of
//                          the given extent
//   classes / extent_of    the two extents of a word
//   restrict, compose, le_fin, is_prefix, and the point operations, all
//   delegating to the space's own functions
// The enumerators that take no counter of their own are ticked by item count
// so a shared budget covers every family uniformly.

namespace trs {

struct param_space {
  std::size_t t = 0;
  bool ascending = false;

  using word_t = param_word;
  using point_t = param_point;

  std::string name() const { return ascending ? "aparam" : "param"; }
  void require_kind(const word_t& w) const {
    expect(w.t == t && w.ascending == ascending, "word belongs to a different space");
  }
  word_t empty_word() const { return param_word{t, ascending, 0, {}}; }
  std::vector<word_t> words(std::size_t extent, std::size_t k, node_counter* nc = nullptr) const {
    auto out = param_enumerate(t, ascending, extent, k);
    if (nc) nc->tick(out.size() + 1);
    return out;
  }
  std::vector<point_t> points(std::size_t k, std::size_t extent, node_counter* nc = nullptr) const {
    auto out = param_enumerate_points(t, ascending, k, extent);
    if (nc) nc->tick(out.size() + 1);
    return out;
  }
  std::size_t classes(const word_t& w) const { return w.k; }
  std::size_t extent_of(const word_t& w) const { return w.extent(); }
  word_t restrict(std::size_t n, const word_t& w) const { return restrict_to(n, w); }
  word_t compose(const word_t& outer, const word_t& inner) const {
    return param_compose(outer, inner);
  }
  bool le_fin(const word_t& a, const word_t& b) const { return param_le_fin(a, b); }
  bool is_prefix(const word_t& a, const word_t& b) const { return param_is_restriction(a, b); }
  bool point_ok(const point_t& p) const { return param_point_ok(p); }
  point_t truncate(const point_t& p, std::size_t level) const {
    return param_truncate_point(p, level);
  }
  point_t compose_point(const word_t& outer, const point_t& x) const {
    return param_compose_point(outer, x);
  }
  point_t compose_points(const point_t& outer, const point_t& inner) const {
    return param_compose_points(outer, inner);
  }
  bool point_lt(const point_t& a, const point_t& b) const { return param_point_lt(a, b); }
  std::size_t weight(const word_t& w) const {
    std::size_t s = 0;
    for (std::size_t v : w.vals) s += v;
    return s;
  }
  json word_json(const word_t& w) const { return param_to_json(w); }
  json point_json(const point_t& p) const { return param_point_to_json(p); }
};

struct gapw_space {
  std::size_t t = 1;
  std::size_t m = 1;

  using word_t = gap_word;
  using point_t = gap_point;

  std::string name() const { return "gapw"; }
  void require_kind(const word_t& w) const {
    expect(w.t == t && w.m == m, "word belongs to a different space");
  }
  word_t empty_word() const { return gap_word{t, m, 0, 0, {}}; }
  std::vector<word_t> words(std::size_t extent, std::size_t k, node_counter* nc = nullptr) const {
    return gapw_enumerate(t, m, extent, k, nc);
  }
  std::vector<point_t> points(std::size_t k, std::size_t extent, node_counter* nc = nullptr) const {
    return gapw_enumerate_points(t, m, k, extent, nc);
  }
  std::size_t classes(const word_t& w) const { return w.k; }
  std::size_t extent_of(const word_t& w) const { return w.extent(); }
  word_t restrict(std::size_t n, const word_t& w) const { return gapw_restrict(n, w); }
  word_t compose(const word_t& outer, const word_t& inner) const {
    return gapw_compose(outer, inner);
  }
  bool le_fin(const word_t& a, const word_t& b) const { return gapw_le_fin(a, b); }
  bool is_prefix(const word_t& a, const word_t& b) const { return gapw_is_restriction(a, b); }
  bool point_ok(const point_t& p) const { return gapw_point_ok(p); }
  point_t truncate(const point_t& p, std::size_t level) const {
    return gapw_truncate_point(p, level);
  }
  point_t compose_point(const word_t& outer, const point_t& x) const {
    return gapw_compose_point(outer, x);
  }
  point_t compose_points(const point_t& outer, const point_t& inner) const {
    return gapw_compose_points(outer, inner);
  }
  bool point_lt(const point_t& a, const point_t& b) const { return gapw_point_lt(a, b); }
  std::size_t weight(const word_t& w) const {
    std::size_t s = 0;
    for (std::size_t v : w.cells) s += v;
    return s;
  }
  json word_json(const word_t& w) const { return gapw_to_json(w); }
  json point_json(const point_t& p) const { return gapw_point_to_json(p); }
};

struct gpart_space {
  finite_group g = trivial_group();

  using word_t = gpart_word;
  using point_t = gpart_point;

  std::string name() const { return "gpart"; }
  void require_kind(const word_t& w) const {
    expect(w.g == g, "word belongs to a different space");
  }
  word_t empty_word() const { return gpart_word{g, 0, {}}; }
  std::vector<word_t> words(std::size_t extent, std::size_t k, node_counter* nc = nullptr) const {
    return gpart_enumerate(g, extent, k, nc);
  }
  std::vector<point_t> points(std::size_t k, std::size_t extent, node_counter* nc = nullptr) const {
    return gpart_enumerate_points(g, k, extent, nc);
  }
  std::size_t classes(const word_t& w) const { return w.k; }
  std::size_t extent_of(const word_t& w) const { return w.n(); }
  word_t restrict(std::size_t n, const word_t& w) const { return gpart_restrict(n, w); }
  word_t compose(const word_t& outer, const word_t& inner) const {
    return gpart_compose(outer, inner);
  }
  bool le_fin(const word_t& a, const word_t& b) const { return gpart_le_fin(a, b); }
  bool is_prefix(const word_t& a, const word_t& b) const { return gpart_is_restriction(a, b); }
  bool point_ok(const point_t& p) const { return gpart_point_ok(p); }
  point_t truncate(const point_t& p, std::size_t level) const {
    return gpart_truncate_point(p, level);
  }
  point_t compose_point(const word_t& outer, const point_t& x) const {
    return gpart_compose_point(outer, x);
  }
  point_t compose_points(const point_t& outer, const point_t& inner) const {
    return gpart_compose_points(outer, inner);
  }
  bool point_lt(const point_t& a, const point_t& b) const { return gpart_point_lt(a, b); }
  std::size_t weight(const word_t& w) const {
    std::size_t s = 0;
    for (std::size_t v : w.vals) s += v;
    return s;
  }
  json word_json(const word_t& w) const { return gpart_to_json(w); }
  json point_json(const point_t& p) const { return gpart_point_to_json(p); }
};

struct ech_space {
  prime_field f;

  using word_t = ech_matrix;
  using point_t = ech_point;

  std::string name() const { return "ech"; }
  void require_kind(const word_t& w) const {
    expect(w.f == f, "word belongs to a different space");
  }
  word_t empty_word() const { return ech_matrix{f, 0, 0, {}}; }
  std::vector<word_t> words(std::size_t extent, std::size_t k, node_counter* nc = nullptr) const {
    return ech_enumerate(f, extent, k, nc);
  }
  std::vector<point_t> points(std::size_t k, std::size_t extent, node_counter* nc = nullptr) const {
    return ech_enumerate_points(f, k, extent, nc);
  }
  std::size_t classes(const word_t& w) const { return w.cols; }
  std::size_t extent_of(const word_t& w) const { return w.rows; }
  word_t restrict(std::size_t n, const word_t& w) const { return ech_restrict(n, w); }
  word_t compose(const word_t& outer, const word_t& inner) const {
    return ech_compose(outer, inner);
  }
  bool le_fin(const word_t& a, const word_t& b) const { return ech_le_fin(a, b); }
  bool is_prefix(const word_t& a, const word_t& b) const { return ech_is_restriction(a, b); }
  bool point_ok(const point_t& p) const { return ech_point_ok(p); }
  point_t truncate(const point_t& p, std::size_t level) const {
    return ech_truncate_point(p, level);
  }
  point_t compose_point(const word_t& outer, const point_t& x) const {
    return ech_compose_point(outer, x);
  }
  point_t compose_points(const point_t& outer, const point_t& inner) const {
    return ech_compose_points(outer, inner);
  }
  bool point_lt(const point_t& a, const point_t& b) const { return ech_point_lt(a, b); }
  std::size_t weight(const word_t& w) const {
    std::size_t s = 0;
    for (std::size_t v : w.entries) s += v;
    return s;
  }
  json word_json(const word_t& w) const { return ech_to_json(w); }
  json point_json(const point_t& p) const { return ech_point_to_json(p); }
};

// depth_B(a): least n <= limit with a <=_fin r_n(B). nullopt is the explicit
// infinity marker: no restriction of the held truncation works within the
// limit. Mismatched space parameters are a domain error, not infinity.
template <class Space>
std::optional<std::size_t> space_depth(const Space& sp, const typename Space::word_t& a,
                                       const typename Space::word_t& b, std::size_t limit) {
  sp.require_kind(a);
  sp.require_kind(b);
  const std::size_t top = std::min(limit, sp.classes(b));
  for (std::size_t n = 0; n <= top; ++n)
    if (sp.le_fin(a, sp.restrict(n, b))) return n;
  return std::nullopt;
}

// a = r_m(b) for some m <= |b|.
template <class Space>
bool space_is_prefix(const Space& sp, const typename Space::word_t& a,
                     const typename Space::word_t& b) {
  sp.require_kind(a);
  sp.require_kind(b);
  return sp.is_prefix(a, b);
}

// Members of the basic set <stem>: every truncation X at exactly depth_limit
// with s(|stem|, X) = stem, over stored words of extent up to max_extent. A
// stem no enumerated point realizes yields the empty list.
template <class Space>
std::vector<typename Space::point_t> basic_set_members(const Space& sp,
                                                       const typename Space::point_t& stem,
                                                       std::size_t depth_limit,
                                                       std::size_t max_extent,
                                                       node_counter* nc = nullptr) {
  std::vector<typename Space::point_t> out;
  if (depth_limit < stem.depth()) return out;
  for (std::size_t e = stem.proj_k(); e <= max_extent; ++e)
    for (const auto& x : sp.points(stem.proj_k(), e, nc)) {
      if (nc) nc->tick();
      if (x.depth() != depth_limit) continue;
      if (sp.truncate(x, stem.depth()) == stem) out.push_back(x);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Members of the unconstrained basic set: the empty stem excludes nothing,
// so this is every depth_limit truncation with class extent k.
template <class Space>
std::vector<typename Space::point_t> basic_set_all(const Space& sp, std::size_t k,
                                                   std::size_t depth_limit,
                                                   std::size_t max_extent,
                                                   node_counter* nc = nullptr) {
  std::vector<typename Space::point_t> out;
  for (std::size_t e = k; e <= max_extent; ++e)
    for (const auto& x : sp.points(k, e, nc)) {
      if (nc) nc->tick();
      if (x.depth() == depth_limit) out.push_back(x);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Documented mutants. Each corrupts exactly one operation of its base facade
// and leaves everything else untouched; the axiom harness has to flag the
// corruption, which is what the mutation-sensitivity tests pin down. None of
// them validate their output: the corruption is the point.

// Swaps the first two output values of a composite.
struct param_space_mutant : param_space {
  word_t compose(const word_t& outer, const word_t& inner) const {
    word_t r{outer.t, outer.ascending, inner.k, {}};
    r.vals.reserve(outer.length());
    for (std::size_t v : outer.vals) r.vals.push_back(inner.vals[v]);
    if (r.vals.size() >= 2) std::swap(r.vals[0], r.vals[1]);
    return r;
  }
};

// Reads inner column 0 instead of column m-1 when composing.
struct gapw_space_mutant : gapw_space {
  word_t compose(const word_t& outer, const word_t& inner) const {
    word_t r{outer.t, outer.m, inner.k, outer.rows, {}};
    r.cells.reserve(outer.cells.size());
    for (std::size_t v : outer.cells) r.cells.push_back(inner.at(v, 0));
    return r;
  }
};

// Drops the outer group factor from composite values.
struct gpart_space_mutant : gpart_space {
  word_t compose(const word_t& outer, const word_t& inner) const {
    word_t r{outer.g, inner.k, {}};
    r.vals.reserve(outer.n());
    for (std::size_t i = 0; i < outer.n(); ++i) {
      if (outer.is_nu(i) || inner.is_nu(outer.block(i))) {
        r.vals.push_back(0);
        continue;
      }
      const std::size_t j = outer.block(i);
      r.vals.push_back(gpart_pack(inner.block(j), inner.elem(j), r.g));
    }
    return r;
  }
};

// Bumps the top-left entry of a matrix product.
struct ech_space_mutant : ech_space {
  word_t compose(const word_t& outer, const word_t& inner) const {
    word_t r{outer.f, outer.rows, inner.cols,
             std::vector<std::size_t>(outer.rows * inner.cols, 0)};
    for (std::size_t i = 0; i < r.rows; ++i)
      for (std::size_t j = 0; j < r.cols; ++j) {
        std::size_t acc = 0;
        for (std::size_t l = 0; l < outer.cols; ++l)
          acc = outer.f.add(acc, outer.f.mul(outer.at(i, l), inner.at(l, j)));
        r.at(i, j) = acc;
      }
    if (!r.entries.empty()) r.entries[0] = outer.f.add(r.entries[0], 1);
    return r;
  }
};

}  // namespace trs
