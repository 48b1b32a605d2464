#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "common.hpp"
#include "param_word.hpp"

namespace trs {

// Finite truncation of a generalized ascending parameter word: a surjection
// from the rectangle (t+n) x m onto t+k classes. Rows below t are constant
// (value = row index), classes below t are the constants, classes t..t+k-1
// are free. Each free class has at most one cell per row, attains column m-1,
// and the free classes occupy pairwise order-separated row ranges. Minima of
// the class row sets are strictly increasing across all classes. Rows not
// touched by any free class may carry arbitrary constant values (garbage).
//
// The empty word (no rows, k = 0) is the 0-th restriction of every word.
struct gap_word {
  std::size_t t = 1;
  std::size_t m = 1;
  std::size_t k = 0;
  std::size_t rows = 0;                // t + n, or 0 for the empty word
  std::vector<std::size_t> cells;      // row-major, rows*m values in [0, t+k)

  std::size_t extent() const { return rows == 0 ? 0 : rows - t; }
  std::size_t class_count() const { return rows == 0 ? 0 : t + k; }
  bool empty() const { return rows == 0; }
  std::size_t at(std::size_t i, std::size_t l) const { return cells[i * m + l]; }
  std::size_t& at(std::size_t i, std::size_t l) { return cells[i * m + l]; }
  auto operator<=>(const gap_word&) const = default;
};

// Condition numbers reported by the checker:
//   1  row below t is not constant equal to its index
//   2  some free class has two cells in one row
//   4  some class misses column m-1 (an unattained class reports 4 too)
//   5  minima of the class row sets not strictly increasing
//   6  free classes not order-separated (max row of one reaches the next's min)
// Condition 3 of the definition (each free class meets finitely many rows)
// holds automatically for finite truncations and is never reported.
// Structural misuse (t = 0, m = 0, size mismatch, value out of range) throws:
// those break the type, not one of the defining conditions.
inline int gapw_check(const gap_word& w) {
  expect(w.t >= 1 && w.m >= 1, "gap word needs t >= 1 and m >= 1");
  if (w.empty()) {
    expect(w.cells.empty(), "empty gap word with cells");
    return w.k == 0 ? 0 : 4;
  }
  expect(w.rows >= w.t, "gap word shorter than its constant block");
  expect(w.cells.size() == w.rows * w.m, "gap word cell count mismatch");
  const std::size_t cc = w.t + w.k;
  for (std::size_t v : w.cells) expect(v < cc, "gap word value out of range");
  for (std::size_t i = 0; i < w.t; ++i)
    for (std::size_t l = 0; l < w.m; ++l)
      if (w.at(i, l) != i) return 1;
  for (std::size_t i = w.t; i < w.rows; ++i) {
    std::vector<std::size_t> frees;
    for (std::size_t l = 0; l < w.m; ++l)
      if (w.at(i, l) >= w.t) frees.push_back(w.at(i, l));
    std::sort(frees.begin(), frees.end());
    if (std::adjacent_find(frees.begin(), frees.end()) != frees.end()) return 2;
  }
  // Distinct free classes sharing a row is a condition-6 violation, caught
  // below through the min/max ranges; condition 2 is only about one class.
  for (std::size_t j = 0; j < cc; ++j) {
    bool att = false;
    for (std::size_t i = 0; i < w.rows && !att; ++i) att = w.at(i, w.m - 1) == j;
    if (!att) return 4;
  }
  std::vector<std::size_t> mn(cc, SIZE_MAX), mx(cc, 0);
  for (std::size_t i = 0; i < w.rows; ++i)
    for (std::size_t l = 0; l < w.m; ++l) {
      const std::size_t v = w.at(i, l);
      if (mn[v] == SIZE_MAX) mn[v] = i;
      mn[v] = std::min(mn[v], i);
      mx[v] = std::max(mx[v], i);
    }
  for (std::size_t j = 1; j < cc; ++j)
    if (mn[j - 1] >= mn[j]) return 5;
  for (std::size_t j = w.t; j + 1 < cc; ++j)
    if (mx[j] >= mn[j + 1]) return 6;
  return 0;
}

inline void gapw_validate(const gap_word& w) {
  int c = gapw_check(w);
  if (c != 0) throw domain_error("invalid gap word (condition " + std::to_string(c) + ")");
}

// Right identity under composition: free class j has its single cell at
// (t+j, m-1); every other cell of row t+j is constant 0. The full-row
// alternative (class j covering all m columns of its row) violates the
// one-cell-per-row condition whenever m >= 2. Composition reads only column
// m-1 of the inner word, so only a right identity exists for m >= 2.
inline gap_word gapw_identity(std::size_t t, std::size_t m, std::size_t k) {
  gap_word w{t, m, k, t + k, {}};
  w.cells.assign((t + k) * m, 0);
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t l = 0; l < m; ++l) w.at(i, l) = i;
  for (std::size_t j = 0; j < k; ++j) w.at(t + j, m - 1) = t + j;
  gapw_validate(w);
  return w;
}

using gw_cell = std::pair<std::size_t, std::size_t>;  // (row, column)
using class_set = std::vector<gw_cell>;               // sorted, duplicate-free

inline class_set gapw_class_of(const gap_word& w, std::size_t j) {
  class_set s;
  for (std::size_t i = 0; i < w.rows; ++i)
    for (std::size_t l = 0; l < w.m; ++l)
      if (w.at(i, l) == j) s.emplace_back(i, l);
  return s;
}

inline class_set canonical_set(class_set s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

// One tetris step: every cell drops one column, clamped at column 0.
inline class_set tetris(const class_set& s) {
  class_set r;
  r.reserve(s.size());
  for (auto [i, l] : s) r.emplace_back(i, l == 0 ? 0 : l - 1);
  return canonical_set(std::move(r));
}

// l-fold tetris; the column map is monotone, so iterating one step l times
// equals clamping the column drop directly.
inline class_set tetris_pow(std::size_t l, const class_set& s) {
  class_set r;
  r.reserve(s.size());
  for (auto [i, c] : s) r.emplace_back(i, c > l ? c - l : 0);
  return canonical_set(std::move(r));
}

inline class_set set_union(const class_set& a, const class_set& b) {
  class_set r;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

// S^l applied to class n of w: a tetris power for shifts l >= t, and the
// union with constant class l for shifts below t (the class is dumped into
// that constant). Defined for constant n as well (T^0 of a constant is the
// class itself), which the relaxed symbol algebra uses.
inline class_set s_op(std::size_t l, std::size_t n, const gap_word& w) {
  expect(l < w.t + w.m, "shift out of range");
  expect(n < w.class_count(), "class index out of range");
  if (l >= w.t) return tetris_pow(l - w.t, gapw_class_of(w, n));
  return set_union(gapw_class_of(w, n), gapw_class_of(w, l));
}

// (outer . inner)(i, l) = inner(outer(i, l), m-1). Inner consumes outer's
// classes row-wise, reading only its last column, so inner's row count must
// equal outer's class range. The composite is always valid: its free classes
// are unions of whole free classes of outer grouped by inner's last column,
// and those groups are row-separated because inner's classes are.
inline gap_word gapw_compose(const gap_word& outer, const gap_word& inner) {
  expect(outer.t == inner.t && outer.m == inner.m, "compose: mixed word kinds");
  expect(inner.rows == outer.class_count(), "compose: inner rows must equal outer class range");
  gap_word r{outer.t, outer.m, inner.k, outer.rows, {}};
  r.cells.reserve(outer.cells.size());
  for (std::size_t v : outer.cells) r.cells.push_back(inner.at(v, inner.m - 1));
  gapw_validate(r);
  return r;
}

// r_n: cut the rectangle at the first row of class t+n. Cells above the cut
// all have values below t+n (class minima increase), so the prefix is a valid
// word onto t+n classes. At n == k the word is its own restriction; past k
// the data is not held.
inline gap_word gapw_restrict(std::size_t n, const gap_word& w) {
  if (n > w.k) throw budget_error("restriction depth exceeds the truncation");
  if (n == w.k) return w;
  if (n == 0) return gap_word{w.t, w.m, 0, 0, {}};
  std::size_t cut = 0;
  while (cut < w.rows) {
    bool hit = false;
    for (std::size_t l = 0; l < w.m && !hit; ++l) hit = w.at(cut, l) == w.t + n;
    if (hit) break;
    ++cut;
  }
  expect(cut < w.rows, "restriction class unattained");
  gap_word r{w.t, w.m, n, cut, {}};
  r.cells.assign(w.cells.begin(), w.cells.begin() + static_cast<std::ptrdiff_t>(cut * w.m));
  gapw_validate(r);
  return r;
}

// All words with rows = t+extent onto t+k classes, in row-major lexicographic
// order. Free classes must appear in order and one row holds at most one free
// cell, so at each cell only constants, the open class, and the next fresh
// class are candidates.
inline std::vector<gap_word> gapw_enumerate(std::size_t t, std::size_t m, std::size_t extent,
                                            std::size_t k, node_counter* nc = nullptr) {
  expect(t >= 1 && m >= 1, "gap word needs t >= 1 and m >= 1");
  std::vector<gap_word> out;
  const std::size_t rows = t + extent;
  std::vector<std::size_t> cur(rows * m, 0);
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t l = 0; l < m; ++l) cur[i * m + l] = i;

  // started = free classes introduced so far; open = t+started-1.
  // row_free marks a free cell already placed in the current row.
  // open_has_last tracks whether the open class attained column m-1.
  auto rec = [&](auto&& self, std::size_t i, std::size_t l, std::size_t started, bool row_free,
                 bool open_has_last) -> void {
    if (nc) nc->tick();
    if (i == rows) {
      if (started == k && (k == 0 || open_has_last)) {
        gap_word w{t, m, k, rows, cur};
        out.push_back(std::move(w));
      }
      return;
    }
    if (l == 0) row_free = false;
    // Each new class and a missing column-m-1 cell of the open class need
    // pairwise distinct rows with a free slot.
    const std::size_t pending = (k - started) + ((started > 0 && !open_has_last) ? 1 : 0);
    const std::size_t capacity = (rows - i - 1) + (row_free ? 0 : 1);
    if (pending > capacity) return;
    const std::size_t ni = (l + 1 == m) ? i + 1 : i;
    const std::size_t nl = (l + 1 == m) ? 0 : l + 1;
    for (std::size_t c = 0; c < t; ++c) {
      cur[i * m + l] = c;
      self(self, ni, nl, started, row_free, open_has_last);
    }
    if (!row_free && started > 0) {
      cur[i * m + l] = t + started - 1;
      self(self, ni, nl, started, true, open_has_last || l == m - 1);
    }
    if (!row_free && started < k && (started == 0 || open_has_last)) {
      cur[i * m + l] = t + started;
      self(self, ni, nl, started + 1, true, l == m - 1);
    }
    cur[i * m + l] = 0;
  };
  rec(rec, t, 0, 0, false, false);
  return out;
}

// Symbol: a formal sum of shift operators applied to classes of a word, with
// strictly increasing class indices. The strict algebra allows only free
// classes and requires some shift equal to t; the relaxed algebra also allows
// constant classes as terms and requires a shift equal to t only when every
// term is free.
struct gap_symbol {
  std::vector<std::pair<std::size_t, std::size_t>> terms;  // (shift l, class n)
  auto operator<=>(const gap_symbol&) const = default;
};

// Checker result: 0 ok, 1 empty, 2 shift or class out of range, 3 class
// indices not strictly increasing, 4 constant class term in the strict
// algebra, 5 no shift equal to t where one is required.
inline int gapw_symbol_check(const gap_symbol& sym, const gap_word& w, bool relaxed) {
  if (sym.terms.empty()) return 1;
  std::size_t prev = SIZE_MAX;
  bool has_t = false;
  bool all_free = true;
  for (auto [l, n] : sym.terms) {
    if (l >= w.t + w.m || n >= w.class_count()) return 2;
    if (prev != SIZE_MAX && n <= prev) return 3;
    prev = n;
    has_t = has_t || l == w.t;
    all_free = all_free && n >= w.t;
  }
  if (!relaxed && !all_free) return 4;
  if ((!relaxed || all_free) && !has_t) return 5;
  return 0;
}

inline void gapw_symbol_validate(const gap_symbol& sym, const gap_word& w, bool relaxed) {
  int c = gapw_symbol_check(sym, w, relaxed);
  if (c != 0) throw domain_error("invalid symbol (condition " + std::to_string(c) + ")");
}

inline class_set gapw_symbol_value(const gap_symbol& sym, const gap_word& w) {
  class_set v;
  for (auto [l, n] : sym.terms) v = set_union(v, s_op(l, n, w));
  return v;
}

// All valid symbols over w, by increasing class index with skip-first order.
inline std::vector<gap_symbol> gapw_symbols(const gap_word& w, bool relaxed,
                                            node_counter* nc = nullptr) {
  std::vector<gap_symbol> out;
  gap_symbol cur;
  const std::size_t lo = relaxed ? 0 : w.t;
  auto rec = [&](auto&& self, std::size_t n) -> void {
    if (nc) nc->tick();
    if (n == w.class_count()) {
      if (gapw_symbol_check(cur, w, relaxed) == 0) out.push_back(cur);
      return;
    }
    self(self, n + 1);
    for (std::size_t l = 0; l < w.t + w.m; ++l) {
      cur.terms.emplace_back(l, n);
      self(self, n + 1);
      cur.terms.pop_back();
    }
  };
  if (!w.empty()) rec(rec, lo);
  return out;
}

// Encode a strict symbol over w as a word with one free class. With n0 the
// class index of the first shift-t term, the rectangle keeps t + e rows where
// e is the first row of class t + n0 + 1.
//   no shift below t: the symbol value becomes the free class; constants keep
//     their cells, untouched free classes and every position left over are
//     absorbed into class 0.
//   some shift below t: terms are scanned in order and accumulate; each term
//     with shift l < t closes a segment and dumps the accumulated free cells
//     into constant l (the first segment also absorbs untouched free
//     classes); the first shift-t term's class is subtracted from every dump
//     and restored as the free class together with the trailing segment.
// The map is a quotient, not an injection: dumping a class into constant 0
// leaves the same table as omitting the class and letting absorption take it,
// so several symbols can share an image.
// A tetris-shifted cell can land on a position holding a constant in the same
// row, so the clause sets overlap; class-derived labels take precedence and
// constants only keep positions nothing else claimed. Class-derived labels
// never collide with each other (free classes occupy disjoint rows and tetris
// preserves rows); a collision there means the symbol has no image.
inline gap_word gapw_symbol_encode(const gap_symbol& sym, const gap_word& w) {
  gapw_symbol_validate(sym, w, false);
  std::size_t j0 = 0;
  while (sym.terms[j0].first != w.t) ++j0;
  const std::size_t cutoff = w.t + sym.terms[j0].second + 1;
  if (cutoff >= w.class_count())
    throw budget_error("symbol cutoff class is beyond the truncation");
  class_set cut_class = gapw_class_of(w, cutoff);
  expect(!cut_class.empty(), "cutoff class unattained in a valid word");
  const std::size_t rows_f = w.t + cut_class.front().first;
  if (rows_f > w.rows) throw budget_error("symbol rectangle extends past the truncation");

  constexpr std::size_t none = SIZE_MAX;
  std::vector<std::size_t> lab(rows_f * w.m, none);
  auto assign = [&](const class_set& s, std::size_t label) {
    for (auto [i, l] : s) {
      if (i >= rows_f) continue;
      std::size_t& slot = lab[i * w.m + l];
      if (slot != none && slot != label)
        throw domain_error("symbol image is not well-defined");
      slot = label;
    }
  };
  auto assign_weak = [&](const class_set& s, std::size_t label) {
    for (auto [i, l] : s) {
      if (i >= rows_f) continue;
      std::size_t& slot = lab[i * w.m + l];
      if (slot == none) slot = label;
    }
  };
  // Shifted-or-not class part of one term; the dump target constant is not
  // part of this layer.
  auto term_class_part = [&](std::size_t l, std::size_t n) {
    class_set cls = gapw_class_of(w, n);
    return l >= w.t ? tetris_pow(l - w.t, cls) : cls;
  };

  std::vector<bool> is_term_class(w.class_count(), false);
  for (auto [l, n] : sym.terms) is_term_class[n] = true;
  class_set untouched;
  for (std::size_t n = w.t; n < w.class_count(); ++n)
    if (!is_term_class[n]) untouched = set_union(untouched, gapw_class_of(w, n));

  const bool any_dump =
      std::any_of(sym.terms.begin(), sym.terms.end(), [&](auto p) { return p.first < w.t; });
  if (!any_dump) {
    class_set value;
    for (auto [l, n] : sym.terms) value = set_union(value, term_class_part(l, n));
    assign(value, w.t);
    assign_weak(untouched, 0);
  } else {
    const class_set anchor = gapw_class_of(w, sym.terms[j0].second);
    class_set seg;
    std::size_t first_dump_label = SIZE_MAX;
    for (auto [l, n] : sym.terms) {
      seg = set_union(seg, term_class_part(l, n));
      if (l < w.t) {
        if (first_dump_label == SIZE_MAX) first_dump_label = l;
        class_set dumped;
        std::set_difference(seg.begin(), seg.end(), anchor.begin(), anchor.end(),
                            std::back_inserter(dumped));
        assign(dumped, l);
        seg.clear();
      }
    }
    assign(set_union(seg, anchor), w.t);
    assign_weak(untouched, first_dump_label);
  }
  for (std::size_t j = 0; j < w.t; ++j) assign_weak(gapw_class_of(w, j), j);
  for (std::size_t& v : lab)
    if (v == none) v = 0;
  gap_word f{w.t, w.m, 1, rows_f, std::move(lab)};
  gapw_validate(f);
  return f;
}

// Decode by search: scan all strict symbols over w whose encoding is defined
// and return the first whose image equals f. Since the encoding is a quotient
// this picks the canonical representative of the image's fiber, the least one
// in enumeration order.
inline std::optional<gap_symbol> gapw_symbol_decode(const gap_word& f, const gap_word& w,
                                                    node_counter* nc = nullptr) {
  for (const gap_symbol& sym : gapw_symbols(w, false, nc)) {
    if (nc) nc->tick();
    gap_word img;
    try {
      img = gapw_symbol_encode(sym, w);
    } catch (const budget_error&) {
      continue;
    } catch (const domain_error&) {
      continue;  // symbol has no well-defined image
    }
    if (img == f) return sym;
  }
  return std::nullopt;
}

// Apply a shift to a whole combination. In the span reading a combination is
// a variable word whose unshifted terms are the variable slots, so an outer
// shift replaces exactly those and leaves every other term alone. Shifting
// by t is the identity.
inline gap_symbol gapw_symbol_shift(std::size_t l, const gap_symbol& sym, const gap_word& w) {
  expect(l < w.t + w.m, "shift outside the alphabet");
  gap_symbol out = sym;
  for (auto& term : out.terms)
    if (term.first == w.t) term.first = l;
  return out;
}

// Expand a symbol over b into a symbol over w, where classes[j] is the
// combination over w defining free class t+j of b. Terms stay strictly
// increasing because distinct classes of b occupy disjoint row ranges and so
// do their constituents over w.
inline gap_symbol gapw_symbol_expand(const gap_symbol& sym,
                                     const std::vector<gap_symbol>& classes, const gap_word& b,
                                     const gap_word& w) {
  gap_symbol out;
  for (auto [l, n] : sym.terms) {
    expect(n >= b.t && n - b.t < classes.size(), "term class has no expansion");
    const gap_symbol part = gapw_symbol_shift(l, classes[n - b.t], w);
    out.terms.insert(out.terms.end(), part.terms.begin(), part.terms.end());
  }
  std::sort(out.terms.begin(), out.terms.end(),
            [](const auto& x, const auto& y) { return x.second < y.second; });
  return out;
}

// Canonical strict combination over w with the given value, if any. Strict
// combinations without dump terms split by rows into per-class tetris images,
// so on valid free classes the decomposition is unique.
inline std::optional<gap_symbol> gapw_value_decode(const class_set& v, const gap_word& w,
                                                   node_counter* nc = nullptr) {
  for (const gap_symbol& sym : gapw_symbols(w, false, nc)) {
    if (nc) nc->tick();
    if (gapw_symbol_value(sym, w) == v) return sym;
  }
  return std::nullopt;
}

// The bracket of w as a family of combined cell sets. Symbols with identical
// values are one bracket element; the encoded one-class words are a separate
// view used by the encode/decode machinery, not by the orders below.
inline std::set<class_set> gapw_bracket_values(const gap_word& w, bool relaxed,
                                               node_counter* nc = nullptr) {
  std::set<class_set> vals;
  for (const gap_symbol& sym : gapw_symbols(w, relaxed, nc)) vals.insert(gapw_symbol_value(sym, w));
  return vals;
}

// b <= a as bracket containment: every strict symbol value over b is a strict
// symbol value over a. Composites b = a . c satisfy this because each free
// class of b is a union of whole free classes of a, and tetris distributes
// over unions. Budget exhaustion yields an indeterminate answer.
inline std::optional<bool> gapw_le(const gap_word& b, const gap_word& a,
                                   std::size_t max_nodes = budget{}.max_nodes) {
  expect(b.t == a.t && b.m == a.m, "le: mixed word kinds");
  try {
    node_counter nc(max_nodes);
    std::set<class_set> vb = gapw_bracket_values(b, false, &nc);
    std::set<class_set> va = gapw_bracket_values(a, false, &nc);
    return std::includes(va.begin(), va.end(), vb.begin(), vb.end());
  } catch (const budget_error&) {
    return std::nullopt;
  }
}

// a <=_fin b: equal rectangles and every class of a (constants included) is a
// relaxed bracket value over b.
inline bool gapw_le_fin(const gap_word& a, const gap_word& b, node_counter* nc = nullptr) {
  expect(a.t == b.t && a.m == b.m, "le_fin: mixed word kinds");
  if (a.rows != b.rows) return false;
  if (a.empty()) return true;
  std::set<class_set> vals = gapw_bracket_values(b, true, nc);
  for (std::size_t j = 0; j < a.class_count(); ++j)
    if (!vals.count(gapw_class_of(a, j))) return false;
  return true;
}

inline bool gapw_is_restriction(const gap_word& a, const gap_word& b) {
  return a.k <= b.k && a == gapw_restrict(a.k, b);
}

// Depth of a inside b: the unique n with a = r_n(b) . c for some c, if any.
// Equal rectangles pin n = extent of a relative to b's class minima; scan all
// candidate levels and solve for the witness directly.
inline std::optional<std::size_t> gapw_depth(const gap_word& a, const gap_word& b);

// Projected point: a word collapsed onto t+k classes together with the row
// cuts where the collapsed classes of some (equivalently any) lift begin.
// cuts[j] is the first row of collapsed class t+k+j; the final entry is the
// row count. Collapsed cells read 0, so the word itself stays valid and the
// cut rows carry the extra structure.
struct gap_point {
  gap_word w;
  std::vector<std::size_t> cuts;
  std::size_t proj_k() const { return w.k; }
  std::size_t depth() const { return w.k + cuts.size() - 1; }
  auto operator<=>(const gap_point&) const = default;
};

// Validity: the word is a valid element, free cells all sit below the first
// cut, and each cut interval can host its collapsed class: the cut row has a
// zero cell, and the class can attain column m-1 inside the interval (at the
// cut row itself only via its column m-1 cell, since one row holds at most
// one cell of the class).
inline bool gapw_point_ok(const gap_point& p) {
  const gap_word& w = p.w;
  if (w.t == 0 || w.m == 0 || w.k < 1) return false;
  if (w.cells.size() != w.rows * w.m) return false;
  const std::size_t cc = w.t + w.k;
  for (std::size_t v : w.cells)
    if (v >= cc) return false;
  if (gapw_check(w) != 0) return false;
  if (p.cuts.empty() || p.cuts.back() != w.rows) return false;
  for (std::size_t j = 0; j + 1 < p.cuts.size(); ++j)
    if (p.cuts[j] >= p.cuts[j + 1]) return false;
  for (std::size_t i = p.cuts.front(); i < w.rows; ++i)
    for (std::size_t l = 0; l < w.m; ++l)
      if (w.at(i, l) >= w.t) return false;
  for (std::size_t j = 0; j + 1 < p.cuts.size(); ++j) {
    const std::size_t c = p.cuts[j], next = p.cuts[j + 1];
    bool zero_at_cut = false;
    for (std::size_t l = 0; l < w.m; ++l) zero_at_cut = zero_at_cut || w.at(c, l) == 0;
    if (!zero_at_cut) return false;
    bool last_col = w.at(c, w.m - 1) == 0;
    for (std::size_t r = c + 1; r < next && !last_col; ++r) last_col = w.at(r, w.m - 1) == 0;
    if (!last_col) return false;
  }
  return true;
}

// Projection onto the first k free classes; the cut rows are the minima of
// the collapsed classes plus the rectangle end.
inline gap_point gapw_project(std::size_t k, const gap_word& w) {
  expect(k >= 1, "projection extent must be at least 1");
  if (k > w.k) throw domain_error("projection extent exceeds the class range");
  gap_point p;
  p.w = w;
  p.w.k = k;
  for (std::size_t& v : p.w.cells)
    if (v >= w.t + k) v = 0;
  for (std::size_t j = k; j < w.k; ++j) {
    std::size_t r = 0;
    while (r < w.rows) {
      bool hit = false;
      for (std::size_t l = 0; l < w.m && !hit; ++l) hit = w.at(r, l) == w.t + j;
      if (hit) break;
      ++r;
    }
    expect(r < w.rows, "projected class unattained");
    p.cuts.push_back(r);
  }
  p.cuts.push_back(w.rows);
  return p;
}

inline gap_point gapw_as_point(const gap_word& w) { return gap_point{w, {w.rows}}; }

// s_approx at a level of the stored chain: row prefix at the cut, cut list
// shortened to match. The final kept cut doubles as the new rectangle end.
inline gap_point gapw_truncate_point(const gap_point& p, std::size_t level) {
  if (level < p.proj_k()) throw domain_error("level below the projection extent");
  if (level > p.depth()) throw budget_error("level beyond the stored truncation");
  const std::size_t idx = level - p.proj_k();
  gap_point r;
  r.w = gap_word{p.w.t, p.w.m, p.w.k, p.cuts[idx], {}};
  r.w.cells.assign(p.w.cells.begin(),
                   p.w.cells.begin() + static_cast<std::ptrdiff_t>(p.cuts[idx] * p.w.m));
  r.cuts.assign(p.cuts.begin(), p.cuts.begin() + static_cast<std::ptrdiff_t>(idx) + 1);
  return r;
}

// Composite of points: cells compose through the outer word's last-column
// read; interior cuts of the inner point land at the first outer row whose
// class index reaches them (class minima increase, so that row is the
// minimum of the cut class itself); outer cuts follow unchanged.
inline gap_point gapw_compose_points(const gap_point& outer, const gap_point& inner) {
  expect(outer.w.t == inner.w.t && outer.w.m == inner.w.m, "compose: mixed word kinds");
  expect(inner.w.rows == outer.w.class_count(), "compose: inner rows must equal outer class range");
  const std::size_t m = outer.w.m;
  gap_point r;
  r.w = gap_word{outer.w.t, m, inner.w.k, outer.w.rows, {}};
  r.w.cells.reserve(outer.w.cells.size());
  for (std::size_t v : outer.w.cells) r.w.cells.push_back(inner.w.at(v, m - 1));
  for (std::size_t j = 0; j + 1 < inner.cuts.size(); ++j) {
    const std::size_t c = inner.cuts[j];
    std::size_t row = 0;
    while (row < outer.w.rows) {
      bool hit = false;
      for (std::size_t l = 0; l < m && !hit; ++l) hit = outer.w.at(row, l) == c;
      if (hit) break;
      ++row;
    }
    expect(row < outer.w.rows, "inner cut class unattained in the outer word");
    r.cuts.push_back(row);
  }
  r.cuts.insert(r.cuts.end(), outer.cuts.begin(), outer.cuts.end());
  return r;
}

inline gap_point gapw_compose_point(const gap_word& outer, const gap_point& x) {
  return gapw_compose_points(gapw_as_point(outer), x);
}

inline bool gapw_point_lt(const gap_point& a, const gap_point& b) {
  if (a.w.t != b.w.t || a.w.m != b.w.m || a.proj_k() != b.proj_k()) return false;
  if (a.depth() >= b.depth()) return false;
  return a == gapw_truncate_point(b, a.depth());
}

// Canonical lift: realize collapsed class t+k+j inside its cut interval with
// the fewest cells, preferring the single cell (cut row, m-1).
inline gap_word gapw_point_lift(const gap_point& p) {
  expect(gapw_point_ok(p), "invalid projected point");
  gap_word a = p.w;
  a.k = p.w.k + p.cuts.size() - 1;
  for (std::size_t j = 0; j + 1 < p.cuts.size(); ++j) {
    const std::size_t c = p.cuts[j], next = p.cuts[j + 1];
    const std::size_t cls = p.w.t + p.w.k + j;
    if (p.w.at(c, p.w.m - 1) == 0) {
      a.at(c, p.w.m - 1) = cls;
      continue;
    }
    std::size_t l0 = 0;
    while (p.w.at(c, l0) != 0) ++l0;
    a.at(c, l0) = cls;
    std::size_t r = c + 1;
    while (p.w.at(r, p.w.m - 1) != 0) ++r;
    expect(r < next, "cut interval cannot host its class");
    a.at(r, p.w.m - 1) = cls;
  }
  gapw_validate(a);
  return a;
}

// All projected points with the given extent and projection class range, as
// projection images of enumerated elements.
inline std::vector<gap_point> gapw_enumerate_points(std::size_t t, std::size_t m, std::size_t k,
                                                    std::size_t extent,
                                                    node_counter* nc = nullptr) {
  expect(k >= 1, "projection extent must be at least 1");
  std::vector<gap_point> out;
  for (std::size_t d = k; d <= extent; ++d)
    for (const gap_word& w : gapw_enumerate(t, m, extent, d, nc)) {
      if (nc) nc->tick();
      out.push_back(gapw_project(k, w));
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::optional<std::size_t> gapw_depth(const gap_word& a, const gap_word& b) {
  if (a.t != b.t || a.m != b.m) return std::nullopt;
  if (a.empty()) return 0;
  for (std::size_t n = 1; n <= b.k; ++n) {
    const gap_word base = gapw_restrict(n, b);
    if (base.rows != a.rows) continue;
    // Solve a = base . c cellwise: the value of c at class x of base is
    // forced by a at the cells of x.
    std::vector<std::size_t> cvals(base.class_count(), SIZE_MAX);
    bool ok = true;
    for (std::size_t i = 0; i < base.rows && ok; ++i)
      for (std::size_t l = 0; l < base.m && ok; ++l) {
        const std::size_t x = base.at(i, l);
        if (cvals[x] == SIZE_MAX) cvals[x] = a.at(i, l);
        ok = cvals[x] == a.at(i, l);
      }
    if (!ok) continue;
    gap_word c{a.t, a.m, a.k, base.class_count(), {}};
    c.cells.assign(base.class_count() * a.m, 0);
    for (std::size_t i = 0; i < c.rows; ++i) {
      for (std::size_t l = 0; l + 1 < a.m; ++l) c.at(i, l) = i < a.t ? i : 0;
      c.at(i, a.m - 1) = i < a.t ? i : cvals[i];
    }
    // Only column m-1 of c is read by composition; the witness's other
    // columns are filled with constants, which can break its validity even
    // when the last column is forced. Accept only a fully valid witness.
    if (gapw_check(c) != 0) continue;
    if (gapw_compose(base, c) == a) return n;
  }
  return std::nullopt;
}

// Single-column words are ascending parameter words; the bijection forgets
// the column coordinate.
inline param_word gapw_to_param(const gap_word& w) {
  expect(w.m == 1, "bijection applies to single-column words");
  return param_word{w.t, true, w.k, w.cells};
}

inline gap_word gapw_from_param(const param_word& a) {
  expect(a.ascending && a.t >= 1, "bijection applies to ascending words with t >= 1");
  gap_word w{a.t, 1, a.k, a.length(), a.vals};
  if (!w.empty()) gapw_validate(w);
  return w;
}

inline json gapw_to_json(const gap_word& w) {
  json j;
  j["schema"] = schema_tag;
  j["space"] = "gapw";
  j["t"] = w.t;
  j["m"] = w.m;
  j["n"] = w.extent();
  j["k"] = w.k;
  j["data"] = w.cells;
  return j;
}

inline gap_word gapw_from_json(const json& j) {
  expect(j.is_object() && j.value("space", "") == "gapw", "expected a gap word object");
  gap_word w;
  w.t = j.at("t").get<std::size_t>();
  w.m = j.at("m").get<std::size_t>();
  w.k = j.at("k").get<std::size_t>();
  w.cells = j.at("data").get<std::vector<std::size_t>>();
  expect(w.m >= 1 && w.cells.size() % w.m == 0, "cell count must be a multiple of m");
  w.rows = w.cells.size() / w.m;
  gapw_validate(w);
  return w;
}

inline json gapw_point_to_json(const gap_point& p) {
  json j = gapw_to_json(p.w);
  j["space"] = "gapw_point";
  j["cuts"] = p.cuts;
  j["depth"] = p.depth();
  return j;
}

inline gap_point gapw_point_from_json(const json& j) {
  expect(j.is_object() && j.value("space", "") == "gapw_point", "expected a gap point object");
  gap_point p;
  p.w.t = j.at("t").get<std::size_t>();
  p.w.m = j.at("m").get<std::size_t>();
  p.w.k = j.at("k").get<std::size_t>();
  p.w.cells = j.at("data").get<std::vector<std::size_t>>();
  expect(p.w.m >= 1 && p.w.cells.size() % p.w.m == 0, "cell count must be a multiple of m");
  p.w.rows = p.w.cells.size() / p.w.m;
  p.cuts = j.at("cuts").get<std::vector<std::size_t>>();
  expect(gapw_point_ok(p), "invalid projected point");
  return p;
}

inline json gapw_symbol_to_json(const gap_symbol& sym) {
  json j;
  j["schema"] = schema_tag;
  j["space"] = "gapw_symbol";
  json terms = json::array();
  for (auto [l, n] : sym.terms) terms.push_back(json::array({l, n}));
  j["terms"] = terms;
  return j;
}

inline gap_symbol gapw_symbol_from_json(const json& j) {
  expect(j.is_object() && j.value("space", "") == "gapw_symbol", "expected a symbol object");
  gap_symbol sym;
  for (const json& term : j.at("terms")) {
    expect(term.is_array() && term.size() == 2, "symbol term must be a shift/class pair");
    sym.terms.emplace_back(term[0].get<std::size_t>(), term[1].get<std::size_t>());
  }
  return sym;
}

}  // namespace trs
