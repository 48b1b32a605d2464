#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"

namespace trs {

// Prime field GF(q) with modular arithmetic, validated exhaustively on use.
struct prime_field {
  std::size_t q = 2;

  std::size_t add(std::size_t a, std::size_t b) const { return (a + b) % q; }
  std::size_t mul(std::size_t a, std::size_t b) const { return (a * b) % q; }
  std::size_t neg(std::size_t a) const { return (q - a % q) % q; }
  std::size_t inv(std::size_t a) const {
    expect(a % q != 0, "zero has no inverse");
    for (std::size_t b = 1; b < q; ++b)
      if (mul(a, b) == 1) return b;
    throw domain_error("an element has no inverse");
  }
  auto operator<=>(const prime_field&) const = default;
};

inline void field_validate(const prime_field& f) {
  expect(f.q >= 2 && f.q <= 13, "field characteristic must lie in [2, 13]");
  for (std::size_t d = 2; d < f.q; ++d)
    expect(f.q % d != 0, "field characteristic must be prime");
  for (std::size_t a = 0; a < f.q; ++a) {
    expect(f.add(a, 0) == a && f.mul(a, 1) == a && f.mul(a, 0) == 0, "identity laws fail");
    expect(f.add(a, f.neg(a)) == 0, "additive inverse fails");
    if (a != 0) expect(f.mul(a, f.inv(a)) == 1, "multiplicative inverse fails");
    for (std::size_t b = 0; b < f.q; ++b) {
      expect(f.add(a, b) == f.add(b, a) && f.mul(a, b) == f.mul(b, a), "commutativity fails");
      for (std::size_t c = 0; c < f.q; ++c) {
        expect(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)), "addition not associative");
        expect(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)), "multiplication not associative");
        expect(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)), "distributivity fails");
      }
    }
  }
}

// Finite truncation of a reduced column echelon matrix: rows x cols entries
// over GF(q), stored row-major. Columns play the class role.
struct ech_matrix {
  prime_field f;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> entries;

  std::size_t at(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }
  std::size_t& at(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
  bool empty() const { return rows == 0 && cols == 0; }
  auto operator<=>(const ech_matrix&) const = default;
};

// Least nonzero row of a column; an all-zero column has no pivot inside the
// truncation, which is a budget condition, not a shape error.
inline std::size_t ech_pivot(const ech_matrix& w, std::size_t n) {
  expect(n < w.cols, "pivot column outside the matrix");
  for (std::size_t r = 0; r < w.rows; ++r)
    if (w.at(r, n) != 0) return r;
  throw budget_error("column has no pivot inside the truncation");
}

// 0 ok; 1 a column is zero within the truncation; 2 pivot rows not strictly
// increasing; 3 a pivot entry differs from 1; 4 a pivot row is nonzero in
// another column.
inline int ech_check(const ech_matrix& w) {
  field_validate(w.f);
  expect(w.entries.size() == w.rows * w.cols, "entry count must be rows x cols");
  for (std::size_t v : w.entries) expect(v < w.f.q, "entry outside the field");
  std::vector<std::size_t> piv(w.cols);
  for (std::size_t c = 0; c < w.cols; ++c) {
    std::size_t r = 0;
    while (r < w.rows && w.at(r, c) == 0) ++r;
    if (r == w.rows) return 1;
    piv[c] = r;
  }
  for (std::size_t c = 0; c + 1 < w.cols; ++c)
    if (piv[c] >= piv[c + 1]) return 2;
  for (std::size_t c = 0; c < w.cols; ++c)
    if (w.at(piv[c], c) != 1) return 3;
  for (std::size_t c = 0; c < w.cols; ++c)
    for (std::size_t d = 0; d < w.cols; ++d)
      if (d != c && w.at(piv[c], d) != 0) return 4;
  return 0;
}

inline void ech_validate(const ech_matrix& w) {
  int c = ech_check(w);
  if (c != 0)
    throw domain_error("invalid reduced echelon matrix (condition " + std::to_string(c) + ")");
}

inline ech_matrix ech_identity(const prime_field& f, std::size_t n) {
  ech_matrix w{f, n, n, std::vector<std::size_t>(n * n, 0)};
  for (std::size_t i = 0; i < n; ++i) w.at(i, i) = 1;
  return w;
}

// Matrix product over the field. The product of reduced column echelon
// matrices is again reduced column echelon (pivot rows compose through the
// inner pivot map), so the result validates whenever the inputs do.
inline ech_matrix ech_compose(const ech_matrix& outer, const ech_matrix& inner) {
  expect(outer.f == inner.f, "compose needs a common field");
  expect(inner.rows == outer.cols, "compose: inner rows must equal outer columns");
  ech_matrix r{outer.f, outer.rows, inner.cols,
               std::vector<std::size_t>(outer.rows * inner.cols, 0)};
  for (std::size_t i = 0; i < outer.rows; ++i)
    for (std::size_t j = 0; j < inner.cols; ++j) {
      std::size_t acc = 0;
      for (std::size_t l = 0; l < outer.cols; ++l)
        acc = r.f.add(acc, r.f.mul(outer.at(i, l), inner.at(l, j)));
      r.at(i, j) = acc;
    }
  ech_validate(r);
  return r;
}

// r_n: the first n columns cut at the pivot row of the first dropped column.
// At n == cols the matrix is its own restriction; r_0 is the empty matrix.
inline ech_matrix ech_restrict(std::size_t n, const ech_matrix& w) {
  if (n > w.cols) throw budget_error("restriction depth exceeds the truncation");
  if (n == w.cols) return w;
  if (n == 0) return ech_matrix{w.f, 0, 0, {}};
  const std::size_t cut = ech_pivot(w, n);
  ech_matrix r{w.f, cut, n, std::vector<std::size_t>(cut * n, 0)};
  for (std::size_t i = 0; i < cut; ++i)
    for (std::size_t c = 0; c < n; ++c) r.at(i, c) = w.at(i, c);
  ech_validate(r);
  return r;
}

inline bool ech_is_restriction(const ech_matrix& a, const ech_matrix& b) {
  if (a.f != b.f || a.cols > b.cols) return false;
  return a == ech_restrict(a.cols, b);
}

// Coefficients x with b.x == target, solved by Gauss-Jordan elimination on
// the augmented system. Free columns take coefficient 0.
inline std::optional<std::vector<std::size_t>> ech_solve(const ech_matrix& b,
                                                         const std::vector<std::size_t>& target) {
  expect(target.size() == b.rows, "target length must equal the row window");
  const std::size_t width = b.cols + 1;
  std::vector<std::size_t> m(b.rows * width, 0);
  for (std::size_t r = 0; r < b.rows; ++r) {
    for (std::size_t c = 0; c < b.cols; ++c) m[r * width + c] = b.at(r, c);
    m[r * width + b.cols] = target[r];
  }
  const std::size_t none = b.rows;
  std::vector<std::size_t> pivot_row(b.cols, none);
  std::size_t lead = 0;
  for (std::size_t c = 0; c < b.cols && lead < b.rows; ++c) {
    std::size_t r = lead;
    while (r < b.rows && m[r * width + c] == 0) ++r;
    if (r == b.rows) continue;
    for (std::size_t l = 0; l < width; ++l) std::swap(m[r * width + l], m[lead * width + l]);
    const std::size_t scale = b.f.inv(m[lead * width + c]);
    for (std::size_t l = 0; l < width; ++l) m[lead * width + l] = b.f.mul(m[lead * width + l], scale);
    for (std::size_t rr = 0; rr < b.rows; ++rr) {
      if (rr == lead || m[rr * width + c] == 0) continue;
      const std::size_t factor = b.f.neg(m[rr * width + c]);
      for (std::size_t l = 0; l < width; ++l)
        m[rr * width + l] = b.f.add(m[rr * width + l], b.f.mul(factor, m[lead * width + l]));
    }
    pivot_row[c] = lead;
    ++lead;
  }
  for (std::size_t r = 0; r < b.rows; ++r) {
    bool zero = true;
    for (std::size_t c = 0; c < b.cols && zero; ++c) zero = m[r * width + c] == 0;
    if (zero && m[r * width + b.cols] != 0) return std::nullopt;
  }
  std::vector<std::size_t> x(b.cols, 0);
  for (std::size_t c = 0; c < b.cols; ++c)
    if (pivot_row[c] != none) x[c] = m[pivot_row[c] * width + b.cols];
  return x;
}

// Window-relative span membership: every column of a lies in the linear span
// of the columns of b over the shared row window.
inline bool ech_le(const ech_matrix& a, const ech_matrix& b) {
  expect(a.f == b.f, "le: mixed fields");
  if (a.rows != b.rows) return false;
  for (std::size_t c = 0; c < a.cols; ++c) {
    std::vector<std::size_t> col(a.rows);
    for (std::size_t r = 0; r < a.rows; ++r) col[r] = a.at(r, c);
    if (!ech_solve(b, col)) return false;
  }
  return true;
}

// a is below b at the finite level exactly when the solved coefficient
// witness is itself a valid reduced echelon matrix with a = b composed with
// it; independent columns of b make the witness unique.
inline bool ech_le_fin(const ech_matrix& a, const ech_matrix& b) {
  ech_validate(a);
  ech_validate(b);
  if (a.f != b.f || a.rows != b.rows) return false;
  ech_matrix c{a.f, b.cols, a.cols, std::vector<std::size_t>(b.cols * a.cols, 0)};
  for (std::size_t j = 0; j < a.cols; ++j) {
    std::vector<std::size_t> col(a.rows);
    for (std::size_t r = 0; r < a.rows; ++r) col[r] = a.at(r, j);
    auto x = ech_solve(b, col);
    if (!x) return false;
    for (std::size_t i = 0; i < b.cols; ++i) c.at(i, j) = (*x)[i];
  }
  return ech_check(c) == 0;
}

// Depth of a inside b: the unique n with a = r_n(b) . c for some c, if any.
// Pivot rows strictly increase, so restriction windows are distinct and the
// row count of a pins the only candidate level.
inline std::optional<std::size_t> ech_depth(const ech_matrix& a, const ech_matrix& b) {
  if (a.f != b.f) return std::nullopt;
  if (a.empty()) return 0;
  for (std::size_t n = 1; n <= b.cols; ++n) {
    const ech_matrix base = ech_restrict(n, b);
    if (base.rows != a.rows) continue;
    if (ech_le_fin(a, base)) return n;
  }
  return std::nullopt;
}

// All reduced column echelon matrices with the given window, in entry-wise
// lexicographic order: choose strictly increasing pivot rows, then fill the
// free cells (below the own pivot, off other pivot rows).
inline std::vector<ech_matrix> ech_enumerate(const prime_field& f, std::size_t rows,
                                             std::size_t cols, node_counter* nc = nullptr) {
  field_validate(f);
  std::vector<ech_matrix> out;
  std::vector<std::size_t> piv(cols, 0);
  auto fill = [&](auto&& self, ech_matrix& w, std::size_t idx) -> void {
    if (nc) nc->tick();
    if (idx == w.entries.size()) {
      out.push_back(w);
      return;
    }
    const std::size_t r = idx / cols, c = idx % cols;
    std::size_t owner = cols;
    for (std::size_t d = 0; d < cols; ++d)
      if (piv[d] == r) {
        owner = d;
        break;
      }
    if (owner != cols || r < piv[c]) {
      w.entries[idx] = owner == c ? 1 : 0;
      self(self, w, idx + 1);
      return;
    }
    for (std::size_t v = 0; v < f.q; ++v) {
      w.entries[idx] = v;
      self(self, w, idx + 1);
    }
    w.entries[idx] = 0;
  };
  auto pick = [&](auto&& self, std::size_t c, std::size_t lo) -> void {
    if (c == cols) {
      ech_matrix w{f, rows, cols, std::vector<std::size_t>(rows * cols, 0)};
      fill(fill, w, 0);
      return;
    }
    for (std::size_t r = lo; r + (cols - c) <= rows; ++r) {
      piv[c] = r;
      self(self, c + 1, r + 1);
    }
  };
  if (cols == 0) {
    out.push_back(ech_matrix{f, rows, 0, {}});
    return out;
  }
  pick(pick, 0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

// Projected point: the first k columns over the full row window, plus the
// pivot rows of the dropped columns as the cut chain, closed by the window.
struct ech_point {
  ech_matrix w;
  std::vector<std::size_t> cuts;

  std::size_t proj_k() const { return w.cols; }
  std::size_t depth() const { return w.cols + cuts.size() - 1; }
  auto operator<=>(const ech_point&) const = default;
};

// Validity: the matrix is a valid truncation, the cut chain is strictly
// increasing past the last kept pivot and ends at the window, and every
// interior cut row is zero in all kept columns, so a dropped column can
// anchor its pivot there without breaking reducedness.
inline bool ech_point_ok(const ech_point& p) {
  const ech_matrix& w = p.w;
  if (w.cols < 1) return false;
  try {
    if (ech_check(w) != 0) return false;
  } catch (const domain_error&) {
    return false;
  }
  if (p.cuts.empty() || p.cuts.back() != w.rows) return false;
  for (std::size_t j = 0; j + 1 < p.cuts.size(); ++j)
    if (p.cuts[j] >= p.cuts[j + 1]) return false;
  if (p.cuts.front() <= ech_pivot(w, w.cols - 1)) return false;
  for (std::size_t j = 0; j + 1 < p.cuts.size(); ++j)
    for (std::size_t c = 0; c < w.cols; ++c)
      if (w.at(p.cuts[j], c) != 0) return false;
  return true;
}

inline ech_point ech_project(std::size_t k, const ech_matrix& w) {
  expect(k >= 1, "projection extent must be at least 1");
  if (k > w.cols) throw domain_error("projection extent exceeds the column range");
  ech_point p;
  p.w = ech_matrix{w.f, w.rows, k, std::vector<std::size_t>(w.rows * k, 0)};
  for (std::size_t r = 0; r < w.rows; ++r)
    for (std::size_t c = 0; c < k; ++c) p.w.at(r, c) = w.at(r, c);
  for (std::size_t c = k; c < w.cols; ++c) p.cuts.push_back(ech_pivot(w, c));
  p.cuts.push_back(w.rows);
  return p;
}

inline ech_point ech_as_point(const ech_matrix& w) { return ech_point{w, {w.rows}}; }

// s_approx at a level of the stored chain: row prefix at the cut, chain
// shortened to match.
inline ech_point ech_truncate_point(const ech_point& p, std::size_t level) {
  if (level < p.proj_k()) throw domain_error("level below the projection extent");
  if (level > p.depth()) throw budget_error("level beyond the stored truncation");
  const std::size_t idx = level - p.proj_k();
  const std::size_t cut = p.cuts[idx];
  ech_point r;
  r.w = ech_matrix{p.w.f, cut, p.w.cols, std::vector<std::size_t>(cut * p.w.cols, 0)};
  for (std::size_t i = 0; i < cut; ++i)
    for (std::size_t c = 0; c < p.w.cols; ++c) r.w.at(i, c) = p.w.at(i, c);
  r.cuts.assign(p.cuts.begin(), p.cuts.begin() + static_cast<std::ptrdiff_t>(idx) + 1);
  return r;
}

// Composite of an element-shaped outer point with an inner point: the
// matrices multiply, interior cuts of the inner point land at the outer
// pivot rows of their cut columns, outer cuts follow unchanged.
inline ech_point ech_compose_points(const ech_point& outer, const ech_point& inner) {
  expect(outer.w.f == inner.w.f, "compose needs a common field");
  expect(inner.w.rows == outer.w.cols, "compose: inner rows must equal outer columns");
  ech_point r;
  r.w = ech_matrix{outer.w.f, outer.w.rows, inner.w.cols,
                   std::vector<std::size_t>(outer.w.rows * inner.w.cols, 0)};
  for (std::size_t i = 0; i < outer.w.rows; ++i)
    for (std::size_t j = 0; j < inner.w.cols; ++j) {
      std::size_t acc = 0;
      for (std::size_t l = 0; l < outer.w.cols; ++l)
        acc = r.w.f.add(acc, r.w.f.mul(outer.w.at(i, l), inner.w.at(l, j)));
      r.w.at(i, j) = acc;
    }
  for (std::size_t j = 0; j + 1 < inner.cuts.size(); ++j)
    r.cuts.push_back(ech_pivot(outer.w, inner.cuts[j]));
  r.cuts.insert(r.cuts.end(), outer.cuts.begin(), outer.cuts.end());
  return r;
}

inline ech_point ech_compose_point(const ech_matrix& outer, const ech_point& x) {
  return ech_compose_points(ech_as_point(outer), x);
}

inline bool ech_point_lt(const ech_point& a, const ech_point& b) {
  if (a.w.f != b.w.f || a.proj_k() != b.proj_k()) return false;
  if (a.depth() >= b.depth()) return false;
  return a == ech_truncate_point(b, a.depth());
}

// Canonical lift: append a standard basis column pivoted at each interior
// cut row, realizing each dropped column with the fewest entries.
inline ech_matrix ech_point_lift(const ech_point& p) {
  expect(ech_point_ok(p), "invalid projected point");
  const std::size_t extra = p.cuts.size() - 1;
  ech_matrix a{p.w.f, p.w.rows, p.w.cols + extra,
               std::vector<std::size_t>(p.w.rows * (p.w.cols + extra), 0)};
  for (std::size_t r = 0; r < p.w.rows; ++r)
    for (std::size_t c = 0; c < p.w.cols; ++c) a.at(r, c) = p.w.at(r, c);
  for (std::size_t j = 0; j < extra; ++j) a.at(p.cuts[j], p.w.cols + j) = 1;
  ech_validate(a);
  return a;
}

// All projected points with the given column extent, as projection images of
// enumerated matrices over the row window.
inline std::vector<ech_point> ech_enumerate_points(const prime_field& f, std::size_t k,
                                                   std::size_t rows, node_counter* nc = nullptr) {
  expect(k >= 1, "projection extent must be at least 1");
  std::vector<ech_point> out;
  for (std::size_t d = k; d <= rows; ++d)
    for (const ech_matrix& w : ech_enumerate(f, rows, d, nc)) {
      if (nc) nc->tick();
      out.push_back(ech_project(k, w));
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline json ech_to_json(const ech_matrix& w) {
  json j;
  j["schema"] = schema_tag;
  j["space"] = "ech";
  j["q"] = w.f.q;
  j["rows"] = w.rows;
  j["cols"] = w.cols;
  j["entries"] = w.entries;
  return j;
}

inline ech_matrix ech_from_json(const json& j) {
  expect(j.is_object() && j.value("space", "") == "ech", "expected an echelon matrix object");
  ech_matrix w;
  w.f.q = j.at("q").get<std::size_t>();
  w.rows = j.at("rows").get<std::size_t>();
  w.cols = j.at("cols").get<std::size_t>();
  w.entries = j.at("entries").get<std::vector<std::size_t>>();
  ech_validate(w);
  return w;
}

inline json ech_point_to_json(const ech_point& p) {
  json j = ech_to_json(p.w);
  j["space"] = "ech_point";
  j["cuts"] = p.cuts;
  j["depth"] = p.depth();
  return j;
}

inline ech_point ech_point_from_json(const json& j) {
  expect(j.is_object() && j.value("space", "") == "ech_point", "expected a point object");
  ech_point p;
  p.w.f.q = j.at("q").get<std::size_t>();
  p.w.rows = j.at("rows").get<std::size_t>();
  p.w.cols = j.at("cols").get<std::size_t>();
  p.w.entries = j.at("entries").get<std::vector<std::size_t>>();
  p.cuts = j.at("cuts").get<std::vector<std::size_t>>();
  expect(ech_point_ok(p), "invalid projected point");
  return p;
}

}  // namespace trs
