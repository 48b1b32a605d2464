#pragma once

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "block_seq.hpp"
#include "common.hpp"
#include "space.hpp"
#include "words_hj.hpp"

// Finite witness searches over the truncated spaces. Every mode follows the
// same discipline: enumerate candidate refinements of a bound word in one
// canonical order, test each for monochromaticity of its fiber, and return
// the first that passes. The canonical order is (weight, serialized form),
// so reports are reproducible byte for byte; worker threads may only skip
// work that provably cannot beat the current best index, never reorder it.
//
// Budgets are charged in two phases. Enumeration ticks a node counter and a
// budget_error there aborts the whole search with a budget report. The scan
// phase then tests at most the remaining number of candidates; that limit is
// fixed before any test runs, so thread count and scheduling cannot change
// which report comes back. found = false never disproves existence: a larger
// truncation or budget may still hold a witness, and the report says which
// of the two stopped the search.

namespace trs {

struct search_budget {
  std::size_t max_nodes = budget{}.max_nodes;
  std::size_t threads = 1;
};

struct witness_report {
  std::string mode;
  std::string space;
  bool found = false;
  json witness;
  std::size_t nodes_explored = 0;
  bool verified = false;
  bool exhausted = false;
  std::string note;

  bool operator==(const witness_report&) const = default;
};

inline json witness_report_to_json(const witness_report& r) {
  json j;
  j["schema"] = schema_tag;
  j["mode"] = r.mode;
  j["space"] = r.space;
  j["found"] = r.found;
  j["witness"] = r.witness;
  j["nodes_explored"] = r.nodes_explored;
  j["verified"] = r.verified;
  j["exhausted"] = r.exhausted;
  j["note"] = r.note;
  return j;
}

// 0 witness found and independently verified, 1 internal failure, 2 candidate
// list exhausted without a witness, 3 node budget stopped the search early.
inline int witness_exit_code(const witness_report& r) {
  if (r.found && r.verified) return 0;
  if (r.found) return 1;
  if (r.exhausted) return 2;
  return 3;
}

inline std::string witness_report_summary(const witness_report& r) {
  std::string s = r.mode + " over " + r.space + ": ";
  if (r.found) {
    s += "witness at canonical index " + std::to_string(r.nodes_explored - 1);
    s += r.verified ? ", verified" : ", FAILED re-verification";
  } else if (r.exhausted) {
    s += "no witness among " + std::to_string(r.nodes_explored) + " candidates";
  } else {
    s += "stopped by budget after " + std::to_string(r.nodes_explored) + " candidates";
  }
  if (!r.note.empty()) s += " (" + r.note + ")";
  return s;
}

namespace detail {

inline param_word parse_word(const param_space& sp, const json& j) {
  auto w = param_from_json(j);
  sp.require_kind(w);
  return w;
}
inline gap_word parse_word(const gapw_space& sp, const json& j) {
  auto w = gapw_from_json(j);
  sp.require_kind(w);
  return w;
}
inline gpart_word parse_word(const gpart_space& sp, const json& j) {
  auto w = gpart_from_json(j);
  sp.require_kind(w);
  return w;
}
inline ech_matrix parse_word(const ech_space& sp, const json& j) {
  auto w = ech_from_json(j);
  sp.require_kind(w);
  return w;
}

inline param_point parse_point(const param_space&, const json& j) {
  return param_point_from_json(j);
}
inline gap_point parse_point(const gapw_space&, const json& j) {
  return gapw_point_from_json(j);
}
inline gpart_point parse_point(const gpart_space&, const json& j) {
  return gpart_point_from_json(j);
}
inline ech_point parse_point(const ech_space&, const json& j) { return ech_point_from_json(j); }

// Sort by (weight, serialized form) and drop duplicates. Serialization is
// injective on valid words, so equal dumps mean equal words.
template <class Space>
void canonical_order(const Space& sp, std::vector<typename Space::word_t>& ws) {
  std::vector<std::pair<std::pair<std::size_t, std::string>, std::size_t>> keys;
  keys.reserve(ws.size());
  for (std::size_t i = 0; i < ws.size(); ++i)
    keys.emplace_back(std::make_pair(sp.weight(ws[i]), sp.word_json(ws[i]).dump()), i);
  std::sort(keys.begin(), keys.end());
  std::vector<typename Space::word_t> out;
  out.reserve(ws.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i > 0 && keys[i].first.second == keys[i - 1].first.second) continue;
    out.push_back(std::move(ws[keys[i].second]));
  }
  ws = std::move(out);
}

// All composites bound . C for inner words C over the bound's class window
// with at least min_k classes, in canonical order. These are exactly the
// full-window refinements reachable inside the truncation.
template <class Space>
std::vector<typename Space::word_t> refinements(const Space& sp,
                                                const typename Space::word_t& bound,
                                                std::size_t min_k, node_counter* nc) {
  std::vector<typename Space::word_t> out;
  const std::size_t kb = sp.classes(bound);
  for (std::size_t kc = std::max<std::size_t>(min_k, 1); kc <= kb; ++kc)
    for (const auto& c : sp.words(kb, kc, nc)) {
      if (nc) nc->tick();
      out.push_back(sp.compose(bound, c));
    }
  canonical_order(sp, out);
  return out;
}

struct scan_result {
  std::optional<std::size_t> winner;
  std::size_t limit = 0;
  bool budget_cut = false;
};

// First index in [0, min(count, max_tests)) whose test passes. The limit is
// fixed up front; a hint names an index already known to pass, which bounds
// the scan without changing its outcome (nothing past a passing index can be
// the first one). Threads stride round robin and bail once the shared best
// dips below their position, so the winner is the canonical least.
template <class Test>
scan_result scan_candidates(std::size_t count, std::size_t max_tests, std::size_t threads,
                            std::optional<std::size_t> hint, const Test& test) {
  scan_result r;
  r.limit = std::min(count, max_tests);
  r.budget_cut = r.limit < count;
  std::size_t stop = r.limit;
  if (hint && *hint < r.limit) stop = *hint + 1;
  if (threads == 0) threads = 1;
  if (threads == 1 || stop < 2) {
    for (std::size_t i = 0; i < stop; ++i)
      if (test(i)) {
        r.winner = i;
        break;
      }
    return r;
  }
  std::atomic<std::size_t> best{stop};
  std::vector<std::exception_ptr> errs(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t th = 0; th < threads; ++th)
    pool.emplace_back([&, th] {
      try {
        for (std::size_t i = th; i < stop; i += threads) {
          if (i >= best.load()) break;
          if (!test(i)) continue;
          std::size_t cur = best.load();
          while (i < cur && !best.compare_exchange_weak(cur, i)) {
          }
          break;
        }
      } catch (...) {
        errs[th] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  if (best.load() < stop) r.winner = best.load();
  return r;
}

template <class W, class ToJson, class Verify>
witness_report finish_scan_with(witness_report rep, const std::vector<W>& cands,
                                const scan_result& sr, const ToJson& to_json,
                                const Verify& verify) {
  if (sr.winner) {
    rep.found = true;
    rep.nodes_explored = *sr.winner + 1;
    rep.witness = to_json(cands[*sr.winner]);
    rep.verified = verify(rep.witness);
    if (!rep.verified) rep.note = "witness failed independent re-verification";
    return rep;
  }
  rep.nodes_explored = sr.limit;
  if (sr.budget_cut)
    rep.note = "node budget exhausted before the candidate list";
  else {
    rep.exhausted = true;
    rep.note = "no witness in this truncation; a larger one may still hold one";
  }
  return rep;
}

template <class Space, class Verify>
witness_report finish_scan(witness_report rep, const Space& sp,
                           const std::vector<typename Space::word_t>& cands,
                           const scan_result& sr, const Verify& verify) {
  return finish_scan_with(
      std::move(rep), cands, sr,
      [&](const typename Space::word_t& w) { return sp.word_json(w); }, verify);
}

inline std::size_t remaining_nodes(const node_counter& nc, std::size_t max_nodes) {
  const std::size_t used = nc.used();
  return max_nodes > used ? max_nodes - used : 0;
}

}  // namespace detail

// Verification routes. Each one re-reads the witness from its serialized
// form and recomputes membership and monochromaticity along a different path
// than the searcher used: prefix tests instead of restriction equality, an
// explicit level scan instead of the depth helper, decode instead of encode
// for bracket membership. A verifier returning true is an independent check,
// not a replay.

template <class Space, class Color>
bool verify_a4_witness(const Space& sp, const typename Space::word_t& stem,
                       const typename Space::word_t& bound, const json& witness,
                       const Color& color) {
  try {
    const auto a = detail::parse_word(sp, witness);
    if (!sp.le_fin(a, bound)) return false;
    std::optional<std::size_t> n0;
    for (std::size_t n = 0; n <= sp.classes(bound) && !n0; ++n)
      if (sp.le_fin(stem, sp.restrict(n, bound))) n0 = n;
    if (!n0) return false;
    if (sp.restrict(*n0, a) != sp.restrict(*n0, bound)) return false;
    const std::size_t ke = sp.classes(stem) + 1;
    if (sp.classes(a) < ke) return false;
    std::optional<std::size_t> col;
    for (std::size_t e = 1; e <= sp.extent_of(a); ++e)
      for (const auto& b : sp.words(e, ke)) {
        if (!sp.is_prefix(stem, b)) continue;
        bool below = false;
        for (std::size_t lvl = 0; lvl <= sp.classes(a) && !below; ++lvl)
          below = sp.le_fin(b, sp.restrict(lvl, a));
        if (!below) continue;
        const std::size_t c = color(b);
        if (col && *col != c) return false;
        col = c;
      }
    return true;
  } catch (...) {
    return false;
  }
}

template <class Space, class Color>
bool verify_ramsey_witness(const Space& sp, std::size_t k, const typename Space::word_t& bound,
                           const json& witness, const Color& color) {
  try {
    const auto a = detail::parse_word(sp, witness);
    if (!sp.le_fin(a, bound)) return false;
    if (sp.classes(a) < k) return false;
    std::optional<std::size_t> col;
    for (std::size_t e = 1; e <= sp.extent_of(a); ++e)
      for (const auto& b : sp.words(e, k)) {
        bool below = false;
        for (std::size_t lvl = 0; lvl <= sp.classes(a) && !below; ++lvl)
          below = sp.le_fin(b, sp.restrict(lvl, a));
        if (!below) continue;
        const std::size_t c = color(b);
        if (col && *col != c) return false;
        col = c;
      }
    return true;
  } catch (...) {
    return false;
  }
}

// The bracket of a witness b below the host is re-enumerated with its own
// machinery: class combinations are found by a last-match value scan, the
// subset-and-shift choices run on an odometer instead of the recursive
// symbol enumerator, and expansion is inlined. Only the value and image
// primitives are shared with the searcher.
inline bool verify_pigeonhole_witness(const gapw_space& sp, const gap_word& host, std::size_t kb,
                                      const json& witness, const gapw_coloring& color) {
  try {
    const auto b = detail::parse_word(sp, witness);
    if (b.k != kb || b.t != host.t || b.m != host.m) return false;
    const auto le = gapw_le(b, host, budget{}.max_nodes);
    if (!le || !*le) return false;
    std::vector<gap_symbol> cls(b.k);
    for (std::size_t j = 0; j < b.k; ++j) {
      const class_set v = gapw_class_of(b, b.t + j);
      bool got = false;
      for (const auto& sym : gapw_symbols(host, false))
        if (gapw_symbol_value(sym, host) == v) {
          cls[j] = sym;
          got = true;
        }
      if (!got) return false;
    }
    const std::size_t shifts = sp.t + sp.m;
    std::vector<std::size_t> pick(b.k, 0);  // 0 absent, otherwise shift + 1
    std::optional<std::size_t> col;
    while (true) {
      bool any = false;
      bool anchored = false;
      gap_symbol sigma;
      for (std::size_t j = 0; j < b.k; ++j) {
        if (pick[j] == 0) continue;
        const std::size_t l = pick[j] - 1;
        any = true;
        anchored = anchored || l == sp.t;
        for (auto [li, mi] : cls[j].terms)
          sigma.terms.emplace_back(li == sp.t ? l : li, mi);
      }
      if (any && anchored) {
        std::sort(sigma.terms.begin(), sigma.terms.end(),
                  [](const auto& x, const auto& y) { return x.second < y.second; });
        bool in_extent = true;
        gap_word img;
        try {
          img = gapw_symbol_encode(sigma, host);
        } catch (const budget_error&) {
          in_extent = false;
        } catch (const domain_error&) {
          in_extent = false;
        }
        if (in_extent) {
          const std::size_t c = color(img);
          if (col && *col != c) return false;
          col = c;
        }
      }
      std::size_t pos = 0;
      while (pos < b.k && pick[pos] == shifts) pick[pos++] = 0;
      if (pos == b.k) break;
      ++pick[pos];
    }
    return true;
  } catch (...) {
    return false;
  }
}

template <class Space, class Color>
bool verify_projected_witness(const Space& sp, std::size_t k, std::size_t depth,
                              const typename Space::word_t& bound, const json& witness,
                              const Color& color) {
  try {
    const auto a = detail::parse_word(sp, witness);
    if (!sp.le_fin(a, bound)) return false;
    if (sp.classes(a) < depth || k > depth) return false;
    std::optional<std::size_t> col;
    for (const auto& x : sp.points(k, sp.classes(a))) {
      if (x.depth() != depth) continue;
      const auto comp = sp.compose_point(a, x);
      if (!sp.point_ok(comp)) return false;
      const std::size_t c = color(comp);
      if (col && *col != c) return false;
      col = c;
    }
    return true;
  } catch (...) {
    return false;
  }
}

namespace detail {

// Pigeonhole advisor. For one-class searches over small windows the span
// machinery can propose a candidate: transfer the bracket coloring to words
// over the shift alphabet, find a monochromatic line, and read the anchor
// substitution back as a class union. The proposal is re-tested with the
// searcher's own predicate and only ever shortens the scan; it cannot extend
// foundness past the budget or displace the canonical least witness.
template <class Test>
std::optional<std::size_t> pigeonhole_hj_hint(const gapw_space& sp, const gap_word& host,
                                              const gapw_coloring& color,
                                              const std::vector<gap_word>& cands,
                                              std::size_t scan_limit, const Test& test) {
  try {
    if (host.k == 0 || sp.t + sp.m > 3) return std::nullopt;
    const std::size_t blocks = std::min<std::size_t>(host.k, 3);
    const word_seq base = doubling_base(sp.t + sp.m, sp.t, blocks);
    const word_coloring transferred = transfer_coloring(color, base, host);
    const auto indexed = [&](const word& u) -> std::size_t {
      bool anchored = false;
      for (std::size_t l : u.letters) anchored = anchored || l == sp.t;
      if (!anchored) return 0;
      span_terms terms;
      for (std::size_t i = 0; i < u.size(); ++i) terms.emplace_back(i, u.letters[i]);
      try {
        return transferred(span_word(base, terms));
      } catch (const budget_error&) {
        return 0;
      }
    };
    const auto line = hj_find_line(indexed, sp.t + sp.m, blocks);
    if (!line) return std::nullopt;
    gap_symbol anchor;
    for (std::size_t i = 0; i < line->size(); ++i) {
      const std::size_t l = line->letters[i] == line->variable ? sp.t : line->letters[i];
      anchor.terms.emplace_back(l, sp.t + i);
    }
    const class_set value = gapw_symbol_value(anchor, host);
    if (value.empty()) return std::nullopt;
    gap_word b{sp.t, sp.m, 1, host.rows, std::vector<std::size_t>(host.rows * sp.m, 0)};
    for (std::size_t r = 0; r < sp.t && r < b.rows; ++r)
      for (std::size_t c = 0; c < sp.m; ++c) b.at(r, c) = r;
    for (const auto& [row, col] : value) {
      if (row < sp.t || row >= b.rows) return std::nullopt;
      b.at(row, col) = sp.t;
    }
    if (gapw_check(b) != 0) return std::nullopt;
    const auto it = std::find(cands.begin(), cands.end(), b);
    if (it == cands.end()) return std::nullopt;
    const std::size_t idx = static_cast<std::size_t>(it - cands.begin());
    if (idx >= scan_limit) return std::nullopt;
    return test(idx) ? std::optional<std::size_t>(idx) : std::nullopt;
  } catch (...) {
    return std::nullopt;
  }
}

}  // namespace detail

// Mode a4: given a stem below the bound, find a full-window refinement that
// agrees with the bound up to the stem's depth and colors every one-step
// extension of the stem below it the same.
template <class Space, class Color>
witness_report a4_witness_search(const Space& sp, const typename Space::word_t& stem,
                                 const typename Space::word_t& bound, const Color& color,
                                 const search_budget& bd = {}) {
  using word_t = typename Space::word_t;
  witness_report rep;
  rep.mode = "a4";
  rep.space = sp.name();
  sp.require_kind(stem);
  sp.require_kind(bound);
  const auto dep = space_depth(sp, stem, bound, sp.classes(bound));
  expect(dep.has_value(), "stem does not sit below the bound");
  const std::size_t n0 = *dep;
  const std::size_t ke = sp.classes(stem) + 1;
  node_counter nc(bd.max_nodes);
  try {
    auto cands = detail::refinements(sp, bound, ke, &nc);
    std::erase_if(cands, [&](const word_t& a) {
      return sp.restrict(n0, a) != sp.restrict(n0, bound);
    });
    std::vector<word_t> fiber;
    for (std::size_t e = 1; e <= sp.extent_of(bound); ++e)
      for (auto& b : sp.words(e, ke, &nc))
        if (sp.restrict(sp.classes(stem), b) == stem) fiber.push_back(std::move(b));
    const auto test = [&](std::size_t i) {
      const word_t& a = cands[i];
      std::optional<std::size_t> col;
      for (const auto& b : fiber) {
        if (!space_depth(sp, b, a, sp.classes(a)).has_value()) continue;
        const std::size_t c = color(b);
        if (col && *col != c) return false;
        col = c;
      }
      return true;
    };
    const auto sr = detail::scan_candidates(cands.size(), detail::remaining_nodes(nc, bd.max_nodes),
                                            bd.threads, std::nullopt, test);
    return detail::finish_scan(rep, sp, cands, sr, [&](const json& w) {
      return verify_a4_witness(sp, stem, bound, w, color);
    });
  } catch (const budget_error& e) {
    rep.note = e.what();
    return rep;
  }
}

// Mode approx-ramsey: find a full-window refinement of the bound on which
// the coloring of all k-class words below it is constant.
template <class Space, class Color>
witness_report approx_ramsey_search(const Space& sp, std::size_t k,
                                    const typename Space::word_t& bound, const Color& color,
                                    const search_budget& bd = {}) {
  using word_t = typename Space::word_t;
  witness_report rep;
  rep.mode = "approx-ramsey";
  rep.space = sp.name();
  sp.require_kind(bound);
  expect(k >= 1, "approximation rank must be positive");
  node_counter nc(bd.max_nodes);
  try {
    auto cands = detail::refinements(sp, bound, k, &nc);
    std::vector<word_t> fiber;
    for (std::size_t e = k; e <= sp.extent_of(bound); ++e)
      for (auto& b : sp.words(e, k, &nc)) fiber.push_back(std::move(b));
    const auto test = [&](std::size_t i) {
      const word_t& a = cands[i];
      std::optional<std::size_t> col;
      for (const auto& b : fiber) {
        if (!space_depth(sp, b, a, sp.classes(a)).has_value()) continue;
        const std::size_t c = color(b);
        if (col && *col != c) return false;
        col = c;
      }
      return true;
    };
    const auto sr = detail::scan_candidates(cands.size(), detail::remaining_nodes(nc, bd.max_nodes),
                                            bd.threads, std::nullopt, test);
    return detail::finish_scan(rep, sp, cands, sr, [&](const json& w) {
      return verify_ramsey_witness(sp, k, bound, w, color);
    });
  } catch (const budget_error& e) {
    rep.note = e.what();
    return rep;
  }
}

// Mode pigeonhole: find a kb-class word below the host whose bracket is
// monochromatic. The coloring's domain is the host's bracket: a symbol over
// the candidate expands, by substituting each class's defining combination
// over the host, into a symbol over the host, and its color is read off the
// encoded image. Symbols whose image falls outside the truncation are not
// bracket elements here and do not constrain the candidate. The span advisor
// prunes when it can.
inline witness_report pigeonhole_search(const gapw_space& sp, const gap_word& host,
                                        std::size_t kb, const gapw_coloring& color,
                                        const search_budget& bd = {}) {
  witness_report rep;
  rep.mode = "pigeonhole";
  rep.space = sp.name();
  sp.require_kind(host);
  expect(kb >= 1 && kb <= host.k, "class count must fit inside the host");
  node_counter nc(bd.max_nodes);
  try {
    std::vector<gap_word> cands;
    for (auto& b : sp.words(sp.extent_of(host), kb, &nc)) {
      nc.tick();
      const auto le = gapw_le(b, host, detail::remaining_nodes(nc, bd.max_nodes));
      if (!le.has_value()) throw budget_error("bracket comparison budget exhausted");
      if (*le) cands.push_back(std::move(b));
    }
    detail::canonical_order(sp, cands);
    const auto test = [&](std::size_t i) {
      const gap_word& b = cands[i];
      std::vector<gap_symbol> cls;
      for (std::size_t n = b.t; n < b.class_count(); ++n) {
        auto sym = gapw_value_decode(gapw_class_of(b, n), host);
        if (!sym) return false;  // class is not a combination over the host
        cls.push_back(std::move(*sym));
      }
      std::optional<std::size_t> col;
      for (const auto& tau : gapw_symbols(b, false)) {
        gap_word img;
        try {
          img = gapw_symbol_encode(gapw_symbol_expand(tau, cls, b, host), host);
        } catch (const budget_error&) {
          continue;  // cutoff beyond the truncation
        } catch (const domain_error&) {
          continue;  // no well-defined image
        }
        const std::size_t c = color(img);
        if (col && *col != c) return false;
        col = c;
      }
      return true;
    };
    const std::size_t limit = detail::remaining_nodes(nc, bd.max_nodes);
    const auto hint =
        detail::pigeonhole_hj_hint(sp, host, color, cands, std::min(cands.size(), limit), test);
    const auto sr = detail::scan_candidates(cands.size(), limit, bd.threads, hint, test);
    return detail::finish_scan(rep, sp, cands, sr, [&](const json& w) {
      return verify_pigeonhole_witness(sp, host, kb, w, color);
    });
  } catch (const budget_error& e) {
    rep.note = e.what();
    return rep;
  }
}

// Mode projected: find a full-window refinement of the bound on which the
// point coloring is constant across all projected points of rank k and the
// given depth. Depth-bounded point colorings are the finite shadow of the
// topological statement; the fixed depth is what makes the fiber finite.
template <class Space, class Color>
witness_report projected_search(const Space& sp, std::size_t k, std::size_t depth,
                                const typename Space::word_t& bound, const Color& color,
                                const search_budget& bd = {}) {
  using word_t = typename Space::word_t;
  using point_t = typename Space::point_t;
  witness_report rep;
  rep.mode = "projected";
  rep.space = sp.name();
  sp.require_kind(bound);
  expect(k >= 1, "projection rank must be positive");
  expect(depth >= k, "cylinder depth cannot undercut the projection rank");
  node_counter nc(bd.max_nodes);
  try {
    auto cands = detail::refinements(sp, bound, std::max(k, depth), &nc);
    std::map<std::size_t, std::vector<point_t>> fibers;
    for (const auto& a : cands) {
      const std::size_t kc = sp.classes(a);
      if (fibers.count(kc)) continue;
      std::vector<point_t> pts;
      for (auto& x : sp.points(k, kc, &nc))
        if (x.depth() == depth) pts.push_back(std::move(x));
      fibers.emplace(kc, std::move(pts));
    }
    const auto test = [&](std::size_t i) {
      const word_t& a = cands[i];
      std::optional<std::size_t> col;
      for (const auto& x : fibers.at(sp.classes(a))) {
        const std::size_t c = color(sp.compose_point(a, x));
        if (col && *col != c) return false;
        col = c;
      }
      return true;
    };
    const auto sr = detail::scan_candidates(cands.size(), detail::remaining_nodes(nc, bd.max_nodes),
                                            bd.threads, std::nullopt, test);
    return detail::finish_scan(rep, sp, cands, sr, [&](const json& w) {
      return verify_projected_witness(sp, k, depth, bound, w, color);
    });
  } catch (const budget_error& e) {
    rep.note = e.what();
    return rep;
  }
}

// Block sequence searches realize the finite-unions instance of the Ramsey
// mode. A candidate is a sequence of `blocks` separated FIN_m functions
// supported inside a window of `extent` rows; the rank-k fiber below it
// collects every k-block sequence whose blocks are sums of tetris-shifted
// candidate blocks, grouped left to right with each group attaining m. For
// m = 1 that fiber is exactly the nonempty unions.

using blockseq_coloring = std::function<std::size_t(const block_sequence&)>;

namespace detail {

inline std::size_t blockseq_weight(const block_sequence& P) {
  std::size_t s = 0;
  for (const fin_func& b : P.blocks)
    for (auto [i, v] : b.entries) s += v;
  return s;
}

// Every FIN_m function supported inside the window, by value odometer.
inline std::vector<fin_func> window_blocks(std::size_t extent, std::size_t m, node_counter* nc) {
  std::vector<fin_func> out;
  std::vector<std::size_t> vals(extent, 0);
  for (;;) {
    fin_func p;
    p.m = m;
    for (std::size_t i = 0; i < extent; ++i)
      if (vals[i] > 0) p.entries.emplace(i, vals[i]);
    if (fin_check(p) == 0) {
      if (nc) nc->tick();
      out.push_back(std::move(p));
    }
    std::size_t i = 0;
    while (i < extent && vals[i] == m) vals[i++] = 0;
    if (i == extent) break;
    ++vals[i];
  }
  return out;
}

inline std::vector<block_sequence> blockseq_candidates(std::size_t extent, std::size_t m,
                                                       std::size_t blocks, node_counter* nc) {
  const auto pool = window_blocks(extent, m, nc);
  std::vector<block_sequence> out;
  block_sequence cur;
  cur.m = m;
  const std::function<void(std::size_t)> rec = [&](std::size_t left) {
    if (left == 0) {
      if (nc) nc->tick();
      out.push_back(cur);
      return;
    }
    for (const fin_func& b : pool) {
      if (!cur.blocks.empty() && fin_supp_max(cur.blocks.back()) >= fin_supp_min(b)) continue;
      cur.blocks.push_back(b);
      rec(left - 1);
      cur.blocks.pop_back();
    }
  };
  rec(blocks);
  std::vector<std::pair<std::pair<std::size_t, std::string>, std::size_t>> keys;
  keys.reserve(out.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    keys.emplace_back(std::make_pair(blockseq_weight(out[i]), blockseq_to_json(out[i]).dump()), i);
  std::sort(keys.begin(), keys.end());
  std::vector<block_sequence> sorted;
  sorted.reserve(out.size());
  for (const auto& [key, i] : keys) sorted.push_back(std::move(out[i]));
  return sorted;
}

// Searcher route through the fiber: grow one group at a time over strictly
// increasing block indices, a tetris shift per block, closing a group only
// once it attains m. fn returning false stops the walk; the return value says
// whether it ran to completion.
template <class Fn>
bool blockseq_combinations(const block_sequence& B, std::size_t k, const Fn& fn) {
  const std::size_t n = B.blocks.size();
  block_sequence cur;
  cur.m = B.m;
  std::function<bool(std::size_t, std::size_t)> next_group;
  const std::function<bool(std::size_t, const fin_func&, std::size_t)> grow =
      [&](std::size_t i, const fin_func& acc, std::size_t left) -> bool {
    if (fin_check(acc) == 0) {
      cur.blocks.push_back(acc);
      const bool cont = next_group(i, left - 1);
      cur.blocks.pop_back();
      if (!cont) return false;
    }
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t s = 0; s < B.m; ++s) {
        fin_func part = pointwise_tetris_pow(s, B.blocks[j]);
        if (part.entries.empty()) continue;
        if (!grow(j + 1, acc.entries.empty() ? part : block_sum(acc, part), left)) return false;
      }
    return true;
  };
  next_group = [&](std::size_t i, std::size_t left) -> bool {
    if (left == 0) return fn(cur);
    fin_func none;
    none.m = B.m;
    return grow(i, none, left);
  };
  return next_group(0, k);
}

}  // namespace detail

// Verifier route: every block gets a slot in {skip} or (group, shift); valid
// assignments have nondecreasing group labels covering all k groups, and each
// group's sum must attain m. Same fiber as the searcher's recursive walk,
// reached by a different enumeration.
inline bool verify_blockseq_witness(std::size_t extent, std::size_t m, std::size_t blocks,
                                    std::size_t k, const json& witness,
                                    const blockseq_coloring& color) {
  try {
    const block_sequence B = blockseq_from_json(witness);
    if (blockseq_check(B) != 0 || B.m != m || B.blocks.size() != blocks) return false;
    for (const fin_func& b : B.blocks)
      if (fin_supp_max(b) >= extent) return false;
    const std::size_t n = B.blocks.size();
    const std::size_t slots = 1 + k * m;
    std::vector<std::size_t> slot(n, 0);
    std::optional<std::size_t> col;
    for (;;) {
      std::vector<fin_func> groups(k);
      for (auto& g : groups) g.m = m;
      bool valid = true;
      std::size_t last_g = 0;
      for (std::size_t i = 0; i < n && valid; ++i) {
        if (slot[i] == 0) continue;
        const std::size_t g = (slot[i] - 1) / m;
        const std::size_t s = (slot[i] - 1) % m;
        if (g < last_g) valid = false;
        last_g = std::max(last_g, g);
        const fin_func part = pointwise_tetris_pow(s, B.blocks[i]);
        if (part.entries.empty()) continue;
        groups[g] = groups[g].entries.empty() ? part : block_sum(groups[g], part);
      }
      for (const fin_func& g : groups)
        if (fin_check(g) != 0) valid = false;
      if (valid) {
        block_sequence P;
        P.m = m;
        P.blocks = groups;
        const std::size_t c = color(P);
        if (col && *col != c) return false;
        col = c;
      }
      std::size_t i = 0;
      while (i < n && slot[i] == slots - 1) slot[i++] = 0;
      if (i == n) break;
      ++slot[i];
    }
    return col.has_value();
  } catch (...) {
    return false;
  }
}

inline witness_report blockseq_ramsey_search(std::size_t extent, std::size_t m,
                                             std::size_t blocks, std::size_t k,
                                             const blockseq_coloring& color,
                                             const search_budget& bd = {}) {
  witness_report rep;
  rep.mode = "approx-ramsey";
  rep.space = "blockseq";
  expect(m >= 1, "ambient m must be positive");
  expect(extent >= 1, "window extent must be positive");
  expect(k >= 1, "approximation rank must be positive");
  expect(blocks >= k, "candidate block count cannot undercut the rank");
  node_counter nc(bd.max_nodes);
  try {
    const auto cands = detail::blockseq_candidates(extent, m, blocks, &nc);
    const auto test = [&](std::size_t i) {
      std::optional<std::size_t> col;
      return detail::blockseq_combinations(cands[i], k, [&](const block_sequence& P) {
        const std::size_t c = color(P);
        if (col && *col != c) return false;
        col = c;
        return true;
      });
    };
    const auto sr = detail::scan_candidates(cands.size(), detail::remaining_nodes(nc, bd.max_nodes),
                                            bd.threads, std::nullopt, test);
    return detail::finish_scan_with(
        std::move(rep), cands, sr, [](const block_sequence& B) { return blockseq_to_json(B); },
        [&](const json& w) { return verify_blockseq_witness(extent, m, blocks, k, w, color); });
  } catch (const budget_error& e) {
    rep.note = e.what();
    return rep;
  }
}

// Coloring specifications. A coloring is described as data so job files can
// carry it: {"kind": ...} plus kind-specific fields. Word colorings:
//   constant       {"color": c}
//   parity-weight  {"colors": n}   sum of the word's raw values mod n
//   parity-extent  {"colors": n}   domain extent mod n
//   table          {"entries": [{"key": word, "color": c}], "default": c}
// The gapw space adds parity-support (free cell count mod n) and
// parity-min-support (first free row mod n).
template <class Space>
std::function<std::size_t(const typename Space::word_t&)> word_coloring_from_json(
    const Space& sp, const json& spec) {
  using word_t = typename Space::word_t;
  const std::string kind = spec.at("kind").get<std::string>();
  const std::size_t colors = spec.value("colors", std::size_t{2});
  expect(colors >= 1, "coloring needs at least one color");
  if (kind == "constant") {
    const std::size_t c = spec.value("color", std::size_t{0});
    return [c](const word_t&) { return c; };
  }
  if (kind == "parity-weight")
    return [sp, colors](const word_t& w) { return sp.weight(w) % colors; };
  if (kind == "parity-extent")
    return [sp, colors](const word_t& w) { return sp.extent_of(w) % colors; };
  if (kind == "table") {
    std::map<std::string, std::size_t> table;
    for (const auto& e : spec.value("entries", json::array()))
      table[sp.word_json(detail::parse_word(sp, e.at("key"))).dump()] =
          e.at("color").get<std::size_t>();
    const std::size_t dflt = spec.value("default", std::size_t{0});
    return [sp, table = std::move(table), dflt](const word_t& w) {
      const auto it = table.find(sp.word_json(w).dump());
      return it == table.end() ? dflt : it->second;
    };
  }
  throw domain_error("unknown word coloring kind: " + kind);
}

inline gapw_coloring word_coloring_from_json(const gapw_space& sp, const json& spec) {
  const std::string kind = spec.at("kind").get<std::string>();
  const std::size_t colors = spec.value("colors", std::size_t{2});
  expect(colors >= 1, "coloring needs at least one color");
  if (kind == "parity-support")
    return [sp, colors](const gap_word& w) {
      std::size_t n = 0;
      for (std::size_t v : w.cells) n += v >= sp.t ? 1 : 0;
      return n % colors;
    };
  if (kind == "parity-min-support")
    return [sp, colors](const gap_word& w) {
      for (std::size_t i = 0; i < w.rows; ++i)
        for (std::size_t l = 0; l < w.m; ++l)
          if (w.at(i, l) >= sp.t) return i % colors;
      return std::size_t{0};
    };
  return word_coloring_from_json<gapw_space>(sp, spec);
}

// Point colorings:
//   constant        {"color": c}
//   parity-weight   {"colors": n}   weight of the projected word mod n
//   parity-cuts     {"colors": n}   sum of the cut chain mod n
//   table           {"entries": [{"key": point, "color": c}], "default": c}
//   cylinder-table  table plus {"depth": d}, keyed by the depth-d truncation
// The cylinder form only reads the truncation, so it is a depth-d cylinder
// coloring by construction.
template <class Space>
std::function<std::size_t(const typename Space::point_t&)> point_coloring_from_json(
    const Space& sp, const json& spec) {
  using point_t = typename Space::point_t;
  const std::string kind = spec.at("kind").get<std::string>();
  const std::size_t colors = spec.value("colors", std::size_t{2});
  expect(colors >= 1, "coloring needs at least one color");
  if (kind == "constant") {
    const std::size_t c = spec.value("color", std::size_t{0});
    return [c](const point_t&) { return c; };
  }
  if (kind == "parity-weight")
    return [sp, colors](const point_t& p) { return sp.weight(p.w) % colors; };
  if (kind == "parity-cuts")
    return [colors](const point_t& p) {
      std::size_t n = 0;
      for (std::size_t c : p.cuts) n += c;
      return n % colors;
    };
  if (kind == "table" || kind == "cylinder-table") {
    std::map<std::string, std::size_t> table;
    for (const auto& e : spec.value("entries", json::array()))
      table[sp.point_json(detail::parse_point(sp, e.at("key"))).dump()] =
          e.at("color").get<std::size_t>();
    const std::size_t dflt = spec.value("default", std::size_t{0});
    std::optional<std::size_t> depth;
    if (kind == "cylinder-table") depth = spec.at("depth").get<std::size_t>();
    return [sp, table = std::move(table), dflt, depth](const point_t& p) {
      const point_t q = depth && *depth < p.depth() ? sp.truncate(p, *depth) : p;
      const auto it = table.find(sp.point_json(q).dump());
      return it == table.end() ? dflt : it->second;
    };
  }
  throw domain_error("unknown point coloring kind: " + kind);
}

// Block sequence colorings: constant, parity-weight (sum of stored values),
// parity-min-support (first support row of the first block), and table keyed
// by the serialized sequence.
inline blockseq_coloring blockseq_coloring_from_json(const json& spec) {
  const std::string kind = spec.at("kind").get<std::string>();
  const std::size_t colors = spec.value("colors", std::size_t{2});
  expect(colors >= 1, "coloring needs at least one color");
  if (kind == "constant") {
    const std::size_t c = spec.value("color", std::size_t{0});
    return [c](const block_sequence&) { return c; };
  }
  if (kind == "parity-weight")
    return [colors](const block_sequence& P) { return detail::blockseq_weight(P) % colors; };
  if (kind == "parity-min-support")
    return [colors](const block_sequence& P) {
      return P.blocks.empty() ? 0 : fin_supp_min(P.blocks.front()) % colors;
    };
  if (kind == "table") {
    std::map<std::string, std::size_t> table;
    for (const auto& e : spec.value("entries", json::array()))
      table[blockseq_to_json(blockseq_from_json(e.at("key"))).dump()] =
          e.at("color").get<std::size_t>();
    const std::size_t dflt = spec.value("default", std::size_t{0});
    return [table = std::move(table), dflt](const block_sequence& P) {
      const auto it = table.find(blockseq_to_json(P).dump());
      return it == table.end() ? dflt : it->second;
    };
  }
  throw domain_error("unknown word coloring kind: " + kind);
}

// Job file form of one search. Space and mode pick the engine; params carry
// the serialized words and ranks; the coloring spec is compiled per space.
struct search_task {
  std::string space;
  std::string mode;
  json params = json::object();
  json coloring = json{{"kind", "constant"}, {"color", 0}};
  search_budget budget;
};

inline search_task search_task_from_json(const json& j) {
  if (j.contains("schema"))
    expect(j.at("schema").get<std::string>() == schema_tag, "unknown schema tag");
  search_task t;
  t.space = j.at("space").get<std::string>();
  t.mode = j.at("mode").get<std::string>();
  t.params = j.value("params", json::object());
  if (j.contains("coloring")) t.coloring = j.at("coloring");
  if (j.contains("budget")) {
    const auto& b = j.at("budget");
    t.budget.max_nodes = b.value("max_nodes", t.budget.max_nodes);
    t.budget.threads = b.value("threads", t.budget.threads);
  }
  return t;
}

inline json search_task_to_json(const search_task& t) {
  json j;
  j["schema"] = schema_tag;
  j["space"] = t.space;
  j["mode"] = t.mode;
  j["params"] = t.params;
  j["coloring"] = t.coloring;
  j["budget"] = json{{"max_nodes", t.budget.max_nodes}, {"threads", t.budget.threads}};
  return j;
}

namespace detail {

template <class Space>
witness_report run_modes(const Space& sp, const search_task& t) {
  const auto bound = parse_word(sp, t.params.at("bound"));
  if (t.mode == "a4") {
    const auto stem = parse_word(sp, t.params.at("stem"));
    return a4_witness_search(sp, stem, bound, word_coloring_from_json(sp, t.coloring), t.budget);
  }
  if (t.mode == "approx-ramsey")
    return approx_ramsey_search(sp, t.params.value("k", std::size_t{1}), bound,
                                word_coloring_from_json(sp, t.coloring), t.budget);
  if (t.mode == "projected") {
    const std::size_t k = t.params.value("k", std::size_t{1});
    return projected_search(sp, k, t.params.value("depth", k), bound,
                            point_coloring_from_json(sp, t.coloring), t.budget);
  }
  throw domain_error("unknown search mode: " + t.mode);
}

}  // namespace detail

inline witness_report run_search(const search_task& t) {
  if (t.space == "param" || t.space == "aparam") {
    param_space sp{t.params.value("t", std::size_t{0}), t.space == "aparam"};
    return detail::run_modes(sp, t);
  }
  if (t.space == "gapw") {
    gapw_space sp{t.params.value("t", std::size_t{1}), t.params.value("m", std::size_t{1})};
    if (t.mode == "pigeonhole") {
      const auto host = detail::parse_word(sp, t.params.at("host"));
      const std::size_t kb = t.params.value("k", host.k);
      return pigeonhole_search(sp, host, kb, word_coloring_from_json(sp, t.coloring), t.budget);
    }
    return detail::run_modes(sp, t);
  }
  if (t.space == "blockseq") {
    expect(t.mode == "approx-ramsey", "block sequence searches support approx-ramsey only");
    return blockseq_ramsey_search(t.params.at("extent").get<std::size_t>(),
                                  t.params.value("m", std::size_t{1}),
                                  t.params.at("n").get<std::size_t>(),
                                  t.params.value("k", std::size_t{1}),
                                  blockseq_coloring_from_json(t.coloring), t.budget);
  }
  if (t.space == "gpart") {
    gpart_space sp{t.params.contains("group") ? group_from_json(t.params.at("group"))
                                              : trivial_group()};
    return detail::run_modes(sp, t);
  }
  if (t.space == "ech") {
    ech_space sp{prime_field{t.params.value("q", std::size_t{2})}};
    return detail::run_modes(sp, t);
  }
  throw domain_error("unknown space: " + t.space);
}

}  // namespace trs
