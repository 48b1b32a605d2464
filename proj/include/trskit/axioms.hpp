#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "common.hpp"
#include "space.hpp"

// Axiom harness: bounded exhaustive checks of the defining clauses of a
// truncated space, one report per clause. Every clause quantifies over the
// finite families drawn from the space's enumerators,
//   W[e][k]  elements with domain extent e <= max_extent and class extent k
//   P[k][e]  projected points with class extent k stored over extent e
// with the bounded ranges documented per clause in axiom_clauses(). Reports
// are deterministic: a fixed budget walks the same instances in the same
// order, and violations are sorted canonically before the report is
// returned, so merging per-instance results in any order gives the same
// report. A violation record holds only the inputs of the failing instance,
// so it can be re-derived by replaying the operation. Two error channels are
// kept apart: a budget_error anywhere inside a clause stops it and marks the
// report incomplete, keeping what was found; a domain_error thrown by an
// operation under test counts as a violation of that clause, since the
// operation rejected an input its contract covers.

namespace trs {

struct axiom_budget {
  std::size_t max_extent = 3;
  std::size_t max_nodes = budget{}.max_nodes;
};

struct axiom_report {
  std::string axiom;
  std::size_t instances = 0;
  bool incomplete = false;
  std::vector<json> violations;

  bool pass() const { return violations.empty(); }
};

inline json axiom_report_to_json(const axiom_report& r) {
  json j;
  j["schema"] = schema_tag;
  j["axiom"] = r.axiom;
  j["instances"] = r.instances;
  j["pass"] = r.pass();
  j["incomplete"] = r.incomplete;
  j["violations"] = json::array();
  for (const json& v : r.violations) j["violations"].push_back(v);
  return j;
}

struct axiom_clause_info {
  const char* id;
  const char* statement;    // finite-truncation reading of the clause
  const char* quantifiers;  // bounded ranges the instances sweep
};

inline const std::vector<axiom_clause_info>& axiom_clauses() {
  static const std::vector<axiom_clause_info> table = {
      {"A1a", "the 0-th restriction of every element is the empty approximation",
       "elements of W[e][k], e <= max_extent, 1 <= k <= e"},
      {"A1b", "distinct elements differ at some restriction level",
       "unordered pairs within each W[e][k]; levels n <= k"},
      {"A1c", "equal restrictions force equal levels and agree below",
       "ordered pairs across all W[e][k]; levels n <= k(A), m <= k(B), j < n"},
      {"A2a", "le_fin has computable finite down-sets and is reflexive",
       "all restrictions of all W[e][k], deduplicated; the full pair matrix, "
       "reflexivity on the diagonal"},
      {"A2b", "a composition-derived element sits below its outer factor "
              "approximation by approximation",
       "composable pairs A in W[e][kA], C in W[kA][kC]; levels n <= kC with "
       "witnesses m <= kA"},
      {"A5c", "composition of elements is associative",
       "composable triples A in W[e][kA], B in W[kA][kB], C in W[kB][kC]"},
      {"A5d", "composing with a point associates with element composition",
       "composable pairs A, B as in A5c with kB >= 1; points X in P[kX][kB], "
       "kX <= kB"},
      {"A5e", "a composite element lies below its outer factor",
       "composable pairs A in W[e][kA], C in W[kA][kC]"},
      {"A6a", "s-approximations are valid at their level, and below the "
              "projection extent they restrict coherently",
       "points X in P[k][e]; levels n in [k, depth(X)] plus n < k"},
      {"A6c", "equal s-approximations force equal levels and agree below",
       "ordered pairs X, Y in the union of P[k][e] over e; levels n in "
       "[k, depth(X)], m in [k, depth(Y)]"},
      {"A6d", "distinct points differ at some s-approximation level",
       "unordered pairs X, Y in the union of P[k][e] over e"},
      {"A7b", "composing with a fixed inner approximation preserves the "
              "s-order",
       "points c in P[n][e] with truncations b < c; inner a in P[kI][n], "
       "kI <= n"},
      {"A7c", "an s-approximation of a composite equals the restricted outer "
              "element composed with the inner s-approximation",
       "elements A in W[e][kA], kA >= 1; points X in P[kX][kA], kX <= kA; "
       "levels in [kX, depth(X)]"},
  };
  return table;
}

namespace detail {

template <class Space>
struct axiom_families {
  // words[e][k] for k <= e <= max_extent; points[k][e] for 1 <= k <= e.
  std::vector<std::vector<std::vector<typename Space::word_t>>> words;
  std::vector<std::vector<std::vector<typename Space::point_t>>> points;
};

// Element families start at class extent 1: a word with no free classes is
// never a restriction of an element (r_0 is the empty approximation), so the
// degenerate k = 0 words the enumerators can produce represent nothing the
// axioms quantify over. Level-0 approximations still enter every clause that
// walks restriction chains.
template <class Space>
axiom_families<Space> build_families(const Space& sp, std::size_t max_extent, node_counter* nc) {
  axiom_families<Space> f;
  f.words.resize(max_extent + 1);
  for (std::size_t e = 0; e <= max_extent; ++e) {
    f.words[e].resize(e + 1);
    for (std::size_t k = 1; k <= e; ++k) f.words[e][k] = sp.words(e, k, nc);
  }
  f.points.resize(max_extent + 1);
  for (std::size_t k = 1; k <= max_extent; ++k) {
    f.points[k].resize(max_extent + 1);
    for (std::size_t e = k; e <= max_extent; ++e) f.points[k][e] = sp.points(k, e, nc);
  }
  return f;
}

struct clause_state {
  axiom_report rep;
  node_counter nc;

  explicit clause_state(std::size_t cap) : nc(cap) {}
  void instance() {
    rep.instances += 1;
    nc.tick();
  }
};

// Runs one instance body that returns true on pass. A domain_error from the
// body fails the instance and lands in the descriptor.
template <class Fn, class Desc>
void run_instance(clause_state& st, Fn&& body, Desc&& describe) {
  st.instance();
  bool ok = true;
  std::string err;
  try {
    ok = body();
  } catch (const domain_error& e) {
    ok = false;
    err = e.what();
  }
  if (ok) return;
  json v = describe();
  if (!err.empty()) v["error"] = err;
  st.rep.violations.push_back(std::move(v));
}

template <class Space>
void clause_a1a(const Space& sp, const axiom_families<Space>& F, clause_state& st) {
  const auto empty = sp.empty_word();
  for (const auto& per_extent : F.words)
    for (const auto& family : per_extent)
      for (const auto& w : family)
        run_instance(
            st, [&] { return sp.restrict(0, w) == empty; },
            [&] { return json{{"element", sp.word_json(w)}}; });
}

template <class Space>
void clause_a1b(const Space& sp, const axiom_families<Space>& F, clause_state& st) {
  for (const auto& per_extent : F.words)
    for (const auto& family : per_extent) {
      const std::size_t k = family.empty() ? 0 : sp.classes(family.front());
      for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = i + 1; j < family.size(); ++j)
          run_instance(
              st,
              [&] {
                for (std::size_t n = 0; n <= k; ++n)
                  if (sp.restrict(n, family[i]) != sp.restrict(n, family[j])) return true;
                return false;
              },
              [&] {
                return json{{"a", sp.word_json(family[i])}, {"b", sp.word_json(family[j])}};
              });
    }
}

template <class Space>
void clause_a1c(const Space& sp, const axiom_families<Space>& F, clause_state& st) {
  // Restriction chains: chains[i][n] = r_n(flat[i]).
  std::vector<const typename Space::word_t*> flat;
  for (const auto& per_extent : F.words)
    for (const auto& family : per_extent)
      for (const auto& w : family) flat.push_back(&w);
  std::vector<std::vector<typename Space::word_t>> chains(flat.size());
  for (std::size_t i = 0; i < flat.size(); ++i) {
    st.instance();
    for (std::size_t n = 0; n <= sp.classes(*flat[i]); ++n)
      chains[i].push_back(sp.restrict(n, *flat[i]));
  }
  for (std::size_t i = 0; i < flat.size(); ++i)
    for (std::size_t j = 0; j < flat.size(); ++j)
      run_instance(
          st,
          [&] {
            for (std::size_t n = 0; n < chains[i].size(); ++n)
              for (std::size_t mm = 0; mm < chains[j].size(); ++mm) {
                if (chains[i][n] != chains[j][mm]) continue;
                if (n != mm) return false;
                for (std::size_t l = 0; l < n; ++l)
                  if (chains[i][l] != chains[j][l]) return false;
              }
            return true;
          },
          [&] {
            return json{{"a", sp.word_json(*flat[i])}, {"b", sp.word_json(*flat[j])}};
          });
}

template <class Space>
void clause_a2a(const Space& sp, const axiom_families<Space>& F, clause_state& st) {
  std::vector<typename Space::word_t> approx;
  for (const auto& per_extent : F.words)
    for (const auto& family : per_extent)
      for (const auto& w : family)
        for (std::size_t n = 0; n <= sp.classes(w); ++n) approx.push_back(sp.restrict(n, w));
  std::sort(approx.begin(), approx.end());
  approx.erase(std::unique(approx.begin(), approx.end()), approx.end());

  // The down-set of each approximation is computed in full; it is finite by
  // construction, so the checkable content is that le_fin answers every pair
  // without error and accepts each element below itself.
  const std::size_t sz = approx.size();
  for (std::size_t i = 0; i < sz; ++i)
    for (std::size_t j = 0; j < sz; ++j)
      run_instance(
          st,
          [&] {
            const bool below = sp.le_fin(approx[i], approx[j]);
            return i != j || below;
          },
          [&] {
            return json{{"a", sp.word_json(approx[i])},
                        {"b", sp.word_json(approx[j])},
                        {"property", "reflexivity"}};
          });
}

template <class Space>
void clause_a2b(const Space& sp, const axiom_families<Space>& F, clause_state& st) {
  for (std::size_t e = 0; e < F.words.size(); ++e)
    for (std::size_t ka = 0; ka <= e; ++ka)
      for (const auto& a : F.words[e][ka])
        for (std::size_t kc = 1; kc <= ka; ++kc)
          for (const auto& c : F.words[ka][kc]) {
            bool composed = true;
            typename Space::word_t b = sp.empty_word();
            run_instance(
                st,
                [&] {
                  b = sp.compose(a, c);
                  return true;
                },
                [&] {
                  composed = false;
                  return json{{"outer", sp.word_json(a)}, {"inner", sp.word_json(c)}};
                });
            if (!composed) continue;
            for (std::size_t n = 0; n <= sp.classes(b); ++n)
              run_instance(
                  st,
                  [&] {
                    const auto rb = sp.restrict(n, b);
                    for (std::size_t mm = 0; mm <= ka; ++mm)
                      if (sp.le_fin(rb, sp.restrict(mm, a))) return true;
                    return false;
                  },
                  [&] {
                    return json{{"outer", sp.word_json(a)},
                                {"inner", sp.word_json(c)},
                                {"level", n}};
                  });
          }
}

template <class Space>
void clause_a5c(const Space& sp, const axiom_families<Space>& F, clause_state& st) {
  for (std::size_t e = 0; e < F.words.size(); ++e)
    for (std::size_t ka = 0; ka <= e; ++ka)
      for (const auto& a : F.words[e][ka])
        for (std::size_t kb = 1; kb <= ka; ++kb)
          for (const auto& b : F.words[ka][kb])
            for (std::size_t kc = 1; kc <= kb; ++kc)
              for (const auto& c : F.words[kb][kc])
                run_instance(
                    st,
                    [&] { return sp.compose(a, sp.compose(b, c)) == sp.compose(sp.compose(a, b), c); },
                    [&] {
                      return json{{"a", sp.word_json(a)},
                                  {"b", sp.word_json(b)},
                                  {"c", sp.word_json(c)}};
                    });
}

template <class Space>
void clause_a5d(const Space& sp, const axiom_families<Space>& F, clause_state& st) {
  for (std::size_t e = 0; e < F.words.size(); ++e)
    for (std::size_t ka = 0; ka <= e; ++ka)
      for (const auto& a : F.words[e][ka])
        for (std::size_t kb = 1; kb <= ka; ++kb)
          for (const auto& b : F.words[ka][kb])
            for (std::size_t kx = 1; kx <= kb; ++kx)
              for (const auto& x : F.points[kx][kb])
                run_instance(
                    st,
                    [&] {
                      return sp.compose_point(a, sp.compose_point(b, x)) ==
                             sp.compose_point(sp.compose(a, b), x);
                    },
                    [&] {
                      return json{{"a", sp.word_json(a)},
                                  {"b", sp.word_json(b)},
                                  {"x", sp.point_json(x)}};
                    });
}

template <class Space>
void clause_a5e(const Space& sp, const axiom_families<Space>& F, clause_state& st) {
  for (std::size_t e = 0; e < F.words.size(); ++e)
    for (std::size_t ka = 0; ka <= e; ++ka)
      for (const auto& a : F.words[e][ka])
        for (std::size_t kc = 1; kc <= ka; ++kc)
          for (const auto& c : F.words[ka][kc])
            run_instance(
                st, [&] { return sp.le_fin(sp.compose(a, c), a); },
                [&] {
                  return json{{"outer", sp.word_json(a)}, {"inner", sp.word_json(c)}};
                });
}

template <class Space>
void clause_a6a(const Space& sp, const axiom_families<Space>& F, clause_state& st) {
  for (std::size_t k = 1; k < F.points.size(); ++k)
    for (std::size_t e = k; e < F.points[k].size(); ++e)
      for (const auto& x : F.points[k][e]) {
        for (std::size_t n = k; n <= x.depth(); ++n)
          run_instance(
              st,
              [&] {
                const auto s = sp.truncate(x, n);
                if (!sp.point_ok(s) || s.depth() != n) return false;
                // Below the projection extent the chain is pinned by r_{k-1}
                // of the bottom s-approximation.
                return sp.restrict(k - 1, s.w) == sp.restrict(k - 1, sp.truncate(x, k).w);
              },
              [&] { return json{{"x", sp.point_json(x)}, {"level", n}}; });
        for (std::size_t n = 0; n < k; ++n)
          run_instance(
              st,
              [&] {
                const auto low = sp.restrict(n, sp.truncate(x, k).w);
                return sp.classes(low) == n;
              },
              [&] { return json{{"x", sp.point_json(x)}, {"level", n}}; });
      }
}

template <class Space>
void clause_a6c(const Space& sp, const axiom_families<Space>& F, clause_state& st) {
  for (std::size_t k = 1; k < F.points.size(); ++k) {
    std::vector<const typename Space::point_t*> pool;
    for (std::size_t e = k; e < F.points[k].size(); ++e)
      for (const auto& x : F.points[k][e]) pool.push_back(&x);
    std::vector<std::vector<typename Space::point_t>> chains(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
      st.instance();
      for (std::size_t n = k; n <= pool[i]->depth(); ++n)
        chains[i].push_back(sp.truncate(*pool[i], n));
    }
    for (std::size_t i = 0; i < pool.size(); ++i)
      for (std::size_t j = 0; j < pool.size(); ++j)
        run_instance(
            st,
            [&] {
              for (std::size_t n = 0; n < chains[i].size(); ++n)
                for (std::size_t mm = 0; mm < chains[j].size(); ++mm) {
                  if (chains[i][n] != chains[j][mm]) continue;
                  if (n != mm) return false;
                  for (std::size_t l = 0; l < n; ++l)
                    if (chains[i][l] != chains[j][l]) return false;
                }
              return true;
            },
            [&] {
              return json{{"x", sp.point_json(*pool[i])}, {"y", sp.point_json(*pool[j])}};
            });
  }
}

template <class Space>
void clause_a6d(const Space& sp, const axiom_families<Space>& F, clause_state& st) {
  for (std::size_t k = 1; k < F.points.size(); ++k) {
    std::vector<const typename Space::point_t*> pool;
    for (std::size_t e = k; e < F.points[k].size(); ++e)
      for (const auto& x : F.points[k][e]) pool.push_back(&x);
    for (std::size_t i = 0; i < pool.size(); ++i)
      for (std::size_t j = i + 1; j < pool.size(); ++j)
        run_instance(
            st,
            [&] {
              if (pool[i]->depth() != pool[j]->depth()) return true;
              for (std::size_t n = k; n <= pool[i]->depth(); ++n)
                if (sp.truncate(*pool[i], n) != sp.truncate(*pool[j], n)) return true;
              return false;
            },
            [&] {
              return json{{"x", sp.point_json(*pool[i])}, {"y", sp.point_json(*pool[j])}};
            });
  }
}

template <class Space>
void clause_a7b(const Space& sp, const axiom_families<Space>& F, clause_state& st) {
  for (std::size_t n = 1; n < F.points.size(); ++n)
    for (std::size_t e = n; e < F.points[n].size(); ++e)
      for (const auto& c : F.points[n][e])
        for (std::size_t lvl = n; lvl < c.depth(); ++lvl) {
          const auto b = sp.truncate(c, lvl);
          for (std::size_t ki = 1; ki <= n; ++ki)
            for (const auto& a : F.points[ki][n])
              run_instance(
                  st,
                  [&] {
                    const auto ba = sp.compose_points(b, a);
                    const auto ca = sp.compose_points(c, a);
                    return sp.point_ok(ba) && sp.point_ok(ca) && sp.point_lt(ba, ca);
                  },
                  [&] {
                    return json{{"c", sp.point_json(c)},
                                {"a", sp.point_json(a)},
                                {"level", lvl}};
                  });
        }
}

template <class Space>
void clause_a7c(const Space& sp, const axiom_families<Space>& F, clause_state& st) {
  for (std::size_t e = 1; e < F.words.size(); ++e)
    for (std::size_t ka = 1; ka <= e; ++ka)
      for (const auto& a : F.words[e][ka])
        for (std::size_t kx = 1; kx <= ka; ++kx)
          for (const auto& x : F.points[kx][ka]) {
            bool composed = true;
            typename Space::point_t comp{};
            run_instance(
                st,
                [&] {
                  comp = sp.compose_point(a, x);
                  return sp.point_ok(comp) && comp.depth() == x.depth();
                },
                [&] {
                  composed = false;
                  return json{{"a", sp.word_json(a)}, {"x", sp.point_json(x)}};
                });
            if (!composed) continue;
            for (std::size_t lvl = kx; lvl <= x.depth(); ++lvl)
              run_instance(
                  st,
                  [&] {
                    // Approximations are points here, so the law is checked
                    // at point level: cut chains must agree, not just words.
                    const auto xa = sp.truncate(x, lvl);
                    const auto lhs = sp.truncate(comp, lvl);
                    const auto rhs = sp.compose_point(sp.restrict(sp.extent_of(xa.w), a), xa);
                    return lhs == rhs;
                  },
                  [&] {
                    return json{{"a", sp.word_json(a)},
                                {"x", sp.point_json(x)},
                                {"level", lvl}};
                  });
          }
}

}  // namespace detail

template <class Space>
axiom_report check_axiom(const Space& sp, const std::string& id, const axiom_budget& bd) {
  bool known = false;
  for (const auto& c : axiom_clauses()) known = known || id == c.id;
  expect(known, "unknown axiom clause");

  detail::clause_state st(bd.max_nodes);
  st.rep.axiom = id;
  try {
    const auto F = detail::build_families(sp, bd.max_extent, &st.nc);
    if (id == "A1a") detail::clause_a1a(sp, F, st);
    else if (id == "A1b") detail::clause_a1b(sp, F, st);
    else if (id == "A1c") detail::clause_a1c(sp, F, st);
    else if (id == "A2a") detail::clause_a2a(sp, F, st);
    else if (id == "A2b") detail::clause_a2b(sp, F, st);
    else if (id == "A5c") detail::clause_a5c(sp, F, st);
    else if (id == "A5d") detail::clause_a5d(sp, F, st);
    else if (id == "A5e") detail::clause_a5e(sp, F, st);
    else if (id == "A6a") detail::clause_a6a(sp, F, st);
    else if (id == "A6c") detail::clause_a6c(sp, F, st);
    else if (id == "A6d") detail::clause_a6d(sp, F, st);
    else if (id == "A7b") detail::clause_a7b(sp, F, st);
    else if (id == "A7c") detail::clause_a7c(sp, F, st);
  } catch (const budget_error&) {
    st.rep.incomplete = true;
  }
  std::sort(st.rep.violations.begin(), st.rep.violations.end(),
            [](const json& a, const json& b) { return a.dump() < b.dump(); });
  return st.rep;
}

template <class Space>
std::vector<axiom_report> check_axioms(const Space& sp, const axiom_budget& bd) {
  std::vector<axiom_report> out;
  out.reserve(axiom_clauses().size());
  for (const auto& c : axiom_clauses()) out.push_back(check_axiom(sp, c.id, bd));
  return out;
}

}  // namespace trs
