#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include <trskit/gpartition.hpp>
#include <trskit/param_word.hpp>

using namespace trs;

namespace {

// Reference enumeration: every value table over the packed alphabet, filtered
// by a literal transcription of the two defining conditions. Kept independent
// of the library's checker and enumerator on purpose.
bool ref_valid(const finite_group& g, std::size_t k, const std::vector<std::size_t>& vals) {
  std::vector<std::size_t> first(k, SIZE_MAX);
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (vals[i] == 0) continue;
    const std::size_t j = (vals[i] - 1) / g.order;
    const std::size_t b = (vals[i] - 1) % g.order;
    if (j >= k) return false;
    if (first[j] == SIZE_MAX) {
      first[j] = i;
      if (b != g.unit) return false;
    }
  }
  for (std::size_t j = 0; j < k; ++j)
    if (first[j] == SIZE_MAX) return false;
  for (std::size_t j = 0; j + 1 < k; ++j)
    if (first[j] >= first[j + 1]) return false;
  return true;
}

std::vector<gpart_word> ref_gparts(const finite_group& g, std::size_t n, std::size_t k) {
  std::vector<gpart_word> out;
  std::vector<std::size_t> vals(n, 0);
  const std::size_t base = 1 + k * g.order;
  while (true) {
    if (ref_valid(g, k, vals)) out.push_back(gpart_word{g, k, vals});
    std::size_t i = 0;
    while (i < n && vals[i] + 1 == base) vals[i++] = 0;
    if (i == n) break;
    ++vals[i];
  }
  return out;
}

std::size_t stirling2(std::size_t n, std::size_t k) {
  if (n == 0 && k == 0) return 1;
  if (k == 0 || k > n) return 0;
  return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1);
}

gpart_word mkg(const finite_group& g, std::size_t k, const std::vector<std::size_t>& vals) {
  return gpart_word{g, k, vals};
}

// Packed encodings for readable fixtures: hole() is the hole, pk(j, b) the
// pair (block j, element b).
constexpr std::size_t hole() { return 0; }
std::size_t pk(const finite_group& g, std::size_t j, std::size_t b) {
  return 1 + j * g.order + b;
}

}  // namespace

TEST_CASE("cayley tables are validated exhaustively") {
  CHECK_NOTHROW(group_validate(trivial_group()));
  CHECK_NOTHROW(group_validate(cyclic_group(2)));
  CHECK_NOTHROW(group_validate(cyclic_group(5)));
  CHECK_THROWS_AS(cyclic_group(0), domain_error);

  CHECK_THROWS_AS(group_validate(finite_group{0, 0, {}}), domain_error);
  CHECK_THROWS_AS(group_validate(finite_group{2, 2, {0, 1, 1, 0}}), domain_error);
  CHECK_THROWS_AS(group_validate(finite_group{2, 0, {0, 1}}), domain_error);
  CHECK_THROWS_AS(group_validate(finite_group{2, 0, {0, 1, 1, 2}}), domain_error);
  // Unit row and column hold, but 1 has no inverse.
  CHECK_THROWS_AS(group_validate(finite_group{2, 0, {0, 1, 1, 1}}), domain_error);
  // Unit index points at a non-neutral element.
  CHECK_THROWS_AS(group_validate(finite_group{2, 1, {0, 1, 1, 0}}), domain_error);
  // (1*1)*2 = 2 while 1*(1*2) = 1.
  CHECK_THROWS_AS(group_validate(finite_group{3, 0, {0, 1, 2, 1, 0, 0, 2, 0, 1}}), domain_error);

  const finite_group z3 = cyclic_group(3);
  CHECK(group_inv(z3, 0) == 0);
  CHECK(group_inv(z3, 1) == 2);
  CHECK(group_inv(z3, 2) == 1);
}

TEST_CASE("partition words enforce anchored increasing blocks") {
  const finite_group z2 = cyclic_group(2);

  CHECK(gpart_check(mkg(z2, 1, {pk(z2, 0, 0)})) == 0);
  CHECK(gpart_check(mkg(z2, 1, {hole(), pk(z2, 0, 0), pk(z2, 0, 1)})) == 0);
  CHECK(gpart_check(mkg(z2, 2, {pk(z2, 0, 0), pk(z2, 1, 0), pk(z2, 0, 1), pk(z2, 1, 1)})) == 0);
  CHECK(gpart_check(mkg(z2, 0, {hole(), hole()})) == 0);
  CHECK(gpart_check(mkg(z2, 0, {})) == 0);

  // First occurrence of a block must carry the unit.
  CHECK(gpart_check(mkg(z2, 1, {pk(z2, 0, 1)})) == 1);
  CHECK(gpart_check(mkg(z2, 1, {hole(), hole()})) == 1);
  // Anchors out of order.
  CHECK(gpart_check(mkg(z2, 2, {pk(z2, 1, 0), pk(z2, 0, 0)})) == 2);
  // Values outside the packed range are structural, not a condition failure.
  CHECK_THROWS_AS(gpart_check(mkg(z2, 1, {7})), domain_error);
  CHECK_THROWS_AS(gpart_check(mkg(z2, 0, {pk(z2, 0, 0)})), domain_error);

  CHECK_THROWS_AS(gpart_validate(mkg(z2, 1, {pk(z2, 0, 1)})), domain_error);
  CHECK_NOTHROW(gpart_validate(mkg(z2, 1, {hole(), pk(z2, 0, 0)})));

  const gpart_word id3 = gpart_identity(z2, 3);
  CHECK(id3.k == 3);
  CHECK(id3.vals == std::vector<std::size_t>{pk(z2, 0, 0), pk(z2, 1, 0), pk(z2, 2, 0)});
  CHECK(gpart_check(id3) == 0);
}

TEST_CASE("composition relabels blocks and multiplies group elements") {
  const finite_group z2 = cyclic_group(2);

  // Z_2 sign flip: reading two copies of block 0 through (e, g) swaps the
  // signs of the second pair.
  const gpart_word outer =
      mkg(z2, 2, {pk(z2, 0, 0), pk(z2, 1, 0), pk(z2, 0, 1), pk(z2, 1, 1)});
  const gpart_word inner = mkg(z2, 1, {pk(z2, 0, 0), pk(z2, 0, 1)});
  CHECK(gpart_compose(outer, inner) ==
        mkg(z2, 1, {pk(z2, 0, 0), pk(z2, 0, 1), pk(z2, 0, 1), pk(z2, 0, 0)}));

  // Holes propagate from either side.
  const gpart_word outer2 = mkg(z2, 2, {pk(z2, 0, 0), pk(z2, 1, 0), pk(z2, 0, 1)});
  CHECK(gpart_compose(outer2, mkg(z2, 1, {hole(), pk(z2, 0, 0)})) ==
        mkg(z2, 1, {hole(), pk(z2, 0, 0), hole()}));
  CHECK(gpart_compose(mkg(z2, 1, {pk(z2, 0, 0), pk(z2, 0, 1)}), mkg(z2, 0, {hole()})) ==
        mkg(z2, 0, {hole(), hole()}));

  // The identity word is two-sided.
  for (const gpart_word& w : gpart_enumerate(z2, 3, 2)) {
    CHECK(gpart_compose(gpart_identity(z2, w.n()), w) == w);
    CHECK(gpart_compose(w, gpart_identity(z2, w.k)) == w);
  }

  CHECK_THROWS_AS(gpart_compose(mkg(trivial_group(), 1, {pk(trivial_group(), 0, 0)}),
                                mkg(z2, 1, {pk(z2, 0, 0)})),
                  domain_error);
  CHECK_THROWS_AS(gpart_compose(outer, mkg(z2, 1, {pk(z2, 0, 0)})), domain_error);
}

TEST_CASE("composition is associative across small groups") {
  std::size_t checked = 0;
  for (const finite_group& g : {trivial_group(), cyclic_group(2), cyclic_group(3)}) {
    for (std::size_t k0 : {std::size_t{0}, std::size_t{1}})
      for (const gpart_word& a : gpart_enumerate(g, 3, 2))
        for (const gpart_word& b : gpart_enumerate(g, 2, 1))
          for (const gpart_word& c : gpart_enumerate(g, 1, k0)) {
            ++checked;
            CHECK(gpart_compose(gpart_compose(a, b), c) ==
                  gpart_compose(a, gpart_compose(b, c)));
          }
    for (const gpart_word& a : gpart_enumerate(g, 4, 2))
      for (const gpart_word& b : gpart_enumerate(g, 2, 2))
        for (const gpart_word& c : gpart_enumerate(g, 2, 1)) {
          ++checked;
          CHECK(gpart_compose(gpart_compose(a, b), c) ==
                gpart_compose(a, gpart_compose(b, c)));
        }
  }
  CHECK(checked > 300);
}

TEST_CASE("enumeration matches a direct condition filter") {
  struct combo {
    finite_group g;
    std::size_t n, k;
  };
  for (const combo& c : {combo{trivial_group(), 3, 1}, combo{trivial_group(), 3, 2},
                         combo{trivial_group(), 4, 2}, combo{cyclic_group(2), 3, 1},
                         combo{cyclic_group(2), 3, 2}, combo{cyclic_group(3), 2, 1},
                         combo{cyclic_group(3), 3, 2}}) {
    INFO("order=" << c.g.order << " n=" << c.n << " k=" << c.k);
    std::vector<gpart_word> lib = gpart_enumerate(c.g, c.n, c.k);
    CHECK(std::is_sorted(lib.begin(), lib.end()));
    std::vector<gpart_word> ref = ref_gparts(c.g, c.n, c.k);
    std::sort(ref.begin(), ref.end());
    CHECK(lib == ref);
    for (const gpart_word& w : lib) CHECK(gpart_check(w) == 0);
  }

  // Pinned regression count.
  CHECK(gpart_enumerate(cyclic_group(2), 3, 1).size() == 13);

  // Hole-free words over the trivial group are set partitions with blocks
  // ordered by minima, so the counts are Stirling numbers and agree with the
  // rigid surjection counts at t = 0.
  const std::vector<std::pair<std::size_t, std::size_t>> shapes = {{3, 1}, {3, 2}, {4, 2}, {4, 3}};
  for (auto [n, k] : shapes) {
    std::size_t full = 0;
    for (const gpart_word& w : gpart_enumerate(trivial_group(), n, k)) {
      bool has_hole = false;
      for (std::size_t i = 0; i < w.n(); ++i) has_hole = has_hole || w.is_nu(i);
      full += has_hole ? 0 : 1;
    }
    CHECK(full == stirling2(n, k));
    CHECK(param_enumerate(0, false, n, k).size() == full);
  }

  // k = 0 leaves only the all-hole word.
  for (const finite_group& g : {trivial_group(), cyclic_group(3)}) {
    std::vector<gpart_word> none = gpart_enumerate(g, 3, 0);
    REQUIRE(none.size() == 1);
    CHECK(none[0] == mkg(g, 0, {hole(), hole(), hole()}));
  }
  CHECK(gpart_enumerate(trivial_group(), 0, 0) ==
        std::vector<gpart_word>{mkg(trivial_group(), 0, {})});

  node_counter nc(5);
  CHECK_THROWS_AS(gpart_enumerate(cyclic_group(2), 3, 1, &nc), budget_error);
}

TEST_CASE("restriction cuts at block anchors") {
  const finite_group z2 = cyclic_group(2);
  const finite_group z3 = cyclic_group(3);

  const gpart_word w =
      mkg(z2, 3, {hole(), pk(z2, 0, 0), pk(z2, 1, 0), pk(z2, 0, 1), pk(z2, 2, 0)});
  CHECK(gpart_restrict(0, w) == mkg(z2, 0, {}));
  CHECK(gpart_restrict(1, w) == mkg(z2, 1, {hole(), pk(z2, 0, 0)}));
  CHECK(gpart_restrict(2, w) == mkg(z2, 2, {hole(), pk(z2, 0, 0), pk(z2, 1, 0), pk(z2, 0, 1)}));
  CHECK(gpart_restrict(3, w) == w);
  CHECK_THROWS_AS(gpart_restrict(4, w), budget_error);

  const gpart_word v = mkg(z3, 2, {pk(z3, 0, 0), pk(z3, 0, 2), pk(z3, 1, 0)});
  CHECK(gpart_restrict(1, v) == mkg(z3, 1, {pk(z3, 0, 0), pk(z3, 0, 2)}));

  for (const gpart_word& a : gpart_enumerate(z2, 4, 2))
    for (std::size_t n = 0; n <= a.k; ++n) {
      const gpart_word rn = gpart_restrict(n, a);
      CHECK(gpart_is_restriction(rn, a));
      for (std::size_t m = 0; m <= n; ++m)
        CHECK(gpart_restrict(m, rn) == gpart_restrict(m, a));
      CHECK(gpart_depth(rn, a) == n);
    }

  CHECK(gpart_depth(mkg(z2, 0, {}), w) == 0);
  CHECK(gpart_depth(mkg(z2, 1, {hole(), pk(z2, 0, 0)}), w) == 1);
  // A hole word of matching length factors through the level-1 restriction.
  CHECK(gpart_depth(mkg(z2, 0, {hole(), hole()}), w) == 1);
  CHECK_FALSE(gpart_depth(mkg(z2, 1, {pk(z2, 0, 0), hole()}), w).has_value());
  CHECK_FALSE(gpart_is_restriction(mkg(z2, 1, {pk(z2, 0, 0)}), w));
}

TEST_CASE("the finite below relation solves for its unique witness") {
  const finite_group z2 = cyclic_group(2);

  // Brute force over all candidate witnesses is the definition; the solver
  // must agree with it on every same-domain pair.
  std::vector<gpart_word> all;
  for (std::size_t k = 0; k <= 3; ++k)
    for (const gpart_word& w : gpart_enumerate(z2, 3, k)) all.push_back(w);
  std::size_t below = 0;
  for (const gpart_word& a : all)
    for (const gpart_word& b : all) {
      bool witnessed = false;
      for (const gpart_word& c : gpart_enumerate(z2, b.k, a.k))
        witnessed = witnessed || gpart_compose(b, c) == a;
      CHECK(gpart_le_fin(a, b) == witnessed);
      below += witnessed ? 1 : 0;
    }
  CHECK(below > all.size());

  for (const gpart_word& w : all) CHECK(gpart_le_fin(w, w));
  CHECK_FALSE(gpart_le_fin(mkg(z2, 1, {pk(z2, 0, 0), hole()}),
                           mkg(z2, 1, {hole(), pk(z2, 0, 0)})));
  // Both positions of block 0 force different witness values.
  CHECK_FALSE(gpart_le_fin(mkg(z2, 1, {pk(z2, 0, 0), pk(z2, 0, 1)}),
                           mkg(z2, 1, {pk(z2, 0, 0), pk(z2, 0, 0)})));
  CHECK_FALSE(gpart_le_fin(mkg(z2, 1, {pk(z2, 0, 0)}),
                           mkg(z2, 1, {pk(z2, 0, 0), pk(z2, 0, 0)})));
}

TEST_CASE("projection collapses high blocks and stores anchor cuts") {
  const finite_group z2 = cyclic_group(2);
  const gpart_word a =
      mkg(z2, 3, {pk(z2, 0, 0), pk(z2, 1, 0), pk(z2, 0, 1), pk(z2, 2, 0), pk(z2, 1, 1)});

  const gpart_point p = gpart_project(1, a);
  CHECK(p.w == mkg(z2, 1, {pk(z2, 0, 0), pk(z2, 0, 0), pk(z2, 0, 1), pk(z2, 0, 0),
                           pk(z2, 0, 0)}));
  CHECK(p.cuts == std::vector<std::size_t>{1, 3, 5});
  CHECK(p.proj_k() == 1);
  CHECK(p.depth() == 3);
  CHECK(gpart_point_ok(p));

  const gpart_point p2 = gpart_project(2, a);
  CHECK(p2.w == mkg(z2, 2, {pk(z2, 0, 0), pk(z2, 1, 0), pk(z2, 0, 1), pk(z2, 0, 0),
                            pk(z2, 1, 1)}));
  CHECK(p2.cuts == std::vector<std::size_t>{3, 5});

  // Projection at the full block range is the identity embedding.
  CHECK(gpart_project(3, a) == gpart_as_point(a));
  CHECK_THROWS_AS(gpart_project(4, a), domain_error);
  CHECK_THROWS_AS(gpart_project(0, a), domain_error);

  const gpart_point q = gpart_truncate_point(p, 1);
  CHECK(q.w == mkg(z2, 1, {pk(z2, 0, 0)}));
  CHECK(q.cuts == std::vector<std::size_t>{1});
  CHECK(gpart_truncate_point(p, 2).w ==
        mkg(z2, 1, {pk(z2, 0, 0), pk(z2, 0, 0), pk(z2, 0, 1)}));
  CHECK(gpart_truncate_point(p, 3) == p);
  CHECK(gpart_point_lt(q, p));
  CHECK_FALSE(gpart_point_lt(p, q));
  CHECK_THROWS_AS(gpart_truncate_point(p, 0), domain_error);
  CHECK_THROWS_AS(gpart_truncate_point(p, 4), budget_error);

  // The lift realizes each collapsed block at its cut alone, so it can lose
  // the non-anchor occurrences of the source.
  const gpart_word lift = gpart_point_lift(p);
  CHECK(lift == mkg(z2, 3, {pk(z2, 0, 0), pk(z2, 1, 0), pk(z2, 0, 1), pk(z2, 2, 0),
                            pk(z2, 0, 0)}));
  CHECK(lift != a);
  CHECK(gpart_project(1, lift) == p);

  gpart_point bad = p;
  bad.w.vals[1] = pk(z2, 0, 1);
  CHECK_FALSE(gpart_point_ok(bad));
  bad = p;
  bad.cuts = {0, 3, 5};
  CHECK_FALSE(gpart_point_ok(bad));
}

TEST_CASE("partition point enumeration equals the projection images") {
  struct combo {
    finite_group g;
    std::size_t k, extent;
  };
  for (const combo& c : {combo{trivial_group(), 1, 3}, combo{trivial_group(), 2, 3},
                         combo{cyclic_group(2), 1, 3}, combo{cyclic_group(2), 2, 3}}) {
    INFO("order=" << c.g.order << " k=" << c.k << " e=" << c.extent);
    std::vector<gpart_point> pts = gpart_enumerate_points(c.g, c.k, c.extent);
    CHECK(!pts.empty());
    // Candidate filter: every k-block word with every cut set, kept when the
    // point validator accepts it. Must coincide with the projection images.
    std::vector<gpart_point> direct;
    for (const gpart_word& w : gpart_enumerate(c.g, c.extent, c.k)) {
      std::vector<std::size_t> inner;
      for (std::size_t r = 1; r < c.extent; ++r) inner.push_back(r);
      const std::size_t subsets = std::size_t{1} << inner.size();
      for (std::size_t mask = 0; mask < subsets; ++mask) {
        gpart_point cand{w, {}};
        for (std::size_t b = 0; b < inner.size(); ++b)
          if (mask & (std::size_t{1} << b)) cand.cuts.push_back(inner[b]);
        cand.cuts.push_back(c.extent);
        if (gpart_point_ok(cand)) direct.push_back(cand);
      }
    }
    std::sort(direct.begin(), direct.end());
    direct.erase(std::unique(direct.begin(), direct.end()), direct.end());
    CHECK(pts == direct);
    for (const gpart_point& p : pts) {
      const gpart_word lift = gpart_point_lift(p);
      CHECK(gpart_check(lift) == 0);
      CHECK(gpart_project(p.w.k, lift) == p);
    }
  }
}

TEST_CASE("partition point composition satisfies the truncation law") {
  std::size_t checked = 0;
  struct combo {
    finite_group g;
    std::size_t eA, kA;
  };
  for (const combo& c : {combo{trivial_group(), 4, 3}, combo{cyclic_group(2), 3, 2},
                         combo{cyclic_group(2), 4, 2}, combo{cyclic_group(3), 3, 2}}) {
    for (const gpart_word& a : gpart_enumerate(c.g, c.eA, c.kA))
      for (std::size_t kx = 1; kx <= c.kA; ++kx)
        for (const gpart_point& x : gpart_enumerate_points(c.g, kx, c.kA)) {
          const gpart_point comp = gpart_compose_point(a, x);
          REQUIRE(gpart_point_ok(comp));
          CHECK(comp.depth() == x.depth());
          for (std::size_t lvl = kx; lvl <= x.depth(); ++lvl) {
            ++checked;
            const gpart_point xa = gpart_truncate_point(x, lvl);
            const gpart_word lhs = gpart_truncate_point(comp, lvl).w;
            const gpart_word rhs = gpart_compose(gpart_restrict(xa.w.n(), a), xa.w);
            CHECK(lhs == rhs);
          }
        }
  }
  CHECK(checked > 100);
}

TEST_CASE("partition point composition is associative") {
  std::size_t checked = 0;
  for (const finite_group& g : {cyclic_group(2), cyclic_group(3)})
    for (const gpart_word& a : gpart_enumerate(g, 3, 2))
      for (std::size_t kb = 1; kb <= 2; ++kb)
        for (const gpart_word& b : gpart_enumerate(g, 2, kb))
          for (std::size_t kx = 1; kx <= kb; ++kx)
            for (const gpart_point& x : gpart_enumerate_points(g, kx, kb)) {
              ++checked;
              const gpart_point lhs = gpart_compose_point(a, gpart_compose_point(b, x));
              const gpart_point rhs = gpart_compose_point(gpart_compose(a, b), x);
              CHECK(lhs == rhs);
            }
  CHECK(checked > 50);
}

TEST_CASE("partition word serialization round trips") {
  const finite_group z3 = cyclic_group(3);
  json jg = group_to_json(z3);
  CHECK(jg["space"] == "group");
  CHECK(group_from_json(jg) == z3);
  json bad = jg;
  bad["cayley"][0][0] = 5;
  CHECK_THROWS_AS(group_from_json(bad), domain_error);
  bad = jg;
  bad["cayley"][1][1] = 0;
  CHECK_THROWS_AS(group_from_json(bad), domain_error);

  const finite_group z2 = cyclic_group(2);
  const gpart_word w = mkg(z2, 2, {hole(), pk(z2, 0, 0), pk(z2, 1, 0), pk(z2, 0, 1)});
  json jw = gpart_to_json(w);
  CHECK(jw["space"] == "gpart");
  CHECK(jw["n"] == 4);
  CHECK(jw["values"][0] == "v");
  CHECK(jw["values"][1] == json::array({0, 0}));
  CHECK(gpart_from_json(jw) == w);

  json jbad = jw;
  jbad["values"][0] = "x";
  CHECK_THROWS_AS(gpart_from_json(jbad), domain_error);
  jbad = jw;
  jbad["values"][1] = json::array({5, 0});
  CHECK_THROWS_AS(gpart_from_json(jbad), domain_error);
  jbad = jw;
  jbad["values"][1] = json::array({0, 0, 0});
  CHECK_THROWS_AS(gpart_from_json(jbad), domain_error);
  // Dropping the anchor of block 1 breaks the first condition.
  jbad = jw;
  jbad["values"][2] = "v";
  CHECK_THROWS_AS(gpart_from_json(jbad), domain_error);

  const gpart_word a =
      mkg(z2, 3, {pk(z2, 0, 0), pk(z2, 1, 0), pk(z2, 0, 1), pk(z2, 2, 0), pk(z2, 1, 1)});
  const gpart_point p = gpart_project(1, a);
  json jp = gpart_point_to_json(p);
  CHECK(jp["space"] == "gpart_point");
  CHECK(jp["depth"] == 3);
  CHECK(gpart_point_from_json(jp) == p);
  jbad = jp;
  jbad["cuts"] = std::vector<std::size_t>{1, 3};
  CHECK_THROWS_AS(gpart_point_from_json(jbad), domain_error);
  jbad = jp;
  jbad["values"][1] = json::array({0, 1});
  CHECK_THROWS_AS(gpart_point_from_json(jbad), domain_error);
}
