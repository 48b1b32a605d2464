#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <string>
#include <vector>

#include <trskit/axioms.hpp>
#include <trskit/space.hpp>

TEST_CASE("approximation depth scans the restriction chain", "[core]") {
  trs::param_space sp;
  const trs::param_word b{0, false, 3, {0, 1, 0, 2}};

  REQUIRE(trs::space_depth(sp, trs::restrict_to(2, b), b, 10) == 2);
  REQUIRE(trs::space_depth(sp, sp.empty_word(), b, 10) == 0);

  // (0,1) sits at depth 2 of itself: r_1 = (0) is too short to host it.
  const trs::param_word a01{0, false, 2, {0, 1}};
  REQUIRE(trs::restrict_to(1, a01) == trs::param_word{0, false, 1, {0}});
  REQUIRE(trs::space_depth(sp, a01, a01, 5) == 2);

  // No level of b hosts (0,0); the scan reports infinity as nullopt.
  REQUIRE_FALSE(trs::space_depth(sp, trs::param_word{0, false, 1, {0, 0}}, b, 10).has_value());
  // A limit below the answer cuts the scan off the same way.
  REQUIRE_FALSE(trs::space_depth(sp, trs::restrict_to(2, b), b, 1).has_value());

  REQUIRE_THROWS_AS(trs::space_depth(sp, trs::param_word{1, false, 1, {0, 1}}, b, 5),
                    trs::domain_error);
}

TEST_CASE("depth of each restriction is its own level", "[core]") {
  // Restriction lengths grow strictly with the level, so the scan and the
  // per-space witness solvers must both land exactly at n.
  trs::param_space pp{1, false};
  for (std::size_t e = 1; e <= 3; ++e)
    for (std::size_t k = 1; k <= e; ++k)
      for (const auto& w : trs::param_enumerate(1, false, e, k))
        for (std::size_t n = 0; n <= k; ++n) {
          const auto r = trs::restrict_to(n, w);
          REQUIRE(trs::space_depth(pp, r, w, 10) == n);
          REQUIRE(trs::param_depth(r, w) == n);
        }

  trs::gapw_space gp{1, 2};
  for (std::size_t e = 1; e <= 2; ++e)
    for (std::size_t k = 1; k <= e; ++k)
      for (const auto& w : trs::gapw_enumerate(1, 2, e, k))
        for (std::size_t n = 0; n <= k; ++n) {
          const auto r = trs::gapw_restrict(n, w);
          REQUIRE(trs::space_depth(gp, r, w, 10) == n);
          REQUIRE(trs::gapw_depth(r, w) == n);
        }

  trs::gpart_space zp{trs::cyclic_group(2)};
  for (std::size_t e = 1; e <= 2; ++e)
    for (std::size_t k = 1; k <= e; ++k)
      for (const auto& w : trs::gpart_enumerate(zp.g, e, k))
        for (std::size_t n = 0; n <= k; ++n) {
          const auto r = trs::gpart_restrict(n, w);
          REQUIRE(trs::space_depth(zp, r, w, 10) == n);
          REQUIRE(trs::gpart_depth(r, w) == n);
        }

  trs::ech_space se{trs::prime_field{2}};
  for (std::size_t rows = 1; rows <= 3; ++rows)
    for (std::size_t cols = 1; cols <= rows; ++cols)
      for (const auto& w : trs::ech_enumerate(se.f, rows, cols))
        for (std::size_t n = 0; n <= cols; ++n) {
          const auto r = trs::ech_restrict(n, w);
          REQUIRE(trs::space_depth(se, r, w, 10) == n);
          REQUIRE(trs::ech_depth(r, w) == n);
        }
}

TEST_CASE("prefix recognition matches initial restrictions", "[core]") {
  trs::param_space sp;
  const trs::param_word b{0, false, 2, {0, 1, 0}};
  REQUIRE(trs::space_is_prefix(sp, trs::param_word{0, false, 1, {0}}, b));
  REQUIRE_FALSE(trs::space_is_prefix(sp, trs::param_word{0, false, 1, {0, 0}}, b));
  REQUIRE(trs::space_is_prefix(sp, sp.empty_word(), b));
  REQUIRE(trs::space_is_prefix(sp, b, b));
  REQUIRE_THROWS_AS(trs::space_is_prefix(sp, trs::param_word{1, false, 1, {0, 1}}, b),
                    trs::domain_error);

  // Exhaustive within a small window: every restriction is a prefix, and no
  // distinct word of the same shape is.
  trs::ech_space se{trs::prime_field{2}};
  for (std::size_t rows = 1; rows <= 3; ++rows)
    for (std::size_t cols = 1; cols <= rows; ++cols)
      for (const auto& w : trs::ech_enumerate(se.f, rows, cols)) {
        for (std::size_t n = 0; n <= cols; ++n)
          REQUIRE(trs::space_is_prefix(se, trs::ech_restrict(n, w), w));
        for (const auto& o : trs::ech_enumerate(se.f, rows, cols))
          REQUIRE(trs::space_is_prefix(se, o, w) == (o == w));
      }
}

TEST_CASE("basic set members are the extensions of a stem", "[core]") {
  trs::param_space sp;

  const auto p0 = trs::param_as_point(trs::param_word{0, false, 1, {0}});
  REQUIRE(trs::basic_set_members(sp, p0, 1, 3) == std::vector<trs::param_point>{p0});
  REQUIRE(trs::basic_set_members(sp, p0, 2, 3).size() == 2);
  REQUIRE(trs::basic_set_members(sp, p0, 3, 3).size() == 1);

  // The lone depth-2 extension of (0,0) adds one cell and one cut.
  const auto p00 = trs::param_as_point(trs::param_word{0, false, 1, {0, 0}});
  const trs::param_point ext{trs::param_word{0, false, 1, {0, 0, 0}}, {2, 3}};
  REQUIRE(trs::basic_set_members(sp, p00, 2, 3) == std::vector<trs::param_point>{ext});

  // A depth limit below the stem's own depth cannot be met.
  REQUIRE(trs::basic_set_members(sp, ext, 1, 3).empty());
  // A stem outside the enumeration window is unrealized.
  const auto p000 = trs::param_as_point(trs::param_word{0, false, 1, {0, 0, 0}});
  REQUIRE(trs::basic_set_members(sp, p000, 1, 2).empty());

  // The unstemmed variant counts every point of the given depth.
  REQUIRE(trs::basic_set_all(sp, 1, 1, 3).size() == 3);
  REQUIRE(trs::basic_set_all(sp, 1, 2, 3).size() == 3);
  REQUIRE(trs::basic_set_all(sp, 1, 3, 3).size() == 1);
}

namespace {

template <class Space>
void require_end_extension_law(const Space& sp, std::size_t max_extent) {
  // a <= b in the approximation order iff b's basic set is contained in a's
  // at every depth. Truncations of enumerated points are enumerated points,
  // so the containment test is exhaustive within the window.
  std::vector<typename Space::point_t> stems;
  for (std::size_t e = 1; e <= max_extent; ++e)
    for (const auto& x : sp.points(1, e))
      for (std::size_t l = 1; l <= x.depth(); ++l) stems.push_back(sp.truncate(x, l));
  std::sort(stems.begin(), stems.end());
  stems.erase(std::unique(stems.begin(), stems.end()), stems.end());
  REQUIRE(stems.size() >= 7);

  for (const auto& a : stems)
    for (const auto& b : stems) {
      const bool le = a == b || sp.point_lt(a, b);
      bool contained = true;
      for (std::size_t d = 1; d <= max_extent && contained; ++d) {
        const auto ma = trs::basic_set_members(sp, a, d, max_extent);
        const auto mb = trs::basic_set_members(sp, b, d, max_extent);
        contained = std::includes(ma.begin(), ma.end(), mb.begin(), mb.end());
      }
      REQUIRE(le == contained);
    }
}

}  // namespace

TEST_CASE("basic sets characterize the end-extension order", "[core]") {
  require_end_extension_law(trs::param_space{}, 3);
  require_end_extension_law(trs::ech_space{trs::prime_field{2}}, 3);
}

TEST_CASE("axiom harness passes every clause on honest spaces", "[core][axioms]") {
  const std::size_t big = trs::budget{}.max_nodes;
  const auto expect_all_pass = [](const auto& sp, const trs::axiom_budget& bd) {
    const auto reports = trs::check_axioms(sp, bd);
    REQUIRE(reports.size() == trs::axiom_clauses().size());
    for (std::size_t i = 0; i < reports.size(); ++i) {
      INFO(sp.name() << " clause " << reports[i].axiom);
      CHECK(reports[i].axiom == std::string(trs::axiom_clauses()[i].id));
      CHECK(reports[i].pass());
      CHECK_FALSE(reports[i].incomplete);
      CHECK(reports[i].instances > 0);
    }
  };

  expect_all_pass(trs::param_space{0, false}, trs::axiom_budget{3, big});
  expect_all_pass(trs::param_space{1, false}, trs::axiom_budget{3, big});
  expect_all_pass(trs::param_space{0, true}, trs::axiom_budget{3, big});
  expect_all_pass(trs::gapw_space{1, 1}, trs::axiom_budget{2, big});
  expect_all_pass(trs::gapw_space{1, 2}, trs::axiom_budget{2, big});
  expect_all_pass(trs::gpart_space{trs::trivial_group()}, trs::axiom_budget{2, big});
  expect_all_pass(trs::gpart_space{trs::cyclic_group(2)}, trs::axiom_budget{2, big});
  expect_all_pass(trs::ech_space{trs::prime_field{2}}, trs::axiom_budget{3, big});
}

TEST_CASE("axiom clause table is fixed and unknown ids are rejected", "[core][axioms]") {
  const auto& tbl = trs::axiom_clauses();
  const std::vector<std::string> ids = {"A1a", "A1b", "A1c", "A2a", "A2b", "A5c", "A5d",
                                        "A5e", "A6a", "A6c", "A6d", "A7b", "A7c"};
  REQUIRE(tbl.size() == ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    REQUIRE(tbl[i].id == ids[i]);
    REQUIRE_FALSE(std::string(tbl[i].statement).empty());
    REQUIRE_FALSE(std::string(tbl[i].quantifiers).empty());
  }

  trs::param_space sp;
  REQUIRE_THROWS_AS(trs::check_axiom(sp, "A4", trs::axiom_budget{2, 100000}),
                    trs::domain_error);
}

TEST_CASE("axiom reports serialize with stable keys and deterministic order", "[core][axioms]") {
  trs::axiom_report r;
  r.axiom = "A1a";
  r.instances = 3;
  REQUIRE(trs::axiom_report_to_json(r).dump() ==
          "{\"schema\":\"trskit/1\",\"axiom\":\"A1a\",\"instances\":3,"
          "\"pass\":true,\"incomplete\":false,\"violations\":[]}");

  trs::gpart_space sp{trs::cyclic_group(2)};
  const trs::axiom_budget bd{2, trs::budget{}.max_nodes};
  const auto run1 = trs::check_axioms(sp, bd);
  const auto run2 = trs::check_axioms(sp, bd);
  REQUIRE(run1.size() == run2.size());
  for (std::size_t i = 0; i < run1.size(); ++i)
    REQUIRE(trs::axiom_report_to_json(run1[i]).dump() ==
            trs::axiom_report_to_json(run2[i]).dump());
}

TEST_CASE("node budgets mark interrupted harness runs incomplete", "[core][axioms]") {
  trs::param_space sp;
  const auto cut = trs::check_axiom(sp, "A5c", trs::axiom_budget{3, 10});
  REQUIRE(cut.incomplete);
  REQUIRE(cut.violations.empty());

  const auto full = trs::check_axiom(sp, "A5c", trs::axiom_budget{3, trs::budget{}.max_nodes});
  REQUIRE_FALSE(full.incomplete);
  REQUIRE(full.pass());
  REQUIRE(full.instances > 0);
}

TEST_CASE("corrupted operations violate exactly their documented clause", "[core][axioms]") {
  const std::size_t big = trs::budget{}.max_nodes;
  const auto check_mutant = [&](const auto& honest, const auto& mutant, const char* clause,
                                std::size_t extent) {
    const trs::axiom_budget bd{extent, big};
    const auto bad = trs::check_axiom(mutant, clause, bd);
    INFO(honest.name() << " clause " << clause);
    REQUIRE_FALSE(bad.incomplete);
    REQUIRE(bad.violations.size() >= 1);
    REQUIRE(std::is_sorted(
        bad.violations.begin(), bad.violations.end(),
        [](const trs::json& x, const trs::json& y) { return x.dump() < y.dump(); }));
    const auto good = trs::check_axiom(honest, clause, bd);
    REQUIRE(good.pass());
    REQUIRE_FALSE(good.incomplete);
    REQUIRE(good.instances > 0);
  };

  check_mutant(trs::param_space{}, trs::param_space_mutant{}, "A5c", 3);

  trs::gapw_space gapw_honest{1, 2};
  trs::gapw_space_mutant gapw_bad;
  gapw_bad.t = 1;
  gapw_bad.m = 2;
  check_mutant(gapw_honest, gapw_bad, "A5d", 2);

  trs::gpart_space gpart_honest{trs::cyclic_group(2)};
  trs::gpart_space_mutant gpart_bad;
  gpart_bad.g = trs::cyclic_group(2);
  check_mutant(gpart_honest, gpart_bad, "A5d", 2);

  check_mutant(trs::ech_space{trs::prime_field{2}}, trs::ech_space_mutant{}, "A5c", 2);
}
