#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include <trskit/words_hj.hpp>

using namespace trs;

namespace {

word mkword(std::size_t symbols, std::size_t variable, std::vector<std::size_t> letters) {
  return word{symbols, variable, std::move(letters)};
}

gap_word mkw(std::size_t t, std::size_t m, std::size_t k, std::vector<std::size_t> cells) {
  return gap_word{t, m, k, cells.size() / m, std::move(cells)};
}

// Counts every way to write u as a substitution-concatenation with strictly
// increasing indices, trying all letters at each block. Independent of the
// library's forced-letter search.
std::size_t count_decomps(const word& u, const word_seq& s, std::size_t pos, std::size_t lo) {
  if (pos == u.size()) return 1;
  std::size_t total = 0;
  for (std::size_t n = lo; n < s.base.size(); ++n)
    for (std::size_t l = 0; l < u.symbols; ++l) {
      word b = substitute(s.base[n], l);
      if (pos + b.size() <= u.size() &&
          std::equal(b.letters.begin(), b.letters.end(), u.letters.begin() + pos))
        total += count_decomps(u, s, pos + b.size(), n + 1);
    }
  return total;
}

}  // namespace

TEST_CASE("substitution replaces the variable and keeps the length") {
  word w = mkword(3, 2, {0, 2, 1, 2});
  CHECK(word_is_variable(w));
  CHECK(substitute(w, 0) == mkword(3, 2, {0, 0, 1, 0}));
  CHECK(substitute(w, 2) == w);
  for (std::size_t l = 0; l < 3; ++l) CHECK(substitute(w, l).size() == w.size());

  word vonly = mkword(2, 1, {1, 1});
  word c = substitute(vonly, 0);
  CHECK(c == mkword(2, 1, {0, 0}));
  CHECK_FALSE(word_is_variable(c));

  CHECK_THROWS_AS(substitute(w, 3), domain_error);
  CHECK_THROWS_AS(substitute(c, 0), domain_error);
  CHECK_THROWS_AS(word_validate(mkword(2, 2, {0})), domain_error);
  CHECK_THROWS_AS(word_validate(mkword(2, 1, {2})), domain_error);
}

TEST_CASE("rapid increase validation and the doubling base") {
  word_seq s = doubling_base(3, 1, 5);
  CHECK(wordseq_check(s) == 0);
  for (std::size_t n = 0; n < 5; ++n) {
    CHECK(s.base[n].size() == (std::size_t{1} << n));
    for (std::size_t l : s.base[n].letters) CHECK(l == 1);
  }
  // Any prefix of a valid sequence is valid.
  for (std::size_t n = 0; n <= 5; ++n) {
    word_seq p{std::vector<word>(s.base.begin(), s.base.begin() + n)};
    CHECK(wordseq_check(p) == 0);
  }

  word v = mkword(2, 1, {1});
  word vv = mkword(2, 1, {1, 1});
  CHECK(wordseq_check(word_seq{{v, vv}}) == 0);
  CHECK(wordseq_check(word_seq{{v, v}}) == 3);
  CHECK(wordseq_check(word_seq{{vv, v}}) == 3);
  CHECK(wordseq_check(word_seq{{v, vv, mkword(2, 1, {1, 1, 1})}}) == 3);
  CHECK(wordseq_check(word_seq{{v, mkword(3, 1, {1, 1})}}) == 1);
  CHECK(wordseq_check(word_seq{{v, mkword(2, 1, {0, 0})}}) == 2);
}

TEST_CASE("span elements match direct word enumeration") {
  word_seq s{{mkword(2, 1, {1}), mkword(2, 1, {1, 1})}};
  auto spans = span_elements(s, 2);

  std::set<word> got;
  for (const span_element& e : spans) {
    CHECK(word_is_variable(e.u));
    CHECK(span_word(s, e.terms) == e.u);
    got.insert(e.u);
  }
  CHECK(got.size() == spans.size());
  CHECK(got == std::set<word>{mkword(2, 1, {1}), mkword(2, 1, {1, 1}), mkword(2, 1, {0, 1, 1}),
                              mkword(2, 1, {1, 0, 0}), mkword(2, 1, {1, 1, 1})});
  CHECK(got.count(mkword(2, 1, {0, 0, 0})) == 0);

  // Every word over the alphabet is in the span exactly when the direct
  // matcher finds a variable decomposition.
  for (std::size_t len = 1; len <= 3; ++len) {
    std::vector<std::size_t> ls(len, 0);
    while (true) {
      word u = mkword(2, 1, ls);
      bool member = word_is_variable(u) && count_decomps(u, s, 0, 0) > 0;
      CHECK(member == (got.count(u) == 1));
      std::size_t pos = len;
      bool done = true;
      while (pos > 0) {
        --pos;
        if (++ls[pos] < 2) {
          done = false;
          break;
        }
        ls[pos] = 0;
      }
      if (done) break;
    }
  }

  // Letter restriction drops the constant-letter blocks.
  auto vonly = span_elements(s, 2, {1});
  CHECK(vonly.size() == 3);
  for (const span_element& e : vonly)
    for (auto [n, l] : e.terms) {
      (void)n;
      CHECK(l == 1);
    }
  CHECK_THROWS_AS(span_elements(s, 2, {2}), domain_error);
}

TEST_CASE("decomposition is unique and round trips on the span") {
  word_seq s{{mkword(2, 1, {1}), mkword(2, 1, {1, 1})}};
  word u = mkword(2, 1, {0, 1, 1});
  auto d = decompose(u, s);
  REQUIRE(d.has_value());
  CHECK(*d == span_terms{{0, 0}, {1, 1}});

  word_seq s3 = doubling_base(3, 1, 3);
  std::size_t checked = 0;
  for (const word_seq& seq : {s, s3})
    for (const span_element& e : span_elements(seq, 3)) {
      CHECK(count_decomps(e.u, seq, 0, 0) == 1);
      auto r = decompose(e.u, seq);
      REQUIRE(r.has_value());
      CHECK(*r == e.terms);
      ++checked;
    }
  CHECK(checked > 40);

  CHECK_FALSE(decompose(mkword(2, 1, {0, 1}), s).has_value());
  CHECK_FALSE(decompose(mkword(2, 1, {1, 1, 1, 1}), s).has_value());
  CHECK_FALSE(decompose(mkword(2, 1, {0, 0}), s).has_value());
  CHECK_THROWS_AS(decompose(mkword(3, 1, {1}), s), domain_error);
  CHECK_THROWS_AS(decompose(u, word_seq{{mkword(2, 1, {1}), mkword(2, 1, {1})}}), domain_error);
}

TEST_CASE("transferred colorings evaluate symbol rectangles over the truncation") {
  gap_word a = mkw(1, 1, 4, {0, 1, 2, 3, 4});
  word_seq s = doubling_base(2, 1, 3);

  std::map<gap_word, std::size_t> table{{mkw(1, 1, 1, {0, 1, 0, 0}), 1},
                                        {mkw(1, 1, 1, {0, 1, 1, 0}), 2},
                                        {mkw(1, 1, 1, {0, 0, 1, 0, 0}), 3}};
  gapw_coloring c = [table](const gap_word& f) {
    auto it = table.find(f);
    return it == table.end() ? std::size_t{9} : it->second;
  };
  word_coloring ct = transfer_coloring(c, s, a);

  CHECK(ct(mkword(2, 1, {1})) == 1);
  CHECK(ct(mkword(2, 1, {1, 1, 1})) == 2);
  CHECK(ct(mkword(2, 1, {0, 1, 1})) == 3);
  // Quotient collisions: a dumped class leaves the same rectangle as an
  // absorbed untouched class.
  CHECK(ct(mkword(2, 1, {1, 0, 0})) == 1);
  CHECK(ct(mkword(2, 1, {1, 1})) == 3);

  CHECK(ct(mkword(2, 1, {0, 1})) == 0);
  CHECK_THROWS_AS(ct(mkword(2, 1, {0, 0})), domain_error);
  // w_2(v) names the third free class; its rectangle cutoff needs class 5,
  // beyond the four truncated classes.
  CHECK_THROWS_AS(ct(mkword(2, 1, {1, 1, 1, 1})), budget_error);
  word_seq s5 = doubling_base(2, 1, 5);
  word_coloring ct5 = transfer_coloring(c, s5, a);
  CHECK_THROWS_AS(ct5(mkword(2, 1, std::vector<std::size_t>(16, 1))), budget_error);

  constexpr std::size_t mismatch = 0;
  CHECK_THROWS_AS(transfer_coloring(c, doubling_base(3, 1, 2), a), domain_error);
  CHECK_THROWS_AS(transfer_coloring(c, doubling_base(2, mismatch, 2), a), domain_error);
}

TEST_CASE("monochromatic span data recolors combinations constantly") {
  gap_word a = mkw(1, 1, 4, {0, 1, 2, 3, 4});
  word_seq s = doubling_base(2, 1, 3);
  // Two span elements on disjoint index blocks, rapidly increasing.
  word u0 = mkword(2, 1, {1});
  word u1 = mkword(2, 1, {1, 1, 1, 1, 1, 1});
  REQUIRE(decompose(u1, s) == span_terms{{1, 1}, {2, 1}});
  word_seq outer{{u0, u1}};
  REQUIRE(wordseq_check(outer) == 0);

  // Substituting outer letters keeps each inner block's own letters, so the
  // flattened terms are the inner ones with v-blocks relettered.
  auto flatten = [&](const span_terms& ot) {
    span_terms flat;
    for (auto [j, l] : ot) {
      auto inner = decompose(outer.base[j], s);
      REQUIRE(inner.has_value());
      for (auto [n, li] : *inner) flat.emplace_back(n, li == 1 ? l : li);
    }
    return flat;
  };

  auto elements = span_elements(outer, 2);
  CHECK(elements.size() == 5);
  std::set<gap_word> images;
  for (const span_element& e : elements) {
    auto flat = decompose(e.u, s);
    REQUIRE(flat.has_value());
    CHECK(*flat == flatten(e.terms));
    images.insert(gapw_symbol_encode(span_terms_symbol(*flat, a.t), a));
  }
  CHECK(images.size() == 3);

  gapw_coloring c = [images](const gap_word& f) {
    return images.count(f) ? std::size_t{7} : std::size_t{11};
  };
  word_coloring ct = transfer_coloring(c, s, a);
  for (const span_element& e : elements) CHECK(ct(e.u) == 7);
}

TEST_CASE("line search certifies lengths and exhibits defeating colorings") {
  // A one-letter alphabet has single-point lines.
  word_coloring any = [](const word&) { return std::size_t{0}; };
  auto w1 = hj_find_line(any, 1, 1);
  REQUIRE(w1.has_value());
  CHECK(*w1 == mkword(2, 1, {1}));
  CHECK_FALSE(hj_defeating_coloring(1, 3, 1).has_value());

  // Two letters, two colors: length 1 is defeated, length 2 is not.
  auto d1 = hj_defeating_coloring(2, 2, 1);
  REQUIRE(d1.has_value());
  CHECK(*d1 == std::vector<std::size_t>{0, 1});
  CHECK_FALSE(hj_defeating_coloring(2, 2, 2).has_value());

  // Three letters, two colors: length 2 is still defeated, and the returned
  // table defeats every line by direct inspection.
  auto d2 = hj_defeating_coloring(3, 2, 2);
  REQUIRE(d2.has_value());
  REQUIRE(d2->size() == 9);
  for (std::size_t p0 = 0; p0 < 4; ++p0)
    for (std::size_t p1 = 0; p1 < 4; ++p1) {
      if (p0 != 3 && p1 != 3) continue;
      std::set<std::size_t> seen;
      for (std::size_t l = 0; l < 3; ++l) {
        std::size_t a = p0 == 3 ? l : p0;
        std::size_t b = p1 == 3 ? l : p1;
        seen.insert((*d2)[a * 3 + b]);
      }
      CHECK(seen.size() > 1);
    }

  // Witness order is canonical: the constant coloring's first line.
  auto w2 = hj_find_line(any, 2, 2);
  REQUIRE(w2.has_value());
  CHECK(*w2 == mkword(3, 2, {0, 2}));

  word_coloring tc = table_coloring({0, 1, 2, 3}, 2, 2);
  CHECK(tc(mkword(3, 2, {1, 0})) == 2);
  CHECK_THROWS_AS(tc(mkword(3, 2, {1})), domain_error);
  CHECK_THROWS_AS(tc(mkword(3, 2, {1, 2})), domain_error);
  CHECK_THROWS_AS(table_coloring({0, 1}, 2, 2), domain_error);

  node_counter nc(3);
  CHECK_THROWS_AS(hj_defeating_coloring(2, 2, 2, &nc), budget_error);
}

TEST_CASE("word serialization round trips") {
  word w = mkword(3, 2, {0, 2, 1, 2});
  CHECK(word_to_string(w) == "0v1v");
  CHECK(word_from_string("0v1v", 3, 2) == w);
  json j = word_to_json(w);
  CHECK(j["space"] == "word");
  CHECK(word_from_json(j) == w);

  CHECK_THROWS_AS(word_from_string("2", 3, 2), domain_error);
  CHECK_THROWS_AS(word_from_string("x", 3, 2), domain_error);
  CHECK_THROWS_AS(word_from_string("5", 3, 2), domain_error);
  CHECK_THROWS_AS(word_to_string(mkword(11, 10, {10})), domain_error);

  word_seq s = doubling_base(3, 1, 3);
  json js = wordseq_to_json(s);
  CHECK(js["space"] == "word_seq");
  CHECK(js["base"] == json::array({"v", "vv", "vvvv"}));
  CHECK(wordseq_from_json(js) == s);

  json bad = js;
  bad["base"] = json::array({"vv", "v"});
  CHECK_THROWS_AS(wordseq_from_json(bad), domain_error);
  json badspace = j;
  badspace["space"] = "fin";
  CHECK_THROWS_AS(word_from_json(badspace), domain_error);
}
