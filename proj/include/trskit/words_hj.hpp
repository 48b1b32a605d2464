#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <trskit/gap_word.hpp>

namespace trs {

// Word over a finite alphabet [0, symbols) with one reserved variable symbol.
// Constant words never mention the variable; a variable word mentions it at
// least once. Both share this type, the predicate below tells them apart.
struct word {
  std::size_t symbols = 2;
  std::size_t variable = 1;
  std::vector<std::size_t> letters;

  auto operator<=>(const word&) const = default;
  std::size_t size() const { return letters.size(); }
};

inline void word_validate(const word& w) {
  expect(w.symbols > 0, "word needs a nonempty alphabet");
  expect(w.variable < w.symbols, "variable symbol outside the alphabet");
  for (std::size_t l : w.letters) expect(l < w.symbols, "letter outside the alphabet");
}

inline bool word_is_variable(const word& w) {
  return std::find(w.letters.begin(), w.letters.end(), w.variable) != w.letters.end();
}

inline bool same_alphabet(const word& a, const word& b) {
  return a.symbols == b.symbols && a.variable == b.variable;
}

inline word word_concat(word a, const word& b) {
  expect(same_alphabet(a, b), "concatenation needs a common alphabet");
  a.letters.insert(a.letters.end(), b.letters.begin(), b.letters.end());
  return a;
}

// Replace every occurrence of the variable by l. Substituting the variable
// itself is the identity.
inline word substitute(const word& w, std::size_t l) {
  word_validate(w);
  expect(word_is_variable(w), "substitution needs a variable word");
  if (l >= w.symbols) throw domain_error("substituted letter outside the alphabet");
  word r = w;
  for (std::size_t& x : r.letters)
    if (x == w.variable) x = l;
  return r;
}

struct word_seq {
  std::vector<word> base;

  auto operator<=>(const word_seq&) const = default;
};

// 0 ok; 1 mixed alphabets; 2 a base word without the variable; 3 lengths not
// rapidly increasing (each length must exceed the sum of all earlier ones).
inline int wordseq_check(const word_seq& s) {
  for (const word& w : s.base) word_validate(w);
  for (std::size_t n = 1; n < s.base.size(); ++n)
    if (!same_alphabet(s.base[n], s.base[0])) return 1;
  for (const word& w : s.base)
    if (!word_is_variable(w)) return 2;
  std::size_t total = 0;
  for (const word& w : s.base) {
    if (w.size() <= total) return 3;
    total += w.size();
  }
  return 0;
}

inline void wordseq_validate(const word_seq& s) {
  int c = wordseq_check(s);
  if (c != 0) throw domain_error("invalid word sequence (condition " + std::to_string(c) + ")");
}

// The canonical rapidly increasing base: the n-th word is the variable
// repeated 2^n times.
inline word_seq doubling_base(std::size_t symbols, std::size_t variable, std::size_t count) {
  expect(count <= 20, "doubling base longer than 2^20 letters");
  word_seq s;
  for (std::size_t n = 0; n < count; ++n)
    s.base.push_back(word{symbols, variable,
                          std::vector<std::size_t>(std::size_t{1} << n, variable)});
  wordseq_validate(s);
  return s;
}

// Terms (n_i, l_i) with strictly increasing indices: the built word is the
// concatenation of the base words with their letters substituted in.
using span_terms = std::vector<std::pair<std::size_t, std::size_t>>;

inline word span_word(const word_seq& s, const span_terms& terms) {
  wordseq_validate(s);
  expect(!s.base.empty(), "span over an empty base");
  word u{s.base[0].symbols, s.base[0].variable, {}};
  std::size_t prev = 0;
  bool first = true;
  for (auto [n, l] : terms) {
    expect(n < s.base.size(), "span index outside the base");
    expect(first || n > prev, "span indices must strictly increase");
    first = false;
    prev = n;
    u = word_concat(u, substitute(s.base[n], l));
  }
  return u;
}

struct span_element {
  word u;
  span_terms terms;

  auto operator<=>(const span_element&) const = default;
};

// All substitution-concatenations with at most max_terms terms that mention
// the variable, each with its defining term list. Letters default to the
// whole alphabet; a nonempty letter set restricts them. All index tuples are
// strictly increasing, the first index included.
inline std::vector<span_element> span_elements(const word_seq& s, std::size_t max_terms,
                                               const std::vector<std::size_t>& letters = {}) {
  wordseq_validate(s);
  std::vector<std::size_t> ls = letters;
  if (ls.empty() && !s.base.empty())
    for (std::size_t l = 0; l < s.base[0].symbols; ++l) ls.push_back(l);
  std::vector<span_element> out;
  span_terms cur;
  auto rec = [&](auto&& self, std::size_t lo) -> void {
    if (!cur.empty()) {
      word u = span_word(s, cur);
      if (word_is_variable(u)) out.push_back(span_element{std::move(u), cur});
    }
    if (cur.size() == max_terms) return;
    for (std::size_t n = lo; n < s.base.size(); ++n)
      for (std::size_t l : ls) {
        expect(l < s.base[0].symbols, "span letter outside the alphabet");
        cur.emplace_back(n, l);
        self(self, n + 1);
        cur.pop_back();
      }
  };
  if (!s.base.empty()) rec(rec, 0);
  std::sort(out.begin(), out.end(), [](const span_element& a, const span_element& b) {
    if (a.terms.size() != b.terms.size()) return a.terms.size() < b.terms.size();
    return a.terms < b.terms;
  });
  return out;
}

// The term list rebuilding u from the base, or nullopt when u is not a
// substitution-concatenation. Rapid increase makes the answer unique: at a
// v-position of a candidate block the letter is forced by u itself.
inline std::optional<span_terms> decompose(const word& u, const word_seq& s) {
  wordseq_validate(s);
  word_validate(u);
  expect(s.base.empty() || same_alphabet(u, s.base[0]), "decompose needs matching alphabets");
  if (!word_is_variable(u)) return std::nullopt;
  span_terms acc;
  auto rec = [&](auto&& self, std::size_t pos, std::size_t lo) -> bool {
    if (pos == u.size()) return !acc.empty();
    for (std::size_t n = lo; n < s.base.size(); ++n) {
      const word& w = s.base[n];
      if (pos + w.size() > u.size()) break;
      std::size_t vp = 0;
      while (w.letters[vp] != w.variable) ++vp;
      std::size_t l = u.letters[pos + vp];
      bool match = true;
      for (std::size_t i = 0; match && i < w.size(); ++i)
        match = u.letters[pos + i] == (w.letters[i] == w.variable ? l : w.letters[i]);
      if (!match) continue;
      acc.emplace_back(n, l);
      if (self(self, pos + w.size(), n + 1)) return true;
      acc.pop_back();
    }
    return false;
  };
  if (rec(rec, 0, 0)) return acc;
  return std::nullopt;
}

using word_coloring = std::function<std::size_t(const word&)>;
using gapw_coloring = std::function<std::size_t(const gap_word&)>;

// The symbol named by a span decomposition: letters are the shift levels and
// the word index n picks the n-th free class, absolute index t + n.
inline gap_symbol span_terms_symbol(const span_terms& terms, std::size_t t) {
  gap_symbol sym;
  for (auto [n, l] : terms) sym.terms.emplace_back(l, t + n);
  return sym;
}

// Pull a coloring of encoded symbol rectangles back to words. A word in the
// span goes to the color of its symbol's rectangle over a; any other variable
// word gets 0. The alphabet must be the shift levels of a with the variable
// at t. Classes or rectangles beyond the truncation raise budget_error.
inline word_coloring transfer_coloring(gapw_coloring c, word_seq s, gap_word a) {
  wordseq_validate(s);
  gapw_validate(a);
  expect(!s.base.empty(), "transfer needs a nonempty base");
  expect(s.base[0].symbols == a.t + a.m && s.base[0].variable == a.t,
         "transfer needs the alphabet of shift levels with the variable at t");
  return [c = std::move(c), s = std::move(s), a = std::move(a)](const word& u) -> std::size_t {
    expect(word_is_variable(u), "transferred coloring needs a variable word");
    std::optional<span_terms> terms = decompose(u, s);
    if (!terms) return 0;
    for (auto [n, l] : *terms) {
      (void)l;
      if (a.t + n >= a.class_count())
        throw budget_error("span index beyond the truncated classes");
    }
    return c(gapw_symbol_encode(span_terms_symbol(*terms, a.t), a));
  };
}

// Canonical index of a constant word: big-endian base-alphabet value.
inline std::size_t hj_word_index(const word& u) {
  std::size_t ix = 0;
  for (std::size_t l : u.letters) {
    expect(l != u.variable, "coloring table index needs a constant word");
    ix = ix * (u.symbols - 1) + (l < u.variable ? l : l - 1);
  }
  return ix;
}

// Coloring of the constant words of one fixed length from a flat table
// indexed by hj_word_index.
inline word_coloring table_coloring(std::vector<std::size_t> table, std::size_t alphabet,
                                    std::size_t length) {
  expect(alphabet > 0, "coloring needs a nonempty alphabet");
  std::size_t slots = 1;
  for (std::size_t i = 0; i < length; ++i) slots *= alphabet;
  expect(table.size() == slots, "coloring table size must be alphabet^length");
  return [table = std::move(table), alphabet, length](const word& u) -> std::size_t {
    expect(u.symbols == alphabet + 1 && u.variable == alphabet && u.size() == length,
           "colored word outside the table's domain");
    return table[hj_word_index(u)];
  };
}

// First variable word of the given length, in ascending letter order, whose
// substitution line {w(l) : l constant} is monochromatic for c; nullopt when
// no line of this length is monochromatic.
inline std::optional<word> hj_find_line(const word_coloring& c, std::size_t alphabet,
                                        std::size_t length) {
  expect(alphabet > 0 && length > 0, "line search needs letters and a positive length");
  word w{alphabet + 1, alphabet, std::vector<std::size_t>(length, 0)};
  while (true) {
    if (word_is_variable(w)) {
      std::size_t col = c(substitute(w, 0));
      bool mono = true;
      for (std::size_t l = 1; mono && l < alphabet; ++l) mono = c(substitute(w, l)) == col;
      if (mono) return w;
    }
    std::size_t pos = length;
    bool done = true;
    while (pos > 0) {
      --pos;
      if (++w.letters[pos] <= alphabet) {
        done = false;
        break;
      }
      w.letters[pos] = 0;
    }
    if (done) return std::nullopt;
  }
}

// Exhaustive check that every coloring of the constant words of this length
// admits a monochromatic line: returns the first defeating table if one
// exists, nullopt when the length suffices. The number of tables is
// colors^(alphabet^length); the counter caps the search.
inline std::optional<std::vector<std::size_t>> hj_defeating_coloring(std::size_t alphabet,
                                                                     std::size_t colors,
                                                                     std::size_t length,
                                                                     node_counter* nc = nullptr) {
  expect(colors > 0, "coloring needs at least one color");
  std::size_t slots = 1;
  for (std::size_t i = 0; i < length; ++i) {
    expect(slots < 100000, "alphabet^length too large to enumerate");
    slots *= alphabet;
  }
  std::vector<std::size_t> table(slots, 0);
  while (true) {
    if (nc) nc->tick();
    if (!hj_find_line(table_coloring(table, alphabet, length), alphabet, length)) return table;
    std::size_t pos = slots;
    bool done = true;
    while (pos > 0) {
      --pos;
      if (++table[pos] < colors) {
        done = false;
        break;
      }
      table[pos] = 0;
    }
    if (done) return std::nullopt;
  }
}

// Words print with digits for constant letters and 'v' for the variable;
// alphabets past ten symbols have no digit form.
inline std::string word_to_string(const word& w) {
  word_validate(w);
  expect(w.symbols <= 10, "word string form needs an alphabet of at most ten symbols");
  std::string s;
  for (std::size_t l : w.letters) s += l == w.variable ? 'v' : char('0' + l);
  return s;
}

inline word word_from_string(const std::string& s, std::size_t symbols, std::size_t variable) {
  word w{symbols, variable, {}};
  for (char ch : s) {
    if (ch == 'v') {
      w.letters.push_back(variable);
    } else if (ch >= '0' && ch <= '9') {
      std::size_t l = std::size_t(ch - '0');
      if (l == variable) throw domain_error("the variable symbol must be written as 'v'");
      w.letters.push_back(l);
    } else {
      throw domain_error("word letters must be digits or 'v'");
    }
  }
  word_validate(w);
  return w;
}

inline json word_to_json(const word& w) {
  json j;
  j["schema"] = schema_tag;
  j["space"] = "word";
  j["symbols"] = w.symbols;
  j["variable"] = w.variable;
  j["word"] = word_to_string(w);
  return j;
}

inline word word_from_json(const json& j) {
  if (j.value("space", std::string{}) != "word") throw domain_error("not a word value");
  return word_from_string(j.at("word").get<std::string>(), j.at("symbols").get<std::size_t>(),
                          j.at("variable").get<std::size_t>());
}

inline json wordseq_to_json(const word_seq& s) {
  wordseq_validate(s);
  json j;
  j["schema"] = schema_tag;
  j["space"] = "word_seq";
  j["symbols"] = s.base.empty() ? 2 : s.base[0].symbols;
  j["variable"] = s.base.empty() ? 1 : s.base[0].variable;
  json b = json::array();
  for (const word& w : s.base) b.push_back(word_to_string(w));
  j["base"] = std::move(b);
  return j;
}

inline word_seq wordseq_from_json(const json& j) {
  if (j.value("space", std::string{}) != "word_seq") throw domain_error("not a word sequence");
  std::size_t symbols = j.at("symbols").get<std::size_t>();
  std::size_t variable = j.at("variable").get<std::size_t>();
  word_seq s;
  for (const json& e : j.at("base"))
    s.base.push_back(word_from_string(e.get<std::string>(), symbols, variable));
  wordseq_validate(s);
  return s;
}

}  // namespace trs
