#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <trskit/gap_word.hpp>

namespace trs {

// Finite function into {0,...,m} stored by its support. Membership in FIN_m
// additionally needs m attained; pointwise_tetris images keep their ambient m
// while attaining less, so attainment is a check, not a structural field.
struct fin_func {
  std::size_t m = 1;
  std::map<std::size_t, std::size_t> entries;

  auto operator<=>(const fin_func&) const = default;
  bool empty() const { return entries.empty(); }
};

// 0 ok; 1 a stored value outside 1..m (zeros are never stored); 2 m not
// attained.
inline int fin_check(const fin_func& p) {
  expect(p.m > 0, "fin_func needs m >= 1");
  bool attained = false;
  for (auto [i, v] : p.entries) {
    (void)i;
    if (v == 0 || v > p.m) return 1;
    attained = attained || v == p.m;
  }
  return attained ? 0 : 2;
}

inline void fin_validate(const fin_func& p) {
  int c = fin_check(p);
  if (c != 0) throw domain_error("invalid FIN_m element (condition " + std::to_string(c) + ")");
}

inline std::size_t fin_supp_min(const fin_func& p) {
  expect(!p.entries.empty(), "support minimum of an empty function");
  return p.entries.begin()->first;
}

inline std::size_t fin_supp_max(const fin_func& p) {
  expect(!p.entries.empty(), "support maximum of an empty function");
  return p.entries.rbegin()->first;
}

inline std::size_t fin_attained_max(const fin_func& p) {
  std::size_t mx = 0;
  for (auto [i, v] : p.entries) {
    (void)i;
    mx = std::max(mx, v);
  }
  return mx;
}

// Coordinatewise sum: p's support must lie strictly before q's. The empty
// function is the identity on either side.
inline fin_func block_sum(const fin_func& p, const fin_func& q) {
  expect(p.m == q.m, "block_sum needs a common ambient m");
  if (p.entries.empty()) return q;
  if (q.entries.empty()) return p;
  if (fin_supp_max(p) >= fin_supp_min(q))
    throw domain_error("block_sum needs p's support strictly before q's");
  fin_func r = p;
  for (auto [i, v] : q.entries) r.entries.emplace(i, v);
  return r;
}

// Pointwise decrement clamped at 0; entries that hit 0 leave the support.
// The ambient m is kept so images mix with unshifted functions in sums.
inline fin_func pointwise_tetris(const fin_func& p) {
  fin_func r;
  r.m = p.m;
  for (auto [i, v] : p.entries)
    if (v > 1) r.entries.emplace(i, v - 1);
  return r;
}

inline fin_func pointwise_tetris_pow(std::size_t s, const fin_func& p) {
  fin_func r;
  r.m = p.m;
  for (auto [i, v] : p.entries)
    if (v > s) r.entries.emplace(i, v - s);
  return r;
}

struct block_sequence {
  std::size_t m = 1;
  std::vector<fin_func> blocks;

  auto operator<=>(const block_sequence&) const = default;
};

// 0 ok; 1 a block with a different ambient m; 2 a block that is not a FIN_m
// element; 3 consecutive supports not separated.
inline int blockseq_check(const block_sequence& P) {
  expect(P.m > 0, "block_sequence needs m >= 1");
  for (const fin_func& b : P.blocks)
    if (b.m != P.m) return 1;
  for (const fin_func& b : P.blocks)
    if (fin_check(b) != 0) return 2;
  for (std::size_t n = 0; n + 1 < P.blocks.size(); ++n)
    if (fin_supp_max(P.blocks[n]) >= fin_supp_min(P.blocks[n + 1])) return 3;
  return 0;
}

inline void blockseq_validate(const block_sequence& P) {
  int c = blockseq_check(P);
  if (c != 0) throw domain_error("invalid block sequence (condition " + std::to_string(c) + ")");
}

// The table of a block sequence: block n paints value n+1 at cell
// (i+1, p_n(i)-1) for every support position i, everything else is constant
// 0. Positions shift one row down so row 0 stays constant as the rectangle
// demands; supports must fit below the extent.
inline gap_word fin_to_gapword(const block_sequence& P, std::size_t extent) {
  blockseq_validate(P);
  for (const fin_func& b : P.blocks)
    if (fin_supp_max(b) >= extent) throw domain_error("extent too small for the block supports");
  gap_word a{1, P.m, P.blocks.size(), 1 + extent,
             std::vector<std::size_t>((1 + extent) * P.m, 0)};
  for (std::size_t n = 0; n < P.blocks.size(); ++n)
    for (auto [i, v] : P.blocks[n].entries) a.at(i + 1, v - 1) = n + 1;
  gapw_validate(a);
  return a;
}

// Inverse reading: a cell (i, j) of class n+1 puts value j+1 at position i-1.
inline block_sequence fin_from_gapword(const gap_word& a) {
  if (a.t != 1) throw domain_error("block sequences need t = 1");
  gapw_validate(a);
  block_sequence P;
  P.m = a.m;
  for (std::size_t n = 1; n < a.class_count(); ++n) {
    fin_func p;
    p.m = a.m;
    for (auto [i, j] : gapw_class_of(a, n)) p.entries.emplace(i - 1, j + 1);
    P.blocks.push_back(std::move(p));
  }
  expect(blockseq_check(P) == 0, "gap word classes decode to a block sequence");
  return P;
}

inline json fin_to_json(const fin_func& p) {
  json j;
  j["schema"] = schema_tag;
  j["space"] = "fin";
  j["m"] = p.m;
  json e = json::array();
  for (auto [i, v] : p.entries) e.push_back(json::array({i, v}));
  j["entries"] = std::move(e);
  return j;
}

// Accepts unattained images (fin_check 2) so tetris values round trip, but
// rejects malformed entries.
inline fin_func fin_from_json(const json& j) {
  if (j.value("space", std::string{}) != "fin") throw domain_error("not a fin value");
  fin_func p;
  p.m = j.at("m").get<std::size_t>();
  if (p.m == 0) throw domain_error("fin m must be positive");
  for (const json& e : j.at("entries")) {
    if (!e.is_array() || e.size() != 2) throw domain_error("fin entry must be [row, value]");
    auto [it, fresh] = p.entries.emplace(e[0].get<std::size_t>(), e[1].get<std::size_t>());
    if (!fresh) throw domain_error("duplicate fin entry row");
  }
  if (fin_check(p) == 1) throw domain_error("fin entry value outside 1..m");
  return p;
}

inline json blockseq_to_json(const block_sequence& P) {
  json j;
  j["schema"] = schema_tag;
  j["space"] = "fin_blockseq";
  j["m"] = P.m;
  json blocks = json::array();
  for (const fin_func& b : P.blocks) {
    json e = json::array();
    for (auto [i, v] : b.entries) e.push_back(json::array({i, v}));
    blocks.push_back(std::move(e));
  }
  j["blocks"] = std::move(blocks);
  return j;
}

inline block_sequence blockseq_from_json(const json& j) {
  if (j.value("space", std::string{}) != "fin_blockseq") throw domain_error("not a block sequence");
  block_sequence P;
  P.m = j.at("m").get<std::size_t>();
  if (P.m == 0) throw domain_error("block sequence m must be positive");
  for (const json& be : j.at("blocks")) {
    fin_func p;
    p.m = P.m;
    for (const json& e : be) {
      if (!e.is_array() || e.size() != 2) throw domain_error("fin entry must be [row, value]");
      auto [it, fresh] = p.entries.emplace(e[0].get<std::size_t>(), e[1].get<std::size_t>());
      if (!fresh) throw domain_error("duplicate fin entry row");
    }
    P.blocks.push_back(std::move(p));
  }
  blockseq_validate(P);
  return P;
}

}  // namespace trs
