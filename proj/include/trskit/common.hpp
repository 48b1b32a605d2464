#pragma once

#include <cstddef>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace trs {

using json = nlohmann::ordered_json;

inline constexpr const char* schema_tag = "trskit/1";

// Input violates a structural precondition of the requested operation.
class domain_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Request reaches past the finite truncation held in memory, or past an
// explicit node budget. Distinct from domain_error so callers can extend
// the truncation and retry.
class budget_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct budget {
  std::size_t max_extent = 4;            // domain extent of enumerated words
  std::size_t max_classes = 4;           // class extent of enumerated words
  std::size_t max_nodes = 50'000'000;    // instance cap for exhaustive sweeps

  static budget from_env() {
    budget b;
    if (const char* s = std::getenv("TRSKIT_BUDGET")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(s, &end, 10);
      if (end && *end == '\0' && v > 0) b.max_nodes = static_cast<std::size_t>(v);
    }
    return b;
  }
};

// Cooperative counter for exhaustive sweeps; throws once the cap is passed.
class node_counter {
 public:
  explicit node_counter(std::size_t cap) : cap_(cap) {}
  void tick(std::size_t n = 1) {
    used_ += n;
    if (used_ > cap_) throw budget_error("node budget exhausted after " + std::to_string(used_) + " instances");
  }
  std::size_t used() const { return used_; }

 private:
  std::size_t used_ = 0;
  std::size_t cap_;
};

inline void expect(bool cond, const char* msg) {
  if (!cond) throw domain_error(msg);
}

}  // namespace trs
