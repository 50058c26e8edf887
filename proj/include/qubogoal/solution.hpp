#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qubogoal/bitvector.hpp"
#include "qubogoal/qubo.hpp"
#include "qubogoal/targets.hpp"

namespace qubogoal {

/// One satisficing solution. f is reported in the instance's original sense;
/// af is the achievement value under the run's target (always nonpositive).
struct SolutionRecord {
  BitVector x;
  std::int64_t f = 0;
  AchievementValue af;
  std::uint64_t iter_found = 0;
  std::uint64_t time_found_ms = 0;

  friend bool operator==(const SolutionRecord& a, const SolutionRecord& b) {
    return a.x == b.x && a.f == b.f && a.af == b.af && a.iter_found == b.iter_found &&
           a.time_found_ms == b.time_found_ms;
  }
};

enum class SolutionOrder { objective_desc, objective_asc, discovery };

inline std::string to_string(SolutionOrder o) {
  switch (o) {
    case SolutionOrder::objective_desc: return "obj-desc";
    case SolutionOrder::objective_asc: return "obj-asc";
    case SolutionOrder::discovery: return "found";
  }
  throw std::logic_error("to_string(SolutionOrder): unreachable");
}

inline SolutionOrder solution_order_from_string(const std::string& s) {
  if (s == "obj-desc") return SolutionOrder::objective_desc;
  if (s == "obj-asc") return SolutionOrder::objective_asc;
  if (s == "found") return SolutionOrder::discovery;
  throw std::invalid_argument("unknown order: " + s);
}

/// Provenance carried by a solution set so its file form is self-describing
/// and a run can be reproduced.
struct RunContext {
  std::uint32_t n = 0;
  std::string target;  // textual target form, original sense
  std::uint64_t seed = 0;
  Sense sense = Sense::minimize;

  friend bool operator==(const RunContext&, const RunContext&) = default;
};

/// Distinct satisficing solutions, ordered per `order`.
struct SolutionSet {
  std::vector<SolutionRecord> records;
  SolutionOrder order = SolutionOrder::discovery;
  RunContext context;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }

  std::vector<BitVector> bit_patterns() const {
    std::vector<BitVector> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.x);
    std::sort(out.begin(), out.end());
    return out;
  }

  friend bool operator==(const SolutionSet& a, const SolutionSet& b) {
    return a.records == b.records && a.order == b.order && a.context == b.context;
  }
};

/// Reorders records in place. Objective orders break ties by ascending
/// canonical bit encoding so every ordering is total and deterministic.
inline void sort_solutions(SolutionSet& set, SolutionOrder order) {
  switch (order) {
    case SolutionOrder::objective_desc:
      std::sort(set.records.begin(), set.records.end(),
                [](const SolutionRecord& a, const SolutionRecord& b) {
                  if (a.f != b.f) return a.f > b.f;
                  return a.x < b.x;
                });
      break;
    case SolutionOrder::objective_asc:
      std::sort(set.records.begin(), set.records.end(),
                [](const SolutionRecord& a, const SolutionRecord& b) {
                  if (a.f != b.f) return a.f < b.f;
                  return a.x < b.x;
                });
      break;
    case SolutionOrder::discovery:
      std::sort(set.records.begin(), set.records.end(),
                [](const SolutionRecord& a, const SolutionRecord& b) {
                  if (a.iter_found != b.iter_found) return a.iter_found < b.iter_found;
                  return a.x < b.x;
                });
      break;
  }
  set.order = order;
}

}  // namespace qubogoal
