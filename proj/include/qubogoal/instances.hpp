#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qubogoal/qubo.hpp"
#include "qubogoal/rng.hpp"
#include "qubogoal/solution.hpp"
#include "qubogoal/targets.hpp"

namespace qubogoal {

/// Seeded random-instance family in the style of the classic binary
/// quadratic benchmark sets: every pair i <= j is present independently
/// with the given density, with a nonzero coefficient uniform on
/// [coeff_min, coeff_max].
struct GeneratorSpec {
  std::uint32_t n = 0;
  Rational density = 1;
  std::int64_t coeff_min = -100;
  std::int64_t coeff_max = 100;
  std::uint64_t seed = 0;
  std::string name;
};

inline QuboInstance generate(const GeneratorSpec& spec) {
  if (spec.n == 0) throw std::invalid_argument("generate: n must be positive");
  if (spec.density <= 0 || spec.density > 1)
    throw std::invalid_argument("generate: density outside (0, 1]");
  if (spec.coeff_min > spec.coeff_max)
    throw std::invalid_argument("generate: empty coefficient range");
  if (spec.coeff_min == 0 && spec.coeff_max == 0)
    throw std::invalid_argument("generate: coefficient range holds only zero");

  Rng rng(spec.seed);
  const bool range_has_zero = spec.coeff_min <= 0 && 0 <= spec.coeff_max;
  std::vector<Triple> triples;
  // Draw order is pinned: inclusion first, then the coefficient, row by row.
  for (std::uint32_t i = 0; i < spec.n; ++i) {
    for (std::uint32_t j = i; j < spec.n; ++j) {
      if (!rng.bernoulli(spec.density)) continue;
      std::int64_t q;
      if (range_has_zero) {
        // Uniform over the range minus zero.
        q = rng.uniform_in(spec.coeff_min, spec.coeff_max - 1);
        if (q >= 0) ++q;
      } else {
        q = rng.uniform_in(spec.coeff_min, spec.coeff_max);
      }
      triples.push_back({i, j, q});
    }
  }
  return QuboInstance(spec.n, triples, Sense::minimize, spec.name);
}

struct BksEntry {
  std::int64_t value;
  Sense sense;
};

/// Best-known objective values keyed by instance name.
class BksTable {
 public:
  void insert(const std::string& name, BksEntry entry) {
    if (!entries_.emplace(name, entry).second)
      throw std::runtime_error("BksTable: duplicate instance name '" + name + "'");
  }

  std::optional<BksEntry> lookup(const std::string& name) const {
    const auto it = entries_.find(name);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, BksEntry>& entries() const { return entries_; }

 private:
  std::map<std::string, BksEntry> entries_;
};

/// Parses `name value [min|max]` lines; `#` lines are comments and the
/// sense column defaults to max (the published tables are maximization).
inline BksTable load_bks(std::istream& in) {
  BksTable table;
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string name, value_text, sense_text;
    if (!(ls >> name >> value_text))
      throw std::runtime_error("load_bks: malformed line " + std::to_string(lineno));
    std::int64_t value = 0;
    try {
      std::size_t pos = 0;
      value = std::stoll(value_text, &pos);
      if (pos != value_text.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw std::runtime_error("load_bks: bad value at line " + std::to_string(lineno));
    }
    Sense sense = Sense::maximize;
    if (ls >> sense_text) sense = sense_from_string(sense_text);
    std::string extra;
    if (ls >> extra)
      throw std::runtime_error("load_bks: trailing tokens at line " + std::to_string(lineno));
    table.insert(name, {value, sense});
  }
  return table;
}

/// Solutions file: a header `n=<n> target=<text> seed=<seed> sense=<sense>`,
/// then one `bits_hex,f,af,iter_found,time_found_ms` record per line.
inline void write_solutions(const SolutionSet& set, std::ostream& out) {
  out << "n=" << set.context.n << " target=" << set.context.target
      << " seed=" << set.context.seed << " sense=" << to_string(set.context.sense) << '\n';
  for (const SolutionRecord& r : set.records)
    out << r.x.to_hex() << ',' << r.f << ',' << r.af.str() << ',' << r.iter_found << ','
        << r.time_found_ms << '\n';
}

inline std::string write_solutions(const SolutionSet& set) {
  std::ostringstream os;
  write_solutions(set, os);
  return os.str();
}

inline SolutionSet read_solutions(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_solutions: empty input");

  SolutionSet set;
  {
    std::istringstream hs(line);
    std::string field;
    bool have_n = false, have_target = false, have_seed = false, have_sense = false;
    while (hs >> field) {
      const auto eq = field.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error("read_solutions: malformed header field '" + field + "'");
      const std::string key = field.substr(0, eq);
      const std::string value = field.substr(eq + 1);
      try {
        if (key == "n") {
          set.context.n = static_cast<std::uint32_t>(std::stoul(value));
          have_n = true;
        } else if (key == "target") {
          set.context.target = value;
          have_target = true;
        } else if (key == "seed") {
          set.context.seed = std::stoull(value);
          have_seed = true;
        } else if (key == "sense") {
          set.context.sense = sense_from_string(value);
          have_sense = true;
        } else {
          throw std::invalid_argument("unknown key");
        }
      } catch (const std::exception&) {
        throw std::runtime_error("read_solutions: bad header field '" + field + "'");
      }
    }
    if (!have_n || !have_target || !have_seed || !have_sense)
      throw std::runtime_error("read_solutions: incomplete header");
  }

  std::uint64_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string token;
    std::istringstream ls(line);
    while (std::getline(ls, token, ',')) fields.push_back(token);
    if (fields.size() != 5)
      throw std::runtime_error("read_solutions: expected 5 fields at line " +
                               std::to_string(lineno));
    SolutionRecord r;
    try {
      r.x = BitVector::from_hex(fields[0], set.context.n);
      std::size_t pos = 0;
      r.f = std::stoll(fields[1], &pos);
      if (pos != fields[1].size()) throw std::invalid_argument("trailing");
      r.af = AchievementValue::parse(fields[2]);
      r.iter_found = std::stoull(fields[3]);
      r.time_found_ms = std::stoull(fields[4]);
    } catch (const std::exception&) {
      throw std::runtime_error("read_solutions: malformed record at line " +
                               std::to_string(lineno));
    }
    if (!r.af.nonpositive())
      throw std::runtime_error("read_solutions: record with positive achievement value at line " +
                               std::to_string(lineno));
    set.records.push_back(std::move(r));
  }
  set.order = SolutionOrder::discovery;  // records keep file order
  return set;
}

// Path-level conveniences.

inline void write_solutions_file(const SolutionSet& set, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  write_solutions(set, out);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

inline SolutionSet read_solutions_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  return read_solutions(in);
}

inline void write_instance_file(const QuboInstance& inst, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  serialize_instance(inst, out);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

inline QuboInstance load_instance_file(const std::filesystem::path& path,
                                       Sense sense = Sense::minimize, std::string name = "",
                                       std::vector<std::string>* warnings = nullptr) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  if (name.empty()) name = path.stem().string();
  return parse_instance(in, sense, std::move(name), warnings);
}

inline BksTable load_bks_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  return load_bks(in);
}

}  // namespace qubogoal
