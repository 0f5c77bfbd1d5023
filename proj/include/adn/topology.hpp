#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace adn {

/// One round's communication graph. Edges are unordered pairs stored as
/// (u, v) with u < v, sorted lexicographically; generators and loaders keep
/// that normal form so neighbor iteration order is reproducible.
struct Topology {
  int n = 0;
  std::int64_t round = 0;
  std::vector<std::pair<int, int>> edges;

  friend bool operator==(const Topology&, const Topology&) = default;
};

struct ValidationResult {
  bool ok = false;
  std::string diagnostic;  // names the violated property and a witness
};

/// Pass iff the graph is connected (checked by traversal), every node has
/// degree <= delta, and the edge list is well-formed (in-range endpoints,
/// no self-loops, no duplicates).
ValidationResult validate_topology(const Topology& t, int delta);

/// Normalizes edges into the (u < v, lexicographically sorted) form.
void normalize_edges(Topology& t);

// JSON-lines interchange: one round per line, e.g.
//   {"round":3,"edges":[[0,1],[1,2]]}
std::string topology_to_jsonl(const Topology& t);
Topology topology_from_jsonl(const std::string& line, int expected_n);
void write_topology_jsonl(std::ostream& out, const Topology& t);

/// Loads a whole JSONL topology file; rounds must be 1..N in order.
std::vector<Topology> load_topology_file(const std::string& path, int n);

}  // namespace adn
