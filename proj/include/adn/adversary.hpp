#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "adn/topology.hpp"

namespace adn {

enum class AdversaryKind {
  StaticLine,
  StaticRing,
  StaticStar,
  RandomConnected,
  LeaderPeripheral,
};

std::string to_string(AdversaryKind kind);
AdversaryKind parse_adversary_kind(const std::string& s);

/// A named, seeded topology-sequence generator. The emitted edge set is a
/// pure function of (seed, round, n): replaying a seed reproduces the exact
/// sequence, and rounds can be generated in any order.
struct AdversarySpec {
  AdversaryKind kind = AdversaryKind::StaticLine;
  std::uint64_t seed = 1;
  double extra_edge_prob = 0.2;  // random-connected only

  /// Feasibility against (n, delta, leader placement); throws ConfigError.
  void validate(int n, int delta) const;
};

/// Pure generator form. leader is the harness index of the leader node
/// (leader-peripheral pins it to a path endpoint; static-star centers on it).
Topology next_topology(const AdversarySpec& spec, std::int64_t round, int n,
                       int delta, int leader);

/// Round-indexed topology source consumed by the engine. Implementations
/// must emit only validate_topology-clean graphs in normalized edge order.
class TopologyProvider {
 public:
  virtual ~TopologyProvider() = default;
  virtual void next(std::int64_t round, Topology& out) = 0;
  /// True when every round returns the same edge set (lets the engine skip
  /// redundant revalidation of an unchanged graph).
  virtual bool is_static() const { return false; }
};

class AdversaryProvider final : public TopologyProvider {
 public:
  AdversaryProvider(AdversarySpec spec, int n, int delta, int leader);
  void next(std::int64_t round, Topology& out) override;
  bool is_static() const override;

 private:
  AdversarySpec spec_;
  int n_;
  int delta_;
  int leader_;
  Topology cached_;  // static kinds are built once
};

/// Replays a hand-crafted JSONL topology sequence. Throws TopologyError when
/// the run needs more rounds than the file provides.
class FileTopologyProvider final : public TopologyProvider {
 public:
  FileTopologyProvider(const std::string& path, int n);
  explicit FileTopologyProvider(std::vector<Topology> rounds);
  void next(std::int64_t round, Topology& out) override;
  std::size_t rounds_available() const { return rounds_.size(); }

 private:
  std::vector<Topology> rounds_;
};

}  // namespace adn
