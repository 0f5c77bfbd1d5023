#include "adn/adversary.hpp"

#include <algorithm>
#include <numeric>

#include "adn/errors.hpp"
#include "adn/rng.hpp"

namespace adn {

std::string to_string(AdversaryKind kind) {
  switch (kind) {
    case AdversaryKind::StaticLine:
      return "static-line";
    case AdversaryKind::StaticRing:
      return "static-ring";
    case AdversaryKind::StaticStar:
      return "static-star";
    case AdversaryKind::RandomConnected:
      return "random-connected";
    case AdversaryKind::LeaderPeripheral:
      return "leader-peripheral";
  }
  return "?";
}

AdversaryKind parse_adversary_kind(const std::string& s) {
  if (s == "static-line") return AdversaryKind::StaticLine;
  if (s == "static-ring") return AdversaryKind::StaticRing;
  if (s == "static-star") return AdversaryKind::StaticStar;
  if (s == "random-connected") return AdversaryKind::RandomConnected;
  if (s == "leader-peripheral") return AdversaryKind::LeaderPeripheral;
  throw ConfigError("unknown adversary kind '" + s + "'");
}

void AdversarySpec::validate(int n, int delta) const {
  if (n < 2) throw ConfigError("adversary requires n >= 2");
  if (delta < 1) throw ConfigError("delta must be >= 1");
  if (extra_edge_prob < 0.0 || extra_edge_prob > 1.0) {
    throw ConfigError("extra_edge_prob must be in [0, 1]");
  }
  int needed = 1;
  switch (kind) {
    case AdversaryKind::StaticStar:
      needed = n - 1;
      break;
    case AdversaryKind::StaticLine:
    case AdversaryKind::StaticRing:
    case AdversaryKind::RandomConnected:
    case AdversaryKind::LeaderPeripheral:
      needed = n == 2 ? 1 : 2;  // line endpoints need 1, interiors 2
      break;
  }
  if (delta < needed) {
    throw ConfigError(to_string(kind) + " is infeasible for n=" +
                      std::to_string(n) + ", delta=" + std::to_string(delta) +
                      " (needs delta >= " + std::to_string(needed) + ")");
  }
}

namespace {

struct GenScratch {
  std::vector<int> order;
  std::vector<int> deg;
  std::vector<int> walk_next;
  std::vector<char> in_tree;
  std::vector<std::uint64_t> adj;  // row-major bitset, words per row
  int words = 0;

  void reset(int n) {
    words = (n + 63) / 64;
    deg.assign(static_cast<std::size_t>(n), 0);
    adj.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(words),
               0);
  }
  bool has_edge(int u, int v) const {
    return (adj[static_cast<std::size_t>(u) * words + v / 64] >>
            (v % 64)) & 1;
  }
  void mark_edge(int u, int v) {
    adj[static_cast<std::size_t>(u) * words + v / 64] |= 1ULL << (v % 64);
    adj[static_cast<std::size_t>(v) * words + u / 64] |= 1ULL << (u % 64);
    ++deg[static_cast<std::size_t>(u)];
    ++deg[static_cast<std::size_t>(v)];
  }
};

void add_edge(Topology& t, GenScratch& s, int u, int v) {
  s.mark_edge(u, v);
  t.edges.emplace_back(std::min(u, v), std::max(u, v));
}

/// Uniform spanning tree of the complete graph (Wilson's loop-erased random
/// walk). Only used when the degree cap cannot bind (delta >= n-1); a
/// uniform tree of K_n has unbounded degree, so capped families use the
/// budgeted builder below instead.
void wilson_tree(Xoshiro256& rng, int n, GenScratch& s, Topology& out) {
  s.in_tree.assign(static_cast<std::size_t>(n), 0);
  s.walk_next.assign(static_cast<std::size_t>(n), -1);
  s.in_tree[0] = 1;
  for (int i = 1; i < n; ++i) {
    if (s.in_tree[static_cast<std::size_t>(i)]) continue;
    int u = i;
    while (!s.in_tree[static_cast<std::size_t>(u)]) {
      int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
      if (v >= u) ++v;
      s.walk_next[static_cast<std::size_t>(u)] = v;
      u = v;
    }
    u = i;
    while (!s.in_tree[static_cast<std::size_t>(u)]) {
      s.in_tree[static_cast<std::size_t>(u)] = 1;
      add_edge(out, s, u, s.walk_next[static_cast<std::size_t>(u)]);
      u = s.walk_next[static_cast<std::size_t>(u)];
    }
  }
}

/// Degree-budgeted random tree: nodes join in shuffled order, each attaching
/// to a uniformly chosen already-joined node with spare degree budget. A
/// spare node always exists (a tree on m nodes uses 2(m-1) < m*delta degree
/// for delta >= 2), and every degree-<=delta tree has positive probability.
void budgeted_tree(Xoshiro256& rng, int n, int delta, GenScratch& s,
                   Topology& out) {
  s.order.resize(static_cast<std::size_t>(n));
  std::iota(s.order.begin(), s.order.end(), 0);
  rng.shuffle(s.order.begin(), s.order.end());
  for (int i = 1; i < n; ++i) {
    int u;
    do {
      u = s.order[rng.below(static_cast<std::uint64_t>(i))];
    } while (s.deg[static_cast<std::size_t>(u)] >= delta);
    add_edge(out, s, u, s.order[static_cast<std::size_t>(i)]);
  }
}

void random_connected(Xoshiro256& rng, int n, int delta, double p,
                      GenScratch& s, Topology& out) {
  if (n == 2) {
    add_edge(out, s, 0, 1);
    return;
  }
  if (delta >= n - 1) {
    wilson_tree(rng, n, s, out);
  } else {
    budgeted_tree(rng, n, delta, s, out);
  }
  if (p <= 0.0) return;
  // Candidate extra edges in index order, rejection under the degree cap.
  for (int u = 0; u < n - 1; ++u) {
    if (s.deg[static_cast<std::size_t>(u)] >= delta) continue;
    for (int v = u + 1; v < n; ++v) {
      if (s.deg[static_cast<std::size_t>(u)] >= delta) break;
      if (s.deg[static_cast<std::size_t>(v)] >= delta || s.has_edge(u, v))
        continue;
      if (rng.u01() < p) add_edge(out, s, u, v);
    }
  }
}

/// Random Hamiltonian path over the non-leader nodes with the leader
/// attached at one end: degree 1, maximum distance from the path centroid.
void leader_peripheral(Xoshiro256& rng, int n, int leader, GenScratch& s,
                       Topology& out) {
  s.order.clear();
  for (int i = 0; i < n; ++i) {
    if (i != leader) s.order.push_back(i);
  }
  rng.shuffle(s.order.begin(), s.order.end());
  add_edge(out, s, leader, s.order[0]);
  for (std::size_t i = 0; i + 1 < s.order.size(); ++i) {
    add_edge(out, s, s.order[i], s.order[i + 1]);
  }
}

void generate(const AdversarySpec& spec, std::int64_t round, int n, int delta,
              int leader, GenScratch& s, Topology& out) {
  out.n = n;
  out.round = round;
  out.edges.clear();
  s.reset(n);
  switch (spec.kind) {
    case AdversaryKind::StaticLine:
      for (int i = 0; i + 1 < n; ++i) add_edge(out, s, i, i + 1);
      break;
    case AdversaryKind::StaticRing:
      for (int i = 0; i + 1 < n; ++i) add_edge(out, s, i, i + 1);
      if (n > 2) add_edge(out, s, 0, n - 1);
      break;
    case AdversaryKind::StaticStar:
      for (int i = 0; i < n; ++i) {
        if (i != leader) add_edge(out, s, leader, i);
      }
      break;
    case AdversaryKind::RandomConnected: {
      Xoshiro256 rng(mix_stream(
          spec.seed, static_cast<std::uint64_t>(round),
          (static_cast<std::uint64_t>(spec.kind) << 32) |
              static_cast<std::uint64_t>(n),
          (static_cast<std::uint64_t>(delta) << 16) |
              static_cast<std::uint64_t>(leader)));
      random_connected(rng, n, delta, spec.extra_edge_prob, s, out);
      break;
    }
    case AdversaryKind::LeaderPeripheral: {
      Xoshiro256 rng(mix_stream(
          spec.seed, static_cast<std::uint64_t>(round),
          (static_cast<std::uint64_t>(spec.kind) << 32) |
              static_cast<std::uint64_t>(n),
          (static_cast<std::uint64_t>(delta) << 16) |
              static_cast<std::uint64_t>(leader)));
      if (n == 2) {
        add_edge(out, s, 0, 1);
      } else {
        leader_peripheral(rng, n, leader, s, out);
      }
      break;
    }
  }
  std::sort(out.edges.begin(), out.edges.end());
}

}  // namespace

Topology next_topology(const AdversarySpec& spec, std::int64_t round, int n,
                       int delta, int leader) {
  spec.validate(n, delta);
  GenScratch scratch;
  Topology t;
  generate(spec, round, n, delta, leader, scratch, t);
  return t;
}

AdversaryProvider::AdversaryProvider(AdversarySpec spec, int n, int delta,
                                     int leader)
    : spec_(spec), n_(n), delta_(delta), leader_(leader) {
  spec_.validate(n, delta);
  if (is_static()) {
    GenScratch scratch;
    generate(spec_, 1, n_, delta_, leader_, scratch, cached_);
  }
}

bool AdversaryProvider::is_static() const {
  return spec_.kind == AdversaryKind::StaticLine ||
         spec_.kind == AdversaryKind::StaticRing ||
         spec_.kind == AdversaryKind::StaticStar;
}

void AdversaryProvider::next(std::int64_t round, Topology& out) {
  if (is_static()) {
    out = cached_;
    out.round = round;
    return;
  }
  static thread_local GenScratch scratch;
  generate(spec_, round, n_, delta_, leader_, scratch, out);
}

FileTopologyProvider::FileTopologyProvider(const std::string& path, int n)
    : rounds_(load_topology_file(path, n)) {}

FileTopologyProvider::FileTopologyProvider(std::vector<Topology> rounds)
    : rounds_(std::move(rounds)) {
  if (rounds_.empty()) throw TopologyError("empty topology sequence");
}

void FileTopologyProvider::next(std::int64_t round, Topology& out) {
  if (round < 1 || static_cast<std::size_t>(round) > rounds_.size()) {
    throw TopologyError(
        "topology file exhausted: round " + std::to_string(round) +
        " requested, file has " + std::to_string(rounds_.size()));
  }
  out = rounds_[static_cast<std::size_t>(round - 1)];
  out.round = round;
}

}  // namespace adn
