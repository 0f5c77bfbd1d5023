#include "adn/topology.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "adn/errors.hpp"

namespace adn {

namespace {

std::string node_set_str(const std::vector<int>& nodes) {
  std::string s = "{";
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(nodes[i]);
  }
  return s + "}";
}

}  // namespace

void normalize_edges(Topology& t) {
  for (auto& [u, v] : t.edges) {
    if (u > v) std::swap(u, v);
  }
  std::sort(t.edges.begin(), t.edges.end());
}

ValidationResult validate_topology(const Topology& t, int delta) {
  if (t.n < 1) return {false, "node count must be >= 1"};
  std::vector<int> degree(static_cast<std::size_t>(t.n), 0);
  for (auto [u, v] : t.edges) {
    if (u < 0 || u >= t.n || v < 0 || v >= t.n) {
      return {false, "edge endpoint out of range: (" + std::to_string(u) +
                         "," + std::to_string(v) + ")"};
    }
    if (u == v) return {false, "self-loop at node " + std::to_string(u)};
    ++degree[static_cast<std::size_t>(u)];
    ++degree[static_cast<std::size_t>(v)];
  }
  {
    auto sorted = t.edges;
    for (auto& [u, v] : sorted)
      if (u > v) std::swap(u, v);
    std::sort(sorted.begin(), sorted.end());
    auto dup = std::adjacent_find(sorted.begin(), sorted.end());
    if (dup != sorted.end()) {
      return {false, "duplicate edge (" + std::to_string(dup->first) + "," +
                         std::to_string(dup->second) + ")"};
    }
  }
  for (int i = 0; i < t.n; ++i) {
    if (degree[static_cast<std::size_t>(i)] > delta) {
      return {false, "degree bound violated: node " + std::to_string(i) +
                         " has degree " +
                         std::to_string(degree[static_cast<std::size_t>(i)]) +
                         " > " + std::to_string(delta)};
    }
  }

  // Connectivity by traversal from node 0.
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(t.n));
  for (auto [u, v] : t.edges) {
    adj[static_cast<std::size_t>(u)].push_back(v);
    adj[static_cast<std::size_t>(v)].push_back(u);
  }
  std::vector<char> seen(static_cast<std::size_t>(t.n), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int w : adj[static_cast<std::size_t>(u)]) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  if (reached != t.n) {
    // Witness: the component of the smallest unreached node.
    int start = 0;
    while (seen[static_cast<std::size_t>(start)]) ++start;
    std::vector<char> comp_seen(static_cast<std::size_t>(t.n), 0);
    std::vector<int> comp, frontier{start};
    comp_seen[static_cast<std::size_t>(start)] = 1;
    while (!frontier.empty()) {
      int u = frontier.back();
      frontier.pop_back();
      comp.push_back(u);
      for (int w : adj[static_cast<std::size_t>(u)]) {
        if (!comp_seen[static_cast<std::size_t>(w)]) {
          comp_seen[static_cast<std::size_t>(w)] = 1;
          frontier.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    return {false, "disconnected: isolated component " + node_set_str(comp)};
  }
  return {true, ""};
}

std::string topology_to_jsonl(const Topology& t) {
  nlohmann::json j;
  j["round"] = t.round;
  auto edges = nlohmann::json::array();
  for (auto [u, v] : t.edges) edges.push_back({u, v});
  j["edges"] = std::move(edges);
  return j.dump();
}

Topology topology_from_jsonl(const std::string& line, int expected_n) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw TopologyError(std::string("bad topology line: ") + e.what());
  }
  if (!j.is_object() || !j.contains("round") || !j.contains("edges")) {
    throw TopologyError("topology line must be {\"round\":..,\"edges\":[..]}");
  }
  Topology t;
  t.n = expected_n;
  t.round = j.at("round").get<std::int64_t>();
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) {
      throw TopologyError("edge must be a two-element array");
    }
    t.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  normalize_edges(t);
  // Structural checks happen here so the engine's per-round validation can
  // assume well-formed edge lists from every provider.
  for (auto [u, v] : t.edges) {
    if (u < 0 || v >= expected_n) {
      throw TopologyError("round " + std::to_string(t.round) +
                          ": edge endpoint out of range for n=" +
                          std::to_string(expected_n));
    }
    if (u == v) {
      throw TopologyError("round " + std::to_string(t.round) +
                          ": self-loop at node " + std::to_string(u));
    }
  }
  if (std::adjacent_find(t.edges.begin(), t.edges.end()) != t.edges.end()) {
    throw TopologyError("round " + std::to_string(t.round) +
                        ": duplicate edge");
  }
  return t;
}

void write_topology_jsonl(std::ostream& out, const Topology& t) {
  out << topology_to_jsonl(t) << '\n';
}

std::vector<Topology> load_topology_file(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open topology file: " + path);
  std::vector<Topology> rounds;
  std::string line;
  std::int64_t expected_round = 1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Topology t = topology_from_jsonl(line, n);
    if (t.round != expected_round) {
      throw TopologyError("topology file rounds must be 1..N in order; got " +
                          std::to_string(t.round) + " where " +
                          std::to_string(expected_round) + " was expected");
    }
    ++expected_round;
    rounds.push_back(std::move(t));
  }
  if (rounds.empty()) throw TopologyError("topology file is empty: " + path);
  return rounds;
}

}  // namespace adn
