#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "adn/adversary.hpp"
#include "adn/errors.hpp"
#include "adn/numeric.hpp"
#include "adn/protocol.hpp"
#include "adn/topology.hpp"

namespace adn {

enum class Phase { Collection, Verification, Notification };

inline const char* phase_name(Phase p) {
  switch (p) {
    case Phase::Collection:
      return "collection";
    case Phase::Verification:
      return "verification";
    case Phase::Notification:
      return "notification";
  }
  return "?";
}

enum class TraceVerbosity { Summary, Leader, Full };

struct Violation {
  std::int64_t round = 0;
  std::string kind;
  std::string detail;
};

struct IterationSummary {
  int k = 0;
  std::int64_t collection_rounds = 0;
  std::int64_t verification_rounds = 0;
  std::int64_t notification_rounds = 0;
  double end_of_collection_leader_energy = 0.0;
  bool is_correct_at_verification_end = false;
  // First Collection round (1-based, within the phase) at which the leader
  // energy reached k-1-1/k^c; -1 if it never did.
  std::int64_t first_threshold_crossing_round = -1;
  double max_nonleader_energy = 0.0;
  double conservation_max_deviation = 0.0;
  bool halted = false;
};

struct RunResult {
  int output_count = -1;
  std::int64_t total_rounds = 0;
  std::vector<IterationSummary> per_iteration;
  std::vector<Violation> violations;
  std::size_t violations_total = 0;  // may exceed violations.size() (capped)
  bool halted_uniformly = false;
  double max_nonleader_energy = 0.0;
  double conservation_max_deviation = 0.0;
  std::string trace_path;  // set by the run writer when tracing is on
};

struct EngineOptions {
  bool strict = true;  // abort on first invariant breach (default)
  TraceVerbosity trace = TraceVerbosity::Summary;
  std::ostream* trace_out = nullptr;   // consulted when trace != Summary
  std::ostream* topology_out = nullptr;  // JSONL export of every drawn round
  std::size_t max_recorded_violations = 1000;
};

/// Default (and only shipped) Collection update: the conservative rule
/// e' = e*(1 - s/(2*delta)) + sum(received). The policy is a template seam
/// so tests can inject a faulty update and prove the invariant checks trip.
struct ConservativeUpdate {
  template <class S>
  static void apply(NonLeaderState<S>& s, const S& received_sum, int degree,
                    const CollectionConstants<S>& c) {
    nonleader_collection_apply_sum(s, received_sum, degree, c);
  }
};

/// Drives the synchronous round loop for one network: draws and validates
/// each round's topology, computes all broadcasts from round-start state,
/// applies all receives behind the barrier, and enforces the runtime
/// invariant checks (per-node energy bound, Collection conservation,
/// degree cap, uniform halt).
template <class S, class Update = ConservativeUpdate>
class Simulator {
 public:
  Simulator(int n, int leader_index, ProtocolParams params,
            TopologyProvider& topology, EngineOptions options = {})
      : n_(n),
        leader_(leader_index),
        params_(params),
        topology_source_(topology),
        options_(options) {
    params_.validate();
    if (n_ < 2) throw ConfigError("network needs n >= 2");
    if (leader_ < 0 || leader_ >= n_)
      throw ConfigError("leader index out of range");
    nodes_.resize(static_cast<std::size_t>(n_));
    share_.assign(static_cast<std::size_t>(n_), zero());
    incoming_.assign(static_cast<std::size_t>(n_), zero());
    report_.assign(static_cast<std::size_t>(n_), zero());
    emits_.assign(static_cast<std::size_t>(n_), 0);
    deg_.assign(static_cast<std::size_t>(n_), 0);
    adj_.assign(static_cast<std::size_t>(n_) *
                    static_cast<std::size_t>(params_.delta),
                0);
    consts_ = CollectionConstants<S>::make(params_.delta);
    if constexpr (Arith<S>::exact) {
      lemma1_bound_ = Arith<S>::from_int(1);
    } else {
      lemma1_bound_ = 1.0 + static_cast<double>(n_) * kConservationTol;
    }
  }

  /// Full protocol: iterates k = 2, 3, ... until uniform halt. Throws
  /// ScheduleError once k would exceed max_k without acceptance.
  RunResult run(int max_k) {
    if (max_k < 2) throw ConfigError("max_k must be >= 2");
    for (int k = 2;; ++k) {
      if (k > max_k) {
        throw ScheduleError(
            "schedule-insufficient: no uniform halt up to k=" +
            std::to_string(max_k) +
            " (collection schedule too short at the true size, or max_k too "
            "low)");
      }
      IterationSummary summary = run_iteration(k);
      result_.per_iteration.push_back(summary);
      if (summary.halted) {
        result_.output_count = k;
        result_.halted_uniformly = true;
        break;
      }
    }
    return result_;
  }

  IterationSummary run_iteration(int k) {
    begin_iteration(k);
    while (!iteration_done_) run_round();
    return iteration_summary_;
  }

  /// Resets node state for estimate k and arms the phase schedule.
  void begin_iteration(int k) {
    schedule_ = phase_schedule(k, params_);
    k_ = k;
    for (int i = 0; i < n_; ++i) {
      if (i != leader_) init_iteration(node(i), k);
    }
    init_iteration(leader_state_, k);
    thresholds_ = iteration_thresholds<S>(k, params_);
    phase_ = Phase::Collection;
    phase_round_ = 0;
    iteration_done_ = false;
    iteration_summary_ = {};
    iteration_summary_.k = k;
    iteration_summary_.collection_rounds = schedule_.collection_rounds;
    iteration_summary_.verification_rounds = schedule_.verification_rounds;
    iteration_summary_.notification_rounds = schedule_.notification_rounds;
  }

  /// One synchronous round of the current phase (with automatic phase and
  /// iteration rollover).
  void run_round() {
    if (iteration_done_) throw std::logic_error("iteration already finished");
    ++round_;
    ++phase_round_;
    draw_topology();
    switch (phase_) {
      case Phase::Collection:
        collection_round();
        if (phase_round_ == schedule_.collection_rounds) {
          end_collection();
        }
        break;
      case Phase::Verification:
        verification_round();
        if (phase_round_ == schedule_.verification_rounds) {
          iteration_summary_.is_correct_at_verification_end =
              leader_state_.is_correct;
          phase_ = Phase::Notification;
          phase_round_ = 0;
        }
        break;
      case Phase::Notification:
        notification_round();
        if (phase_round_ == schedule_.notification_rounds) end_iteration();
        break;
    }
    result_.total_rounds = round_;
  }

  // Introspection (tests, bounds measurement).
  const NonLeaderState<S>& nonleader(int i) const {
    return nodes_[static_cast<std::size_t>(i)];
  }
  const LeaderState<S>& leader_state() const { return leader_state_; }
  int leader_index() const { return leader_; }
  int current_k() const { return k_; }
  Phase phase() const { return phase_; }
  std::int64_t phase_round() const { return phase_round_; }
  std::int64_t round() const { return round_; }
  bool iteration_done() const { return iteration_done_; }
  const PhaseSchedule& schedule() const { return schedule_; }
  bool threshold_crossed() const {
    return iteration_summary_.first_threshold_crossing_round >= 0;
  }
  const RunResult& partial_result() const { return result_; }
  const Topology& current_topology() const { return topo_; }

  S system_energy_now() const {
    if constexpr (Arith<S>::exact) {
      Rat sum;
      for (int i = 0; i < n_; ++i) sum += energy_of(i);
      return sum;
    } else {
      double sum = 0.0, comp = 0.0;
      for (int i = 0; i < n_; ++i) {
        const double e = energy_of(i);
        const double t = sum + e;
        if (std::abs(sum) >= std::abs(e)) {
          comp += (sum - t) + e;
        } else {
          comp += (e - t) + sum;
        }
        sum = t;
      }
      return sum + comp;
    }
  }

 private:
  NonLeaderState<S>& node(int i) { return nodes_[static_cast<std::size_t>(i)]; }
  static S zero() { return Arith<S>::from_int(0); }

  const S& energy_of(int i) const {
    return i == leader_ ? leader_state_.e_leader
                        : nodes_[static_cast<std::size_t>(i)].e;
  }

  void draw_topology() {
    const bool is_static = topology_source_.is_static();
    if (is_static && topology_validated_) {
      topo_.round = round_;
      if (options_.topology_out) write_topology_jsonl(*options_.topology_out, topo_);
      return;  // unchanged graph, adjacency still current
    }
    topology_source_.next(round_, topo_);
    if (options_.topology_out) write_topology_jsonl(*options_.topology_out, topo_);
    build_and_check_adjacency();
    topology_validated_ = true;
  }

  // Degree-cap and connectivity check fused with the adjacency build; the
  // structural checks (range, self-loops, duplicates) are enforced by the
  // generators and the JSONL loader before edges ever reach the engine.
  void build_and_check_adjacency() {
    if (topo_.n != n_) {
      throw TopologyError("topology has n=" + std::to_string(topo_.n) +
                          ", network has n=" + std::to_string(n_));
    }
    std::fill(deg_.begin(), deg_.end(), 0);
    const int delta = params_.delta;
    for (auto [u, v] : topo_.edges) {
      if (deg_[static_cast<std::size_t>(u)] >= delta ||
          deg_[static_cast<std::size_t>(v)] >= delta) {
        const int w = deg_[static_cast<std::size_t>(u)] >= delta ? u : v;
        throw TopologyError("round " + std::to_string(round_) +
                            ": degree bound violated at node " +
                            std::to_string(w) + " (delta=" +
                            std::to_string(delta) + ")");
      }
      adj_[static_cast<std::size_t>(u) * delta +
           static_cast<std::size_t>(deg_[static_cast<std::size_t>(u)]++)] = v;
      adj_[static_cast<std::size_t>(v) * delta +
           static_cast<std::size_t>(deg_[static_cast<std::size_t>(v)]++)] = u;
    }
    // Connectivity sweep over the fresh adjacency.
    scratch_stack_.clear();
    seen_.assign(static_cast<std::size_t>(n_), 0);
    scratch_stack_.push_back(0);
    seen_[0] = 1;
    int reached = 1;
    while (!scratch_stack_.empty()) {
      const int u = scratch_stack_.back();
      scratch_stack_.pop_back();
      const int du = deg_[static_cast<std::size_t>(u)];
      for (int j = 0; j < du; ++j) {
        const int w = adj_[static_cast<std::size_t>(u) * delta +
                           static_cast<std::size_t>(j)];
        if (!seen_[static_cast<std::size_t>(w)]) {
          seen_[static_cast<std::size_t>(w)] = 1;
          ++reached;
          scratch_stack_.push_back(w);
        }
      }
    }
    if (reached != n_) {
      throw TopologyError("round " + std::to_string(round_) +
                          ": topology is disconnected (" +
                          std::to_string(reached) + "/" + std::to_string(n_) +
                          " nodes reachable)");
    }
  }

  void collection_round() {
    const int delta = params_.delta;
    // Broadcasts from round-start state; the leader emits nothing.
    for (int i = 0; i < n_; ++i) {
      share_[static_cast<std::size_t>(i)] =
          i == leader_ ? zero()
                       : collection_share(node(i), consts_).value;
    }
    // Receives, accumulated in ascending neighbor-index order (adjacency
    // rows are ascending because edge lists are kept sorted).
    for (int i = 0; i < n_; ++i) {
      S& sum = incoming_[static_cast<std::size_t>(i)];
      sum = zero();
      const int di = deg_[static_cast<std::size_t>(i)];
      for (int j = 0; j < di; ++j) {
        sum += share_[static_cast<std::size_t>(
            adj_[static_cast<std::size_t>(i) * delta +
                 static_cast<std::size_t>(j)])];
      }
    }
    // Apply behind the barrier.
    for (int i = 0; i < n_; ++i) {
      if (i == leader_) continue;
      Update::apply(node(i), incoming_[static_cast<std::size_t>(i)],
                    deg_[static_cast<std::size_t>(i)], consts_);
    }
    leader_collection_absorb(leader_state_,
                             incoming_[static_cast<std::size_t>(leader_)]);

    if (!threshold_crossed() &&
        !(leader_state_.e_leader < thresholds_.lower)) {
      iteration_summary_.first_threshold_crossing_round = phase_round_;
    }
    check_collection_invariants();
    emit_trace(messages_from_all_nonleaders());
  }

  void end_collection() {
    iteration_summary_.end_of_collection_leader_energy =
        Arith<S>::to_double(leader_state_.e_leader);
    for (int i = 0; i < n_; ++i) {
      if (i != leader_) begin_verification(node(i));
    }
    phase_ = Phase::Verification;
    phase_round_ = 0;
  }

  void verification_round() {
    const int delta = params_.delta;
    for (int i = 0; i < n_; ++i) {
      report_[static_cast<std::size_t>(i)] =
          i == leader_ ? zero() : verification_report(node(i)).value;
    }
    // Reports are snapshots, so in-place absorption respects the barrier.
    // The silent leader's slot reports 0, which max() ignores.
    for (int i = 0; i < n_; ++i) {
      if (i == leader_) continue;
      const int di = deg_[static_cast<std::size_t>(i)];
      for (int j = 0; j < di; ++j) {
        verification_absorb_report(
            node(i), report_[static_cast<std::size_t>(
                         adj_[static_cast<std::size_t>(i) * delta +
                              static_cast<std::size_t>(j)])]);
      }
    }
    leader_recv_.clear();
    const int dl = deg_[static_cast<std::size_t>(leader_)];
    for (int j = 0; j < dl; ++j) {
      leader_recv_.push_back(report_[static_cast<std::size_t>(
          adj_[static_cast<std::size_t>(leader_) * delta +
               static_cast<std::size_t>(j)])]);
    }
    verification_step_leader(leader_state_,
                             std::span<const S>(leader_recv_), thresholds_);
    emit_trace(messages_from_all_nonleaders());
  }

  void notification_round() {
    const bool leader_emits = notification_step_leader(leader_state_);
    for (int i = 0; i < n_; ++i) {
      emits_[static_cast<std::size_t>(i)] =
          i == leader_ ? leader_emits : node(i).halt;
    }
    const int delta = params_.delta;
    std::int64_t delivered = 0;
    for (int i = 0; i < n_; ++i) {
      if (emits_[static_cast<std::size_t>(i)])
        delivered += deg_[static_cast<std::size_t>(i)];
    }
    for (int i = 0; i < n_; ++i) {
      if (i == leader_) continue;
      bool received = false;
      const int di = deg_[static_cast<std::size_t>(i)];
      for (int j = 0; j < di; ++j) {
        if (emits_[static_cast<std::size_t>(
                adj_[static_cast<std::size_t>(i) * delta +
                     static_cast<std::size_t>(j)])]) {
          received = true;
          break;
        }
      }
      notification_step_nonleader(node(i), received);
    }
    emit_trace(delivered);
  }

  void end_iteration() {
    int halted = leader_state_.halt ? 1 : 0;
    for (int i = 0; i < n_; ++i) {
      if (i != leader_ && node(i).halt) ++halted;
    }
    if (halted != 0 && halted != n_) {
      record_violation("uniform-halt",
                       std::to_string(halted) + "/" + std::to_string(n_) +
                           " nodes halted at end of iteration k=" +
                           std::to_string(k_));
    }
    iteration_summary_.halted = halted == n_;
    result_.max_nonleader_energy =
        std::max(result_.max_nonleader_energy,
                 iteration_summary_.max_nonleader_energy);
    result_.conservation_max_deviation =
        std::max(result_.conservation_max_deviation,
                 iteration_summary_.conservation_max_deviation);
    iteration_done_ = true;
  }

  void check_collection_invariants() {
    for (int i = 0; i < n_; ++i) {
      if (i == leader_) continue;
      const S& e = node(i).e;
      if (!(e >= zero())) {
        record_violation("negative-energy",
                         "node energy " +
                             std::to_string(Arith<S>::to_double(e)) +
                             " below zero");
      }
      if (e > lemma1_bound_) {
        record_violation("lemma1-energy",
                         "non-leader energy " +
                             std::to_string(Arith<S>::to_double(e)) +
                             " exceeds 1");
      }
      iteration_summary_.max_nonleader_energy =
          std::max(iteration_summary_.max_nonleader_energy,
                   Arith<S>::to_double(e));
      if constexpr (Arith<S>::exact) {
        if (e.den_bits() > params_.max_denominator_bits) {
          throw RationalLimitError(
              "exact-rational denominators exceeded " +
              std::to_string(params_.max_denominator_bits) +
              " bits at round " + std::to_string(round_) +
              "; rerun with --arithmetic float64");
        }
      }
    }
    const auto conserve = conservation_check(system_energy_now(), n_);
    iteration_summary_.conservation_max_deviation =
        std::max(iteration_summary_.conservation_max_deviation,
                 conserve.deviation);
    if (!conserve.pass) {
      record_violation("conservation",
                       "system energy deviates from n-1 by " +
                           std::to_string(conserve.deviation));
    }
  }

  void record_violation(const std::string& kind, const std::string& detail) {
    if (options_.strict) throw InvariantError(round_, kind, detail);
    ++result_.violations_total;
    if (result_.violations.size() < options_.max_recorded_violations) {
      result_.violations.push_back({round_, kind, detail});
    }
  }

  std::int64_t messages_from_all_nonleaders() const {
    std::int64_t delivered = 0;
    for (int i = 0; i < n_; ++i) {
      if (i != leader_) delivered += deg_[static_cast<std::size_t>(i)];
    }
    return delivered;
  }

  void emit_trace(std::int64_t delivered);

  int n_;
  int leader_;
  ProtocolParams params_;
  TopologyProvider& topology_source_;
  EngineOptions options_;

  std::vector<NonLeaderState<S>> nodes_;  // leader slot unused
  LeaderState<S> leader_state_;
  CollectionConstants<S> consts_;
  IterationThresholds<S> thresholds_;
  S lemma1_bound_{};

  std::vector<S> share_, incoming_, report_, leader_recv_;
  std::vector<std::uint8_t> emits_;
  std::vector<int> deg_, adj_, scratch_stack_;
  std::vector<char> seen_;
  Topology topo_;
  bool topology_validated_ = false;

  int k_ = 1;
  Phase phase_ = Phase::Collection;
  std::int64_t phase_round_ = 0;
  std::int64_t round_ = 0;
  bool iteration_done_ = true;
  IterationSummary iteration_summary_;
  RunResult result_;
};

}  // namespace adn

#include "adn/engine_trace.hpp"
