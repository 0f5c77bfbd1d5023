#pragma once

#include <cassert>
#include <span>
#include <vector>

#include "adn/numeric.hpp"
#include "adn/params.hpp"

namespace adn {

// Per-node state machines for the counting protocol. Everything here is a
// pure transition on (state, round inputs); transport, topology, and the
// send/receive barrier live in the engine. Messages carry no sender
// identity — node indices are engine bookkeeping the protocol never sees.

template <class S>
struct NonLeaderState {
  S e{};      // current energy; reset to 1 at the start of every iteration
  S e_max{};  // max energy heard this Verification Phase
  int k = 1;  // current size estimate
  bool halt = false;
};

template <class S>
struct LeaderState {
  S e_leader{};  // absorbed energy; reset to 0 at the start of every iteration
  int k = 1;
  bool is_correct = true;  // sticky-false within an iteration
  bool halt = false;
};

enum class MessageKind { EnergyShare, MaxReport, Halt };

template <class S>
struct Message {
  MessageKind kind;
  S value{};  // unused for Halt
};

/// Constants shared by every Collection transition of one run:
/// share_factor = 1/(2*delta) and retain[s] = 1 - s/(2*delta) for each
/// possible degree s. Precomputed once so rational mode does not rebuild
/// them per round.
template <class S>
struct CollectionConstants {
  S share_factor{};
  std::vector<S> retain;  // indexed by degree, sizes 0..delta

  static CollectionConstants make(int delta) {
    CollectionConstants c;
    c.share_factor = Arith<S>::ratio(1, 2 * static_cast<std::int64_t>(delta));
    c.retain.reserve(static_cast<std::size_t>(delta) + 1);
    for (int s = 0; s <= delta; ++s) {
      c.retain.push_back(
          Arith<S>::ratio(2 * static_cast<std::int64_t>(delta) - s,
                          2 * static_cast<std::int64_t>(delta)));
    }
    return c;
  }
};

/// Verification-phase thresholds for estimate k. The *_cmp values are what
/// comparisons actually use: identical to the raw values in exact mode,
/// widened by float_rel_tol in float mode so rounding drift over long runs
/// cannot flip a verdict whose true margin is polynomially large.
template <class S>
struct IterationThresholds {
  S residual{};  // 1/k^c
  S lower{};     // k - 1 - 1/k^c
  S upper{};     // k - 1
  S residual_cmp{};
  S lower_cmp{};
  S upper_cmp{};
};

template <class S>
IterationThresholds<S> iteration_thresholds(int k, const ProtocolParams& p) {
  IterationThresholds<S> t;
  t.residual = threshold_energy<S>(k, p.c);
  t.upper = Arith<S>::from_int(k - 1);
  t.lower = t.upper - t.residual;
  if constexpr (Arith<S>::exact) {
    t.residual_cmp = t.residual;
    t.lower_cmp = t.lower;
    t.upper_cmp = t.upper;
  } else {
    t.residual_cmp = t.residual * (1.0 + p.float_rel_tol);
    t.lower_cmp = t.lower * (1.0 - p.float_rel_tol);
    t.upper_cmp = t.upper * (1.0 + p.float_rel_tol);
  }
  return t;
}

// ---- iteration setup ----

template <class S>
void init_iteration(NonLeaderState<S>& s, int k) {
  assert(k >= 2);
  s.e = Arith<S>::from_int(1);
  s.e_max = Arith<S>::from_int(0);
  s.k = k;
}

template <class S>
void init_iteration(LeaderState<S>& s, int k) {
  assert(k >= 2);
  s.e_leader = Arith<S>::from_int(0);
  s.is_correct = true;
  s.k = k;
}

// ---- Collection Phase ----

/// Outgoing broadcast of a non-leader: an e/(2*delta) energy share computed
/// from round-start state. The deduction happens in the apply step.
template <class S>
Message<S> collection_share(const NonLeaderState<S>& s,
                            const CollectionConstants<S>& c) {
  return {MessageKind::EnergyShare, s.e * c.share_factor};
}

/// Conservative energy update: e' = e * (1 - s/(2*delta)) + sum(received),
/// where degree counts ALL neighbors this round (a leader neighbor absorbs
/// the share but contributes no incoming entry, so received may have fewer
/// than degree entries).
template <class S>
void nonleader_collection_apply_sum(NonLeaderState<S>& s, const S& received_sum,
                                    int degree,
                                    const CollectionConstants<S>& c) {
  assert(degree >= 1 &&
         degree < static_cast<int>(c.retain.size()));  // s <= delta
  s.e *= c.retain[static_cast<std::size_t>(degree)];
  s.e += received_sum;
}

template <class S>
void nonleader_collection_apply(NonLeaderState<S>& s,
                                std::span<const S> received, int degree,
                                const CollectionConstants<S>& c) {
  S sum = Arith<S>::from_int(0);
  for (const S& v : received) sum += v;
  nonleader_collection_apply_sum(s, sum, degree, c);
}

/// The leader is a pure sink: it absorbs every share and emits nothing
/// during Collection.
template <class S>
void leader_collection_absorb(LeaderState<S>& s, const S& received_sum) {
  s.e_leader += received_sum;
}

template <class S>
void leader_collection_apply(LeaderState<S>& s, std::span<const S> received) {
  S sum = Arith<S>::from_int(0);
  for (const S& v : received) sum += v;
  leader_collection_absorb(s, sum);
}

// ---- Verification Phase ----

/// Phase entry: the node starts reporting its own residual energy.
template <class S>
void begin_verification(NonLeaderState<S>& s) {
  s.e_max = s.e;
}

/// Round-start broadcast: the PRE-update e_max (send and receive are
/// simultaneous within a round).
template <class S>
Message<S> verification_report(const NonLeaderState<S>& s) {
  return {MessageKind::MaxReport, s.e_max};
}

template <class S>
void verification_absorb_report(NonLeaderState<S>& s, const S& report) {
  if (report > s.e_max) s.e_max = report;
}

/// One non-leader verification round: returns the outgoing report and folds
/// the received reports into e_max. Energy e itself is frozen.
template <class S>
Message<S> verification_step_nonleader(NonLeaderState<S>& s,
                                       std::span<const S> received) {
  Message<S> out = verification_report(s);
  for (const S& v : received) verification_absorb_report(s, v);
  return out;
}

/// One leader verification round. is_correct goes (and stays) false if the
/// absorbed energy sits outside [k-1-1/k^c, k-1] or any heard residual
/// exceeds 1/k^c.
template <class S>
void verification_step_leader(LeaderState<S>& s, std::span<const S> received,
                              const IterationThresholds<S>& t) {
  if (s.e_leader < t.lower_cmp || s.e_leader > t.upper_cmp) {
    s.is_correct = false;
  } else {
    for (const S& v : received) {
      if (v > t.residual_cmp) s.is_correct = false;
    }
  }
}

// ---- Notification Phase ----

/// Leader notification round: broadcasts Halt (and commits to halting) every
/// round of the phase iff the verification verdict stood.
template <class S>
bool notification_step_leader(LeaderState<S>& s) {
  if (!s.is_correct) return false;
  s.halt = true;
  return true;
}

/// Non-leader notification round: forwards Halt only from the round AFTER it
/// was received (receive-then-set ordering). Returns whether this node
/// broadcast Halt this round.
template <class S>
bool notification_step_nonleader(NonLeaderState<S>& s, bool received_halt) {
  const bool emits = s.halt;
  if (received_halt) s.halt = true;
  return emits;
}

}  // namespace adn
