#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "adn/engine.hpp"
#include "adn/errors.hpp"

using namespace adn;

namespace {

ProtocolParams make_params(int delta, ArithmeticMode mode) {
  ProtocolParams p;
  p.delta = delta;
  p.arithmetic = mode;
  if (mode == ArithmeticMode::ExactRational) p.float_rel_tol = 0.0;
  return p;
}

AdversaryProvider provider_for(AdversaryKind kind, std::uint64_t seed, int n,
                               int delta, int leader = 0) {
  return AdversaryProvider(AdversarySpec{kind, seed, 0.2}, n, delta, leader);
}

}  // namespace

TEST_CASE("first collection round, n=2") {
  auto provider = provider_for(AdversaryKind::StaticLine, 1, 2, 1);
  Simulator<Rat> sim(2, 0, make_params(1, ArithmeticMode::ExactRational),
                     provider);
  sim.begin_iteration(2);
  sim.run_round();
  CHECK(sim.leader_state().e_leader == Rat(1, 2));
  CHECK(sim.nonleader(1).e == Rat(1, 2));
}

TEST_CASE("verification and notification freeze non-leader energy") {
  auto provider = provider_for(AdversaryKind::StaticLine, 1, 4, 2);
  Simulator<double> sim(4, 0, make_params(2, ArithmeticMode::Float64),
                        provider);
  sim.begin_iteration(2);
  while (sim.phase() == Phase::Collection) sim.run_round();
  std::vector<double> frozen;
  for (int i = 1; i < 4; ++i) frozen.push_back(sim.nonleader(i).e);
  const double leader_frozen = sim.leader_state().e_leader;
  while (!sim.iteration_done()) {
    sim.run_round();
    for (int i = 1; i < 4; ++i) {
      CHECK(sim.nonleader(i).e ==
            frozen[static_cast<std::size_t>(i - 1)]);  // bit-identical
    }
    CHECK(sim.leader_state().e_leader == leader_frozen);
  }
}

TEST_CASE("leader energy is a monotone sink during collection") {
  auto provider = provider_for(AdversaryKind::RandomConnected, 3, 6, 2);
  Simulator<double> sim(6, 0, make_params(2, ArithmeticMode::Float64),
                        provider);
  sim.begin_iteration(4);
  double prev = 0.0;
  while (sim.phase() == Phase::Collection) {
    sim.run_round();
    CHECK(sim.leader_state().e_leader >= prev);
    prev = sim.leader_state().e_leader;
  }
}

TEST_CASE("iterations below the true size are rejected without halting") {
  auto provider = provider_for(AdversaryKind::StaticRing, 5, 5, 2);
  Simulator<double> sim(5, 0, make_params(2, ArithmeticMode::Float64),
                        provider);
  for (int k = 2; k <= 4; ++k) {
    IterationSummary s = sim.run_iteration(k);
    CHECK_FALSE(s.is_correct_at_verification_end);
    CHECK_FALSE(s.halted);
  }
  IterationSummary accepted = sim.run_iteration(5);
  CHECK(accepted.is_correct_at_verification_end);
  CHECK(accepted.halted);
}

TEST_CASE("one collection round cannot satisfy the leader bound at n>=4") {
  ProtocolParams p = make_params(2, ArithmeticMode::Float64);
  p.tau_mode = TauMode::UserTable;
  for (int k = 2; k <= 16; ++k) p.tau_table[k] = 1;
  auto provider = provider_for(AdversaryKind::StaticLine, 1, 4, 2);
  Simulator<double> sim(4, 0, p, provider);
  IterationSummary s = sim.run_iteration(4);
  CHECK_FALSE(s.is_correct_at_verification_end);
  CHECK_FALSE(s.halted);
}

TEST_CASE("schedule-insufficient tau aborts at max_k") {
  ProtocolParams p = make_params(2, ArithmeticMode::Float64);
  p.tau_mode = TauMode::UserTable;
  for (int k = 2; k <= 16; ++k) p.tau_table[k] = 1;
  auto provider = provider_for(AdversaryKind::StaticLine, 1, 4, 2);
  Simulator<double> sim(4, 0, p, provider);
  CHECK_THROWS_AS(sim.run(16), ScheduleError);
}

TEST_CASE("full protocol run: n=4, delta=2, c=3") {
  // Independent oracle: per-iteration sums of the closed-form phase lengths,
  // (24+4+2)+(213+5+3)+(1420+6+4) = 30+221+1430 = 1681.
  const std::int64_t expected_total = 1681;

  SUBCASE("static line") {
    auto provider = provider_for(AdversaryKind::StaticLine, 1, 4, 2);
    Simulator<double> sim(4, 0, make_params(2, ArithmeticMode::Float64),
                          provider);
    RunResult r = sim.run(16);
    CHECK(r.output_count == 4);
    CHECK(r.total_rounds == expected_total);
    CHECK(r.halted_uniformly);
    CHECK(r.violations_total == 0);
    REQUIRE(r.per_iteration.size() == 3);
    CHECK(r.per_iteration[0].collection_rounds == 24);
    CHECK(r.per_iteration[0].verification_rounds == 4);
    CHECK(r.per_iteration[0].notification_rounds == 2);
    CHECK(r.per_iteration[2].collection_rounds == 1420);
    CHECK_FALSE(r.per_iteration[0].is_correct_at_verification_end);
    CHECK_FALSE(r.per_iteration[1].is_correct_at_verification_end);
    CHECK(r.per_iteration[2].is_correct_at_verification_end);
  }
  SUBCASE("round count is adversary-independent") {
    auto provider = provider_for(AdversaryKind::RandomConnected, 42, 4, 2);
    Simulator<double> sim(4, 0, make_params(2, ArithmeticMode::Float64),
                          provider);
    RunResult r = sim.run(16);
    CHECK(r.output_count == 4);
    CHECK(r.total_rounds == expected_total);
  }
  SUBCASE("exact-rational mode conserves energy bit-exactly") {
    auto provider = provider_for(AdversaryKind::StaticLine, 1, 4, 2);
    Simulator<Rat> sim(4, 0, make_params(2, ArithmeticMode::ExactRational),
                       provider);
    RunResult r = sim.run(16);
    CHECK(r.output_count == 4);
    CHECK(r.conservation_max_deviation == 0.0);
    CHECK(r.max_nonleader_energy <= 1.0);
  }
}

TEST_CASE("leader-peripheral adversary still counts exactly") {
  auto provider = provider_for(AdversaryKind::LeaderPeripheral, 11, 5, 2);
  Simulator<double> sim(5, 0, make_params(2, ArithmeticMode::Float64),
                        provider);
  RunResult r = sim.run(20);
  CHECK(r.output_count == 5);
  CHECK(r.halted_uniformly);
}

TEST_CASE("notification rounds without a halt holder change nothing") {
  auto provider = provider_for(AdversaryKind::StaticLine, 1, 4, 2);
  Simulator<double> sim(4, 0, make_params(2, ArithmeticMode::Float64),
                        provider);
  sim.begin_iteration(2);  // k < n, verification will reject
  while (sim.phase() != Phase::Notification) sim.run_round();
  while (!sim.iteration_done()) {
    sim.run_round();
    CHECK_FALSE(sim.leader_state().halt);
    for (int i = 1; i < 4; ++i) CHECK_FALSE(sim.nonleader(i).halt);
  }
}

// Test-only faulty update: deducts a single share regardless of degree (the
// non-conservative reading). Creates energy whenever a non-leader with
// energy has two or more neighbors.
struct LiteralUpdate {
  template <class S>
  static void apply(NonLeaderState<S>& s, const S& received_sum, int degree,
                    const CollectionConstants<S>& c) {
    (void)degree;
    s.e *= c.retain[1];
    s.e += received_sum;
  }
};

TEST_CASE("injected literal update trips the conservation check") {
  SUBCASE("lenient mode records the violation in round 1") {
    auto provider = provider_for(AdversaryKind::StaticLine, 1, 4, 2);
    EngineOptions options;
    options.strict = false;
    Simulator<Rat, LiteralUpdate> sim(
        4, 0, make_params(2, ArithmeticMode::ExactRational), provider,
        options);
    sim.begin_iteration(2);
    sim.run_round();
    sim.run_round();
    const RunResult& r = sim.partial_result();
    bool conservation_tripped = false;
    for (const auto& v : r.violations) {
      if (v.kind == "conservation" && v.round <= 2) {
        conservation_tripped = true;
      }
    }
    CHECK(conservation_tripped);
  }
  SUBCASE("strict mode aborts immediately") {
    auto provider = provider_for(AdversaryKind::StaticRing, 1, 5, 2);
    Simulator<double, LiteralUpdate> sim(
        5, 0, make_params(2, ArithmeticMode::Float64), provider);
    sim.begin_iteration(2);
    CHECK_THROWS_AS(sim.run_round(), InvariantError);
  }
}

TEST_CASE("exported topology replays to the identical result") {
  std::ostringstream exported;
  RunResult original;
  {
    auto provider = provider_for(AdversaryKind::RandomConnected, 9, 4, 2);
    EngineOptions options;
    options.topology_out = &exported;
    Simulator<double> sim(4, 0, make_params(2, ArithmeticMode::Float64),
                          provider, options);
    original = sim.run(16);
  }
  std::vector<Topology> rounds;
  std::istringstream lines(exported.str());
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty()) rounds.push_back(topology_from_jsonl(line, 4));
  }
  CHECK(static_cast<std::int64_t>(rounds.size()) == original.total_rounds);

  FileTopologyProvider replay(std::move(rounds));
  Simulator<double> sim(4, 0, make_params(2, ArithmeticMode::Float64),
                        replay);
  RunResult replayed = sim.run(16);
  CHECK(replayed.output_count == original.output_count);
  CHECK(replayed.total_rounds == original.total_rounds);
  REQUIRE(replayed.per_iteration.size() == original.per_iteration.size());
  for (std::size_t i = 0; i < replayed.per_iteration.size(); ++i) {
    CHECK(replayed.per_iteration[i].end_of_collection_leader_energy ==
          original.per_iteration[i].end_of_collection_leader_energy);
    CHECK(replayed.per_iteration[i].first_threshold_crossing_round ==
          original.per_iteration[i].first_threshold_crossing_round);
  }
}

TEST_CASE("file topology provider exhausts with a diagnostic") {
  std::vector<Topology> rounds;
  Topology t{2, 1, {{0, 1}}};
  rounds.push_back(t);
  FileTopologyProvider replay(std::move(rounds));
  Simulator<double> sim(2, 0, make_params(1, ArithmeticMode::Float64),
                        replay);
  CHECK_THROWS_AS(sim.run(8), TopologyError);
}

// Mode agreement: full rational and float trajectories stay within 1e-9
// relative error at every node every round, on runs short enough to compare
// wholesale.
TEST_CASE("rational and float trajectories agree") {
  struct Case {
    int n;
    int delta;
    AdversaryKind kind;
  };
  for (const Case& c : {Case{2, 1, AdversaryKind::StaticLine},
                        Case{3, 2, AdversaryKind::StaticRing},
                        Case{3, 2, AdversaryKind::RandomConnected}}) {
    auto provider_f = provider_for(c.kind, 17, c.n, c.delta);
    auto provider_r = provider_for(c.kind, 17, c.n, c.delta);
    Simulator<double> fsim(c.n, 0, make_params(c.delta, ArithmeticMode::Float64),
                           provider_f);
    Simulator<Rat> rsim(c.n, 0,
                        make_params(c.delta, ArithmeticMode::ExactRational),
                        provider_r);
    auto agree = [&](double f, const Rat& r) {
      const double rd = r.to_double();
      const double scale = std::max(1.0, std::abs(rd));
      CHECK(std::abs(f - rd) <= 1e-9 * scale);
    };
    bool halted = false;
    for (int k = 2; !halted && k <= c.n; ++k) {
      fsim.begin_iteration(k);
      rsim.begin_iteration(k);
      while (!fsim.iteration_done()) {
        fsim.run_round();
        rsim.run_round();
        agree(fsim.leader_state().e_leader, rsim.leader_state().e_leader);
        for (int i = 1; i < c.n; ++i) {
          agree(fsim.nonleader(i).e, rsim.nonleader(i).e);
        }
      }
      CHECK(fsim.leader_state().halt == rsim.leader_state().halt);
      halted = fsim.leader_state().halt;
    }
    CHECK(halted);  // both accepted at k = n
  }
}
