// Copyright 2026 The qzk Authors
// SPDX-License-Identifier: Apache-2.0
//
// History-state machinery: flag schedules are threshold functions that flip
// consecutively around each reflection, snapshots propagate exactly (checked
// against an independent dense reconstruction), message blocks stay inside
// the inner code at every micro-phase boundary, the reflection timestep
// realizes the flagged-reflection relation, and outer-share reduced states
// computed by isometry push-through match brute-force encoding of the full
// snapshot.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdint>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qzk/error.hpp"
#include "qzk/history.hpp"
#include "qzk/oracle.hpp"
#include "qzk/protocol.hpp"
#include "qzk/ring.hpp"
#include "qzk/stabilizer_code.hpp"

using namespace qzk;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string expect_error(ErrorKind kind, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    CHECK(e.kind() == kind);
    return e.what();
  }
  FAIL("expected an Error");
  return {};
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

struct Fixture {
  ProtocolCircuit logical;
  ProverStrategy honest;
  ProtocolCircuit robust;
  ProverStrategy wrapped;
};

Fixture make_fixture(const StabilizerCode& code) {
  Fixture f;
  f.logical = parse_circuit(
      read_file(std::string(QZK_EXAMPLES_DIR) + "/tiny.zkp"));
  f.honest = parse_strategy(
      read_file(std::string(QZK_EXAMPLES_DIR) + "/tiny.strategy"));
  f.robust = robustify(f.logical, code);
  f.wrapped = wrap_strategy(f.honest, code);
  return f;
}

// Exact amplitude-map equality of two sparse states.
void check_sparse_equal(const SparseState& a, const SparseState& b) {
  REQUIRE(a.num_qubits() == b.num_qubits());
  CHECK(a.support_size() == b.support_size());
  for (const auto& [basis, amp] : a.amplitudes())
    CHECK(b.amplitude(basis) == amp);
}

// Independent dense reconstruction of |Phi_t>: run the circuit gates through
// the dense oracle, then stamp the flag bits (the flags never entangle, so
// applying them at the end is equivalent to flipping along the way).
DenseState dense_snapshot(const HistoryStateSpec& spec, std::size_t t) {
  DenseState state(spec.total_qubits);
  const ProverStrategy& strategy = *spec.strategy;
  REQUIRE(!strategy.initial_state.empty());
  std::vector<CQ2> amps(std::uint64_t{1} << spec.total_qubits, CQ2(0));
  std::vector<int> qubit_map;
  for (int i = 1; i <= spec.circuit->provers; ++i)
    for (int w : spec.circuit->message_wires(i)) qubit_map.push_back(w);
  for (int i = 1; i <= spec.circuit->provers; ++i)
    for (int q : spec.private_qubits(i)) qubit_map.push_back(q);
  int logical = static_cast<int>(qubit_map.size());
  for (std::size_t idx = 0; idx < strategy.initial_state.size(); ++idx) {
    if (strategy.initial_state[idx].is_zero()) continue;
    std::uint64_t basis = 0;
    for (int q = 0; q < logical; ++q)
      if (idx >> (logical - 1 - q) & 1)
        basis |= std::uint64_t{1} << (spec.total_qubits - 1 - qubit_map[q]);
    amps[basis] = strategy.initial_state[idx];
  }
  state = DenseState::from_amplitudes(spec.total_qubits, std::move(amps));

  for (std::size_t step = 1; step <= t; ++step) {
    const ProtoGate& pg = spec.circuit->gates[step - 1];
    if (pg.is_prover) {
      std::vector<int> local = spec.circuit->message_wires(pg.prover);
      for (int q : spec.private_qubits(pg.prover)) local.push_back(q);
      const ProverAction& action =
          spec.strategy->actions[pg.prover - 1][pg.round - 1];
      for (const Gate& g : action.gates) state.apply(remap_gate(g, local));
    } else if (pg.gate.label != GateLabel::kI) {
      state.apply(pg.gate);
    }
  }
  std::vector<int> flags = spec.schedule.flag_bits(t);
  for (std::size_t b = 0; b < flags.size(); ++b)
    if (flags[b])
      state.apply(Gate(GateLabel::kX, {spec.flag_base + static_cast<int>(b)}));
  return state;
}

}  // namespace

// ---------------------------------------------------------------------------

TEST_CASE("unary clock strings have t ones then zeros") {
  CHECK(unary_clock(5, 0) == std::vector<int>{0, 0, 0, 0, 0});
  CHECK(unary_clock(5, 3) == std::vector<int>{1, 1, 1, 0, 0});
  CHECK(unary_clock(5, 5) == std::vector<int>{1, 1, 1, 1, 1});
  CHECK(unary_clock(0, 0).empty());
  expect_error(ErrorKind::kDomain, [] { unary_clock(4, 5); });
}

TEST_CASE("flag schedules are consecutive threshold flips") {
  Fixture f = make_fixture(StabilizerCode::trivial());
  HistoryStateSpec spec =
      build_history_spec(f.robust, f.wrapped, StabilizerCode::trivial());

  // T is the robustified gate count.
  CHECK(spec.T == f.robust.depth());
  REQUIRE(spec.schedule.t_star.size() == 1);
  std::size_t ts = spec.schedule.t_star[0];
  CHECK(ts == f.robust.annotation->t_star[0]);

  // Threshold values around the reflection.
  CHECK(spec.schedule.flag_bits(ts) == std::vector<int>{1, 1, 0});
  CHECK(spec.schedule.flag_bits(ts - 2) == std::vector<int>{0, 0, 0});
  CHECK(spec.schedule.flag_bits(ts - 1) == std::vector<int>{1, 0, 0});
  CHECK(spec.schedule.flag_bits(ts + 1) == std::vector<int>{1, 1, 1});
  CHECK(spec.schedule.flag_bits(0) == std::vector<int>{0, 0, 0});
  CHECK(spec.schedule.flag_bits(spec.T) == std::vector<int>{1, 1, 1});

  // Flags flip from 0 to 1 exactly once, consecutively.
  std::vector<int> prev = spec.schedule.flag_bits(0);
  std::vector<std::size_t> flip_time(3, 0);
  for (std::size_t t = 1; t <= spec.T; ++t) {
    std::vector<int> cur = spec.schedule.flag_bits(t);
    for (int b = 0; b < 3; ++b) {
      CHECK(cur[b] >= prev[b]);  // monotone
      if (cur[b] != prev[b]) flip_time[b] = t;
    }
    prev = cur;
  }
  CHECK(flip_time == std::vector<std::size_t>{ts - 1, ts, ts + 1});

  // Register layout: wires, then privates, then the flag triple.
  CHECK(spec.circuit_wires == 4);
  CHECK(spec.private_qubits(1) == std::vector<int>{4});
  CHECK(spec.flag_qubits(1) == std::array<int, 3>{5, 6, 7});
  CHECK(spec.total_qubits == 8);
  CHECK(spec.verifier_wires == std::vector<int>{0, 1, 2});
}

TEST_CASE("the builder rejects mismatched inputs") {
  Fixture f = make_fixture(StabilizerCode::steane());

  // Logical circuits have no history spec.
  expect_error(ErrorKind::kDomain, [&] {
    build_history_spec(f.logical, f.honest, StabilizerCode::trivial());
  });
  // Inner code must match the block length.
  expect_error(ErrorKind::kDomain, [&] {
    build_history_spec(f.robust, f.wrapped, StabilizerCode::trivial());
  });
  // Strategy widths must match.
  expect_error(ErrorKind::kInvalidStrategy, [&] {
    build_history_spec(f.robust, f.honest, StabilizerCode::steane());
  });

  // Width-matching strategy whose initial messages are NOT codewords.
  ProverStrategy raw;
  raw.provers = 1;
  raw.message_width = 7;
  raw.private_qubits = {1};
  raw.actions.resize(1);
  raw.actions[0].push_back(f.wrapped.actions[0][0]);
  std::string msg = expect_error(ErrorKind::kInvalidStrategy, [&] {
    build_history_spec(f.robust, raw, StabilizerCode::steane());
  });
  CHECK(contains(msg, "code subspace"));

  // Multi-round reflections are out of scope for history states.
  ProtocolCircuit two_rounds = parse_circuit(
      "CIRCUIT n=1 m=1 k=1\nPHASE VOP1\nID\nPHASE COPYQ\nPHASE PROVER\n"
      "PROVER 1 1\nPROVER 1 2\nPHASE COPYA\nPHASE VOP2\n");
  ProverStrategy two_actions;
  two_actions.provers = 1;
  two_actions.message_width = 1;
  two_actions.private_qubits = {0};
  two_actions.actions.resize(1);
  two_actions.actions[0].resize(2);
  ProtocolCircuit robust2 = robustify(two_rounds, StabilizerCode::trivial());
  ProverStrategy wrapped2 = wrap_strategy(two_actions,
                                          StabilizerCode::trivial());
  msg = expect_error(ErrorKind::kDomain, [&] {
    build_history_spec(robust2, wrapped2, StabilizerCode::trivial());
  });
  CHECK(contains(msg, "single-round"));
}

TEST_CASE("the initial snapshot is zeros, the prepared messages, and f(0)") {
  // Identity encoding: everything starts at |0...0>.
  Fixture f = make_fixture(StabilizerCode::trivial());
  HistoryStateSpec spec =
      build_history_spec(f.robust, f.wrapped, StabilizerCode::trivial());
  SparseState zero = snapshot_vector(spec, 0);
  CHECK(zero.support_size() == 1);
  CHECK(zero.amplitude(0) == CQ2(1));

  // Seven-qubit encoding: the message block is Enc(|0>), all else zero.
  Fixture g = make_fixture(StabilizerCode::steane());
  HistoryStateSpec sspec =
      build_history_spec(g.robust, g.wrapped, StabilizerCode::steane());
  SparseState initial = snapshot_vector(sspec, 0);
  CHECK(initial.norm2() == Q2(Rat(1)));
  CHECK(initial.support_size() == 8);
  // Support confined to the message block's wires.
  std::uint64_t message_mask = 0;
  for (int w : sspec.message_wires(1))
    message_mask |= std::uint64_t{1} << (sspec.total_qubits - 1 - w);
  for (const auto& [basis, amp] : initial.amplitudes()) {
    CHECK((basis & ~message_mask) == 0);
    CHECK(!amp.is_zero());
  }
}

TEST_CASE("snapshots match an independent dense reconstruction") {
  Fixture f = make_fixture(StabilizerCode::trivial());
  HistoryStateSpec spec =
      build_history_spec(f.robust, f.wrapped, StabilizerCode::trivial());

  for (std::size_t t = 0; t <= spec.T; ++t) {
    SparseState snap = snapshot_vector(spec, t);
    CHECK(snap.norm2() == Q2(Rat(1)));
    DenseState dense = dense_snapshot(spec, t);
    std::size_t support = 0;
    for (std::uint64_t idx = 0; idx < dense.dimension(); ++idx) {
      if (!dense.amplitude(idx).is_zero()) ++support;
      CHECK(snap.amplitude(idx) == dense.amplitude(idx));
    }
    CHECK(snap.support_size() == support);
  }

  // The accepting fixture ends with the output qubit reading 1 exactly.
  SparseState last = snapshot_vector(spec, spec.T);
  DenseMatrix out = last.reduced_density({spec.circuit->output_qubit});
  CHECK(out[0] == CQ2(0));
  CHECK(out[3] == CQ2(1));
  CHECK(out[1] == CQ2(0));
  CHECK(out[2] == CQ2(0));

  expect_error(ErrorKind::kDomain,
               [&] { snapshot_vector(spec, spec.T + 1); });
}

TEST_CASE("encoded snapshots stay normalized with encoded messages") {
  Fixture f = make_fixture(StabilizerCode::steane());
  const StabilizerCode& steane = StabilizerCode::steane();
  HistoryStateSpec spec = build_history_spec(f.robust, f.wrapped, steane);

  // Walk one state through all timesteps, checking at every micro-phase
  // boundary that the message block sits in the code subspace and the flag
  // qubits read exactly f(t).
  std::vector<std::size_t> boundaries{0};
  for (const MicroPhase& p : f.robust.annotation->phases)
    boundaries.push_back(p.end);

  SparseState state = snapshot_vector(spec, 0);
  std::size_t done = 0;
  std::vector<int> block = spec.message_wires(1);
  for (std::size_t b : boundaries) {
    for (std::size_t step = done + 1; step <= b; ++step)
      apply_timestep(spec, state, step);
    done = b;
    CHECK(state.norm2() == Q2(Rat(1)));
    for (const PauliOperator& gen : steane.generators()) {
      CHECK(state.expectation(gen.embed(spec.total_qubits, block)) ==
            CQ2(1));
    }
    std::vector<int> flags = spec.schedule.flag_bits(b);
    std::array<int, 3> fq = spec.flag_qubits(1);
    for (int i = 0; i < 3; ++i) {
      PauliOperator z = PauliOperator::parse("Z").embed(
          spec.total_qubits, {fq[i]});
      CHECK(state.expectation(z) == CQ2(flags[i] ? -1 : 1));
    }
  }
  CHECK(done == spec.T);

  // Final snapshot accepts exactly.
  DenseMatrix out = state.reduced_density({spec.circuit->output_qubit});
  CHECK(out[0] == CQ2(0));
  CHECK(out[3] == CQ2(1));
}

TEST_CASE("the reflection timestep is the flagged honest reflection") {
  for (const StabilizerCode* code :
       {&StabilizerCode::trivial(), &StabilizerCode::steane()}) {
    Fixture f = make_fixture(*code);
    HistoryStateSpec spec = build_history_spec(f.robust, f.wrapped, *code);
    std::size_t ts = spec.schedule.t_star[0];

    SparseState before = snapshot_vector(spec, ts - 1);
    SparseState after = snapshot_vector(spec, ts);

    // Apply the wrapped reflection and the prover-flag flip by hand.
    SparseState manual = before;
    std::vector<int> local = spec.message_wires(1);
    for (int q : spec.private_qubits(1)) local.push_back(q);
    for (const Gate& g : f.wrapped.actions[0][0].gates)
      manual.apply(remap_gate(g, local));
    manual.apply(Gate(GateLabel::kX, {spec.flag_qubits(1)[1]}));
    check_sparse_equal(after, manual);
  }
}

TEST_CASE("outer shares depend only on the touched logical qubits") {
  Fixture f = make_fixture(StabilizerCode::trivial());
  HistoryStateSpec spec =
      build_history_spec(f.robust, f.wrapped, StabilizerCode::trivial());
  const StabilizerCode& outer = StabilizerCode::outer_four();
  int spw = outer.num_physical();

  // Brute force: outer-encode every verifier wire AND the message wire of
  // the full snapshot, then reduce.  (Encoding the message wire too keeps
  // the embedding uniform; its shares are simply never requested.)
  auto brute = [&](std::size_t t, const std::vector<OuterShare>& shares) {
    SparseState snap = snapshot_vector(spec, t);
    int wires = spec.circuit_wires;
    int rest = spec.total_qubits - wires;
    int total = wires * spw + rest;
    SparseState enc = SparseState::zero_weight(total);
    for (const auto& [basis, amp] : snap.amplitudes()) {
      std::uint64_t target = 0;
      for (int q = 0; q < spec.total_qubits; ++q) {
        if (!(basis >> (spec.total_qubits - 1 - q) & 1)) continue;
        int pos = q < wires ? q * spw + outer.input_qubit()
                            : wires * spw + (q - wires);
        target |= std::uint64_t{1} << (total - 1 - pos);
      }
      enc.set_amplitude(target, amp);
    }
    for (int w = 0; w < wires; ++w) {
      std::vector<int> map(static_cast<std::size_t>(spw));
      for (int s = 0; s < spw; ++s) map[s] = w * spw + s;
      for (const Gate& g : outer.encoder()) enc.apply(remap_gate(g, map));
    }
    std::vector<int> positions;
    for (const OuterShare& s : shares)
      positions.push_back(s.wire * spw + s.share);
    return enc.reduced_density(positions);
  };

  auto check_equal = [](const DenseMatrix& a, const DenseMatrix& b) {
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  };

  std::vector<std::vector<OuterShare>> requests = {
      {{0, 2}},                                  // one share of the output
      {{1, 0}, {1, 1}, {1, 2}, {1, 3}},          // a full block
      {{0, 1}, {2, 0}, {2, 3}},                  // two wires, mixed shares
      {{2, 2}, {1, 1}, {0, 0}},                  // order permuted
  };
  for (std::size_t t : {std::size_t{0}, std::size_t{5},
                        spec.schedule.t_star[0], spec.T}) {
    for (const auto& shares : requests)
      check_equal(outer_share_density(spec, t, shares), brute(t, shares));
  }

  // Ungrouped share lists and prover-held wires are rejected.
  expect_error(ErrorKind::kDomain, [&] {
    outer_share_density(spec, 0, {{0, 0}, {1, 0}, {0, 1}});
  });
  expect_error(ErrorKind::kDomain, [&] {
    outer_share_density(spec, 0, {{3, 0}});  // message wire
  });
  expect_error(ErrorKind::kDomain,
               [&] { outer_share_density(spec, 0, {{0, 4}}); });
}
