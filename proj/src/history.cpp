// Copyright 2026 The qzk Authors
// SPDX-License-Identifier: Apache-2.0

#include "qzk/history.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>

#include "qzk/error.hpp"

namespace qzk {
namespace {

// Shared with circuit_value_fixed_strategy's conventions: the strategy's
// local register [M_i, P_i] maps onto the snapshot wires.
std::vector<int> action_wires(const HistoryStateSpec& spec, int prover) {
  std::vector<int> wires = spec.circuit->message_wires(prover);
  for (int q : spec.private_qubits(prover)) wires.push_back(q);
  return wires;
}

void check_prover_index(const HistoryStateSpec& spec, int prover) {
  if (prover < 1 || prover > spec.circuit->provers)
    fail(ErrorKind::kDomain, "prover index out of range");
}

// Partial trace of a density matrix on n qubits down to the ordered subset
// `keep` (indices into the n qubits, MSB-first convention as everywhere).
DenseMatrix partial_trace(const DenseMatrix& rho, int n,
                          const std::vector<int>& keep) {
  int k = static_cast<int>(keep.size());
  std::vector<int> rest;
  for (int q = 0; q < n; ++q)
    if (std::find(keep.begin(), keep.end(), q) == keep.end())
      rest.push_back(q);
  std::uint64_t dim = std::uint64_t{1} << n;
  std::uint64_t kd = std::uint64_t{1} << k;
  std::uint64_t rd = std::uint64_t{1} << rest.size();
  auto assemble = [&](std::uint64_t kept_bits, std::uint64_t rest_bits) {
    std::uint64_t idx = 0;
    for (int b = 0; b < k; ++b)
      if (kept_bits >> (k - 1 - b) & 1)
        idx |= std::uint64_t{1} << (n - 1 - keep[b]);
    for (std::size_t b = 0; b < rest.size(); ++b)
      if (rest_bits >> (rest.size() - 1 - b) & 1)
        idx |= std::uint64_t{1} << (n - 1 - rest[b]);
    return idx;
  };
  DenseMatrix out(kd * kd, CQ2(0));
  for (std::uint64_t r = 0; r < kd; ++r)
    for (std::uint64_t c = 0; c < kd; ++c) {
      CQ2 sum;
      for (std::uint64_t e = 0; e < rd; ++e) {
        std::uint64_t ri = assemble(r, e);
        std::uint64_t ci = assemble(c, e);
        sum = sum + rho[ri * dim + ci];
      }
      out[r * kd + c] = sum;
    }
  return out;
}

}  // namespace

std::vector<int> unary_clock(std::size_t T, std::size_t t) {
  if (t > T) fail(ErrorKind::kDomain, "clock time beyond the last timestep");
  std::vector<int> bits(T, 0);
  for (std::size_t i = 0; i < t; ++i) bits[i] = 1;
  return bits;
}

// ---------------------------------------------------------------------------
// Flag schedule.

bool FlagSchedule::question_flag(int prover, std::size_t t) const {
  if (prover < 1 || prover > static_cast<int>(t_star.size()))
    fail(ErrorKind::kDomain, "prover index out of range");
  return t + 1 >= t_star[prover - 1];  // t >= t_star - 1, unsigned-safe
}

bool FlagSchedule::prover_flag(int prover, std::size_t t) const {
  if (prover < 1 || prover > static_cast<int>(t_star.size()))
    fail(ErrorKind::kDomain, "prover index out of range");
  return t >= t_star[prover - 1];
}

bool FlagSchedule::answer_flag(int prover, std::size_t t) const {
  if (prover < 1 || prover > static_cast<int>(t_star.size()))
    fail(ErrorKind::kDomain, "prover index out of range");
  return t >= t_star[prover - 1] + 1;
}

std::vector<int> FlagSchedule::flag_bits(std::size_t t) const {
  std::vector<int> bits;
  bits.reserve(3 * t_star.size());
  for (int i = 1; i <= static_cast<int>(t_star.size()); ++i) {
    bits.push_back(question_flag(i, t) ? 1 : 0);
    bits.push_back(prover_flag(i, t) ? 1 : 0);
    bits.push_back(answer_flag(i, t) ? 1 : 0);
  }
  return bits;
}

// ---------------------------------------------------------------------------
// Spec accessors.

std::vector<int> HistoryStateSpec::message_wires(int prover) const {
  check_prover_index(*this, prover);
  return circuit->message_wires(prover);
}

std::vector<int> HistoryStateSpec::private_qubits(int prover) const {
  check_prover_index(*this, prover);
  std::vector<int> out;
  int base = private_base[prover - 1];
  int end = prover < static_cast<int>(private_base.size())
                ? private_base[prover]
                : flag_base;
  for (int p = base; p < end; ++p) out.push_back(p);
  return out;
}

std::array<int, 3> HistoryStateSpec::flag_qubits(int prover) const {
  check_prover_index(*this, prover);
  int base = flag_base + 3 * (prover - 1);
  return {base, base + 1, base + 2};
}

// ---------------------------------------------------------------------------
// Builder.

HistoryStateSpec build_sim_layout(const ProtocolCircuit& circuit,
                                  const StabilizerCode& inner_code,
                                  const std::vector<int>& private_widths) {
  circuit.validate();
  if (!circuit.physical || !circuit.annotation)
    fail(ErrorKind::kDomain,
         "history states are built over robustified, annotated circuits");
  if (circuit.block_len != inner_code.num_physical())
    fail(ErrorKind::kDomain,
         "inner code does not match the circuit's block length");
  if (!private_widths.empty() &&
      static_cast<int>(private_widths.size()) != circuit.provers)
    fail(ErrorKind::kDomain,
         "private widths must be given for every prover or none");

  // Exactly one reflection per prover, in some order; rounds beyond the
  // first would need per-round flag triples, which single-round protocols
  // do not have.
  std::vector<std::size_t> t_star(static_cast<std::size_t>(circuit.provers),
                                  0);
  for (std::size_t idx = 0; idx < circuit.gates.size(); ++idx) {
    const ProtoGate& pg = circuit.gates[idx];
    if (!pg.is_prover) continue;
    if (pg.round != 1 || t_star[pg.prover - 1] != 0)
      fail(ErrorKind::kDomain,
           "history states cover single-round protocols only");
    t_star[pg.prover - 1] = idx + 1;
  }
  for (std::size_t v : t_star) {
    if (v == 0)
      fail(ErrorKind::kDomain,
           "every prover must reflect exactly once");
    // The question flag flips at t_star - 1, so all flags read zero at t=0
    // only when at least one timestep precedes every reflection.
    if (v < 2)
      fail(ErrorKind::kDomain,
           "reflections need at least one preceding timestep");
  }

  HistoryStateSpec spec;
  spec.circuit = &circuit;
  spec.inner_code = &inner_code;
  spec.T = circuit.depth();
  spec.schedule.t_star = std::move(t_star);

  spec.circuit_wires = circuit.num_wires();
  int cursor = spec.circuit_wires;
  for (int i = 0; i < circuit.provers; ++i) {
    spec.private_base.push_back(cursor);
    cursor += private_widths.empty() ? 0 : private_widths[i];
  }
  spec.flag_base = cursor;
  spec.total_qubits = cursor + 3 * circuit.provers;

  std::vector<bool> is_message(static_cast<std::size_t>(spec.circuit_wires),
                               false);
  for (int i = 1; i <= circuit.provers; ++i)
    for (int w : circuit.message_wires(i)) is_message[w] = true;
  for (int w = 0; w < spec.circuit_wires; ++w)
    if (!is_message[w]) spec.verifier_wires.push_back(w);

  return spec;
}

HistoryStateSpec build_history_spec(const ProtocolCircuit& circuit,
                                    const ProverStrategy& strategy,
                                    const StabilizerCode& inner_code) {
  strategy.validate();
  if (strategy.provers != circuit.provers)
    fail(ErrorKind::kInvalidStrategy, "prover count mismatch");

  HistoryStateSpec spec =
      build_sim_layout(circuit, inner_code, strategy.private_qubits);
  spec.strategy = &strategy;
  if (strategy.message_width != circuit.message_width())
    fail(ErrorKind::kInvalidStrategy,
         "strategy message width does not match the circuit");
  for (int i = 1; i <= circuit.provers; ++i)
    if (strategy.actions[i - 1].empty())
      fail(ErrorKind::kInvalidStrategy,
           "strategy lacks an action for prover " + std::to_string(i));

  // Honest-encoding assumption: the initial message blocks must lie in the
  // inner code's subspace.  Stabilizer expectations decide this exactly.
  SparseState initial = snapshot_vector(spec, 0);
  for (int i = 1; i <= circuit.provers; ++i) {
    std::vector<int> wires = circuit.message_wires(i);
    for (int b = 0; b < circuit.message_qubits; ++b) {
      std::vector<int> block(wires.begin() + b * circuit.block_len,
                             wires.begin() + (b + 1) * circuit.block_len);
      for (const PauliOperator& g : inner_code.generators()) {
        CQ2 expect = initial.expectation(g.embed(spec.total_qubits, block));
        if (!(expect == CQ2(1)))
          fail(ErrorKind::kInvalidStrategy,
               "initial message blocks must lie in the inner code subspace");
      }
    }
  }

  return spec;
}

// ---------------------------------------------------------------------------
// Snapshots.

void apply_timestep(const HistoryStateSpec& spec, SparseState& state,
                    std::size_t t) {
  if (t < 1 || t > spec.T)
    fail(ErrorKind::kDomain, "timestep out of range");
  const ProtoGate& pg = spec.circuit->gates[t - 1];
  if (pg.is_prover) {
    const ProverAction& action =
        spec.strategy->actions[pg.prover - 1][pg.round - 1];
    std::vector<int> local = action_wires(spec, pg.prover);
    if (!action.matrix.empty()) {
      state.apply_matrix(local, action.matrix);
    } else {
      for (const Gate& g : action.gates) state.apply(remap_gate(g, local));
    }
  } else if (pg.gate.label != GateLabel::kI) {
    state.apply(pg.gate);
  }
  // Flag flips crossing at t ride along with the timestep's gate.
  for (int i = 1; i <= spec.circuit->provers; ++i) {
    std::size_t ts = spec.schedule.t_star[i - 1];
    std::array<int, 3> flags = spec.flag_qubits(i);
    if (t + 1 == ts) state.apply(Gate(GateLabel::kX, {flags[0]}));
    if (t == ts) state.apply(Gate(GateLabel::kX, {flags[1]}));
    if (t == ts + 1) state.apply(Gate(GateLabel::kX, {flags[2]}));
  }
}

SparseState snapshot_vector(const HistoryStateSpec& spec, std::size_t t) {
  if (t > spec.T) fail(ErrorKind::kDomain, "snapshot time beyond T");
  if (spec.total_qubits > 62)
    fail(ErrorKind::kCapExceeded, "snapshot register too wide");

  const ProverStrategy& strategy = *spec.strategy;
  SparseState state(spec.total_qubits);
  if (!strategy.initial_state.empty()) {
    // Strategy qubit order [M_1 .. M_k, P_1 .. P_k] -> snapshot indices.
    std::vector<int> qubit_map;
    for (int i = 1; i <= spec.circuit->provers; ++i)
      for (int w : spec.circuit->message_wires(i)) qubit_map.push_back(w);
    for (int i = 1; i <= spec.circuit->provers; ++i)
      for (int q : spec.private_qubits(i)) qubit_map.push_back(q);
    int logical = static_cast<int>(qubit_map.size());
    state = SparseState::zero_weight(spec.total_qubits);
    for (std::size_t idx = 0; idx < strategy.initial_state.size(); ++idx) {
      const CQ2& a = strategy.initial_state[idx];
      if (a.is_zero()) continue;
      std::uint64_t basis = 0;
      for (int q = 0; q < logical; ++q)
        if (idx >> (logical - 1 - q) & 1)
          basis |= std::uint64_t{1} << (spec.total_qubits - 1 - qubit_map[q]);
      state.set_amplitude(basis, a);
    }
  }
  for (std::size_t step = 1; step <= t; ++step)
    apply_timestep(spec, state, step);
  return state;
}

// ---------------------------------------------------------------------------
// Outer-share reduced states.

DenseMatrix outer_share_density(const HistoryStateSpec& spec, std::size_t t,
                                const std::vector<OuterShare>& shares) {
  if (shares.empty()) fail(ErrorKind::kDomain, "no shares requested");
  const StabilizerCode& outer = StabilizerCode::outer_four();
  int shares_per_wire = outer.num_physical();

  // Group-check the share list and collect the touched wires in order.
  std::vector<int> wires;                 // first-appearance order
  std::vector<std::vector<int>> kept;     // share indices kept per wire
  for (const OuterShare& s : shares) {
    if (s.share < 0 || s.share >= shares_per_wire)
      fail(ErrorKind::kDomain, "share index out of range");
    bool verifier_side =
        std::find(spec.verifier_wires.begin(), spec.verifier_wires.end(),
                  s.wire) != spec.verifier_wires.end();
    if (!verifier_side)
      fail(ErrorKind::kDomain,
           "outer shares exist only for verifier-side wires");
    if (!wires.empty() && wires.back() == s.wire) {
      kept.back().push_back(s.share);
      continue;
    }
    if (std::find(wires.begin(), wires.end(), s.wire) != wires.end())
      fail(ErrorKind::kDomain, "shares must be grouped by wire");
    wires.push_back(s.wire);
    kept.push_back({s.share});
  }

  // Logical reduced state on the touched wires (this is all the encoded
  // state can depend on: the block encoders are isometries on disjoint
  // wires, so untouched blocks trace out to a constant factor).
  SparseState snapshot = snapshot_vector(spec, t);
  DenseMatrix logical = snapshot.reduced_density(wires);

  // Per-wire transfer matrices chi[a][b] = Tr_dropped(E|a><b|E^dagger); the
  // output is sum over bit patterns of rho[a,b] * tensor_w chi_w[a_w][b_w].
  int nw = static_cast<int>(wires.size());
  std::vector<std::array<std::array<DenseMatrix, 2>, 2>> chi(
      static_cast<std::size_t>(nw));
  for (int w = 0; w < nw; ++w) {
    std::array<DenseState, 2> encoded = {DenseState(shares_per_wire),
                                         DenseState(shares_per_wire)};
    for (int a = 0; a < 2; ++a) {
      DenseState state(shares_per_wire,
                       a ? std::uint64_t{1}
                               << (shares_per_wire - 1 - outer.input_qubit())
                         : 0);
      state.apply(outer.encoder());
      encoded[a] = state;
    }
    std::uint64_t dim = std::uint64_t{1} << shares_per_wire;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        DenseMatrix density(dim * dim, CQ2(0));
        for (std::uint64_t r = 0; r < dim; ++r)
          for (std::uint64_t c = 0; c < dim; ++c)
            density[r * dim + c] = encoded[a].amplitude(r) *
                                   encoded[b].amplitude(c).conj();
        chi[w][a][b] = partial_trace(density, shares_per_wire, kept[w]);
      }
  }

  int out_qubits = 0;
  for (const auto& k : kept) out_qubits += static_cast<int>(k.size());
  std::uint64_t out_dim = std::uint64_t{1} << out_qubits;
  DenseMatrix out(out_dim * out_dim, CQ2(0));
  std::uint64_t ldim = std::uint64_t{1} << nw;
  for (std::uint64_t a = 0; a < ldim; ++a)
    for (std::uint64_t b = 0; b < ldim; ++b) {
      const CQ2& amp = logical[a * ldim + b];
      if (amp.is_zero()) continue;
      DenseMatrix factor = chi[0][a >> (nw - 1) & 1][b >> (nw - 1) & 1];
      for (int w = 1; w < nw; ++w)
        factor = dense_tensor(
            factor, chi[w][a >> (nw - 1 - w) & 1][b >> (nw - 1 - w) & 1]);
      for (std::uint64_t i = 0; i < out_dim * out_dim; ++i)
        out[i] = out[i] + amp * factor[i];
    }
  return out;
}

}  // namespace qzk
