// Copyright 2026 The qzk Authors
// SPDX-License-Identifier: Apache-2.0
//
// Symbolic specification of the distributed, flag-augmented history state of
// a robustified protocol circuit, plus oracle-backed snapshot access.
//
// The history state is (T+1)^{-1/2} * sum_t |unary(t)>_C (x) |Phi_t>, where
// unary(t) has t ones followed by T-t zeros and |Phi_t> is the circuit state
// after t timesteps, extended by three flag qubits per prover.  The flags
// (question, prover, answer) are threshold functions of t against the
// prover's reflection timestep t_star: they flip to 1 at t_star-1, t_star,
// and t_star+1 respectively, so |Phi_t> always factorizes as a circuit part
// times a flag basis state.
//
// Registers are distributed as follows.  Every clock qubit and every
// verifier-side circuit wire (everything except the message blocks) is
// outer-encoded into four shares; verifier player j holds share j of each.
// Prover player i holds its flag triple F_i, its private register P_i, and
// its message blocks M_i unencoded.
//
// Snapshot register layout (fixture convention): circuit wires first, then
// the private registers P_1..P_k, then the flag triples [q_i, p_i, a_i] per
// prover.  The clock is never materialized; snapshots are per-t states and
// the unary clock strings stay symbolic.

#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "qzk/oracle.hpp"
#include "qzk/protocol.hpp"
#include "qzk/stabilizer_code.hpp"

namespace qzk {

// Unary clock string for time t: t ones then T-t zeros.
std::vector<int> unary_clock(std::size_t T, std::size_t t);

// Threshold flag functions per prover.  Provers are 1-based; each must
// reflect exactly once (single-round protocols).
struct FlagSchedule {
  // t_star[i-1] is the 1-based reflection timestep of prover i.
  std::vector<std::size_t> t_star;

  bool question_flag(int prover, std::size_t t) const;  // t >= t_star - 1
  bool prover_flag(int prover, std::size_t t) const;    // t >= t_star
  bool answer_flag(int prover, std::size_t t) const;    // t >= t_star + 1

  // Flag basis bits at time t, ordered [q_1, p_1, a_1, q_2, p_2, a_2, ...].
  std::vector<int> flag_bits(std::size_t t) const;
};

// Everything needed to answer snapshot and reduced-state queries about the
// history state of (circuit, strategy).  Holds no state vectors; the
// referenced circuit, strategy, and code must outlive the spec.
struct HistoryStateSpec {
  const ProtocolCircuit* circuit = nullptr;
  const ProverStrategy* strategy = nullptr;
  const StabilizerCode* inner_code = nullptr;

  std::size_t T = 0;  // timesteps; the clock has T qubits
  FlagSchedule schedule;

  // Snapshot register layout.
  int circuit_wires = 0;
  std::vector<int> private_base;  // first private qubit per prover
  int flag_base = 0;              // first flag qubit (after all privates)
  int total_qubits = 0;

  // Circuit wires whose four outer shares go to the verifier players
  // (everything except the message blocks).
  std::vector<int> verifier_wires;

  // Snapshot indices of prover i's registers (1-based prover).
  std::vector<int> message_wires(int prover) const;
  std::vector<int> private_qubits(int prover) const;
  std::array<int, 3> flag_qubits(int prover) const;  // {q, p, a}
};

// Builds the spec for a robustified, annotated circuit and a matching
// (wrapped) strategy.  Checks that each prover reflects exactly once, that
// the strategy fits the circuit, and that the initial message blocks lie in
// the inner code's subspace (the honest-encoding assumption; checked through
// the sparse oracle at t = 0).  Errors: kDomain for a circuit that is not
// robustified/annotated or has multi-round reflections; kInvalidStrategy for
// arity mismatches or unencoded initial messages.
HistoryStateSpec build_history_spec(const ProtocolCircuit& circuit,
                                    const ProverStrategy& strategy,
                                    const StabilizerCode& inner_code);

// Strategy-free layout over the same circuit: everything build_history_spec
// derives from the circuit alone (timesteps, reflection schedule, register
// bases, verifier wires), with `strategy` left null and the private
// registers sized by `private_widths` (pass an empty vector for zero-width
// privates; snapshot access then requires no strategy).  This is the view a
// party that never sees the prover strategy works with.
HistoryStateSpec build_sim_layout(const ProtocolCircuit& circuit,
                                  const StabilizerCode& inner_code,
                                  const std::vector<int>& private_widths = {});

// Exact |Phi_t| including prover and flag registers (verification use).
// Errors: kDomain for t > T, kCapExceeded beyond oracle capacity.
SparseState snapshot_vector(const HistoryStateSpec& spec, std::size_t t);

// Advances a snapshot from time t-1 to time t: applies the circuit gate (or
// prover reflection) of timestep t plus the flag flips crossing at t.  The
// propagation identity snapshot(t) == apply_timestep(snapshot(t-1), t) is
// definitional here; tests verify it against an independent dense oracle.
void apply_timestep(const HistoryStateSpec& spec, SparseState& state,
                    std::size_t t);

// One outer share of a verifier wire: share 0..3 of the wire's four-qubit
// encoding.
struct OuterShare {
  int wire = 0;
  int share = 0;
};

// Reduced density of the outer-encoded snapshot at time t on the given
// shares, computed by isometry push-through: only the touched wires' logical
// reduced state enters, so the result is well-defined for any snapshot the
// oracle can hold.  Shares must be grouped by wire (consecutive entries per
// wire, first-appearance order gives the output qubit order); each wire must
// be verifier-side.  Errors: kDomain on ungrouped or non-verifier shares.
DenseMatrix outer_share_density(const HistoryStateSpec& spec, std::size_t t,
                                const std::vector<OuterShare>& shares);

}  // namespace qzk
