// Copyright 2026 The qzk Authors
// SPDX-License-Identifier: Apache-2.0
//
// Referee-view simulator for the distributed history state.
//
// The honest players answer a referee's question by measuring the
// outer-encoded history state of (circuit, strategy).  This module computes
// the referee's view of that interaction — exact answer distributions,
// sampled answers, full adaptive transcripts — WITHOUT the strategy: it
// works from the robustified circuit's public structure alone.  Nothing in
// this header takes a ProverStrategy, and the context never stores one;
// that is the whole point.
//
// Three properties of the robustified circuit make this possible:
//   1. every data block outside an active micro-phase is a codeword of the
//      inner code, and reduced codeword densities on fewer wires than the
//      code distance are independent of the encoded content;
//   2. inside a micro-phase the circuit applies a fixed public unit (a block
//      encoder, an encoded transversal gate, a magic-state preparation, or
//      the output decoder), so prefix states are either explicitly known or
//      reducible content-independently;
//   3. prover reflections sit in their own single-timestep micro-phases,
//      and the measurement algebra of a validated question lets every term
//      that would need the reflection unitary either cancel exactly (the
//      reflection is an involution commuting with the other players'
//      operators) or collapse to a fixed two-qubit coherence between the
//      reflection's clock qubit and the prover flag.
//
// Every quantity is exact over Q(sqrt(2)); sampling draws are dyadic
// rationals compared exactly against cumulative probabilities.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "qzk/history.hpp"
#include "qzk/honest_dist.hpp"
#include "qzk/oracle.hpp"
#include "qzk/protocol.hpp"
#include "qzk/questions.hpp"
#include "qzk/ring.hpp"
#include "qzk/stabilizer_code.hpp"

namespace qzk {

// Hard per-session interaction budget: a question may touch at most this
// many logical registers, and operator-representation widths are asserted
// against it.
inline constexpr int kInteractionBound = 48;

// ---------------------------------------------------------------------------
// Sparse operator representations.
//
// Simulated densities live on logical registers identified by integer ids:
// the unary clock qubit of timestep t (1 <= t <= T) has id t, and snapshot
// qubit q (circuit wires, private registers, flag triples, in layout order)
// has id T + 1 + q.  An operator is a sum of terms, each a coefficient
// times a tensor product of small dense factors on disjoint id lists;
// registers a term does not mention are implicitly identity.  Inside a
// factor, ids[0] indexes the most significant bit of the matrix, matching
// the dense-oracle convention.

int clock_register(const HistoryStateSpec& layout, std::size_t t);
int qubit_register(const HistoryStateSpec& layout, int snapshot_qubit);

struct OperatorFactor {
  std::vector<int> ids;
  DenseMatrix matrix;  // dimension 2^ids.size()
};

struct OperatorTerm {
  CQ2 coeff = CQ2(1);
  std::vector<OperatorFactor> factors;  // pairwise disjoint id lists
};

struct EfficientOperatorRep {
  std::vector<int> support;  // ascending union of every term's ids
  std::vector<OperatorTerm> terms;

  // Widest term, counting ids across its factors.
  std::size_t max_width() const;
};

// Exact Tr(A B) over the union of the two supports.  Within each term pair,
// factors meeting on shared ids are multiplied densely on the merged
// register set; an id carried by one side only meets the identity, and an
// id in the supports that neither term mentions contributes the identity
// trace 2.  Throws kCapExceeded if a merged register group exceeds 10
// qubits.
CQ2 efficient_rep_trace(const EfficientOperatorRep& a,
                        const EfficientOperatorRep& b);

// Dense materialization on the full support, in ascending-id order (bit 0
// of the index = last support id).  Throws kCapExceeded beyond 10 qubits.
DenseMatrix materialize_rep(const EfficientOperatorRep& rep);

// ---------------------------------------------------------------------------
// Simulation context.

struct SimCache;  // memoized unit prefix states (internal)

// Everything the simulator may look at: the robustified circuit, the inner
// code, and the strategy-free register layout derived from them.  The
// circuit and code must outlive the context.  The layout's strategy pointer
// is null by construction.
struct SimContext {
  const ProtocolCircuit* circuit = nullptr;
  const StabilizerCode* inner_code = nullptr;
  HistoryStateSpec layout;
  std::shared_ptr<SimCache> cache;
};

SimContext make_sim_context(const ProtocolCircuit& circuit,
                            const StabilizerCode& inner_code);

// ---------------------------------------------------------------------------
// Snapshot reduction.
//
// Reduced density of the time-t circuit state (prover private registers
// traced out) on the ordered circuit-wire set `wires`.  Computed from the
// micro-phase structure: wires of completed encodings reduce by the
// codeword trace law block by block, wires of known ancilla states
// contribute basis factors, and wires inside the active micro-phase reduce
// through the unit's explicit prefix state (resource encodings and the
// output decoder) or the content-independent encoded-gate reduction
// (logical operations).  Errors: kDomain for bad wires or t > T;
// kInsufficientDistance when a reduction would depend on the encoded
// logical content; kCapExceeded beyond 8 result qubits.
DenseMatrix sim_snapshot(const SimContext& ctx, std::size_t t,
                         const std::vector<int>& wires);

// ---------------------------------------------------------------------------
// Simulated densities.
//
// sim_interval: the referee-visible density of the history-state segment
// [t1, t2] — the mixture (1/|I|) sum_{t,t' in I} |t><t'| (x) |Phi_t><Phi_t'|
// reduced to the registers a validated question touches.  Pairs whose clock
// or flag bits differ outside the touched registers vanish and are skipped;
// segments around each prover reflection inside the interval are handled
// separately (the reflection unitary cancels), with a star-questioned
// reflection contributing the exact clock-flag coherence term.
//
// sim_density: the full simulated density sum_t |t><t'| / (T+1) reduced the
// same way, assembled from maximal runs of times connected through touched
// clock qubits.  Term and width bounds are asserted internally:
// an interval representation stays within 3*kInteractionBound^2 terms of
// width at most 4*kInteractionBound, and the full density within
// 3*(T+1)*kInteractionBound^2 terms.
EfficientOperatorRep sim_interval(const SimContext& ctx,
                                  const QuestionTuple& question,
                                  std::size_t t1, std::size_t t2);
EfficientOperatorRep sim_density(const SimContext& ctx,
                                 const QuestionTuple& question);

// Exact answer distribution of the honest players for a validated question,
// computed from sim_density alone (same free-bit conventions as
// honest_distribution, against which tests compare it bit for bit).
AnswerDistribution simulated_distribution(const SimContext& ctx,
                                          const QuestionTuple& question);

// Sample one answer vector, player by player (verifier players 1..4, then
// prover players): each player's symbol is drawn by one exact
// inverse-CDF step on its conditional distribution given the symbols
// already fixed, consuming exactly one 53-bit draw from `rng` per player.
AnswerVector sample_answers(const SimContext& ctx,
                            const QuestionTuple& question,
                            std::mt19937_64& rng);
AnswerVector sample_answers(const SimContext& ctx,
                            const QuestionTuple& question,
                            std::uint64_t seed);

// ---------------------------------------------------------------------------
// Adaptive referee sessions.
//
// A referee addresses a fresh subset of players each round and may choose
// its questions from everything it has seen.  The simulator completes the
// partial question with pinned defaults (identity observables for verifier
// players, Q1 for prover players), samples the newly addressed players'
// answers conditioned on every answer already revealed, and repeats.  A
// referee that readdresses a player aborts the session — each player is
// measured once.

struct RefereeAsk {
  bool is_prover = false;
  int player = 1;  // 1..4 verifier, 1..k prover
  std::array<VerifierObservable, kObservablesPerVerifier> verifier{};
  ProverQuestion prover_question{};
};

struct RefereeMove {
  bool halt = false;
  std::vector<RefereeAsk> asks;
};

struct TranscriptRound {
  std::vector<RefereeAsk> asks;
  // Answers in ask order: six bits per verifier ask, one per prover ask.
  std::vector<std::vector<int>> answers;
};

struct Transcript {
  std::uint64_t seed = 0;
  std::vector<TranscriptRound> rounds;
  bool halted = false;
  bool aborted = false;
  std::string abort_reason;
};

// The referee sees the transcript so far and names the next move.
using Referee = std::function<RefereeMove(const Transcript&)>;

// Run a full adaptive session.  A malformed ask (bad player index, invalid
// accumulated question) aborts the transcript with the validation message
// rather than throwing, mirroring the reuse abort.  Errors: kCapExceeded if
// the session exceeds max_rounds or the accumulated question grows past 16
// non-identity observables.
Transcript simulate_adaptive(const SimContext& ctx, const Referee& referee,
                             std::uint64_t seed, int max_rounds = 16);

// One line per round: "ROUND i | PLAYERS ... | Q ... | A ...", then "HALT"
// or "ABORT <reason>".
std::string render_transcript(const Transcript& transcript);

}  // namespace qzk
