// Copyright 2026 The qzk Authors
// SPDX-License-Identifier: Apache-2.0
//
// Ground-truth answer distributions for the honest players.
//
// The honest players share the outer-encoded history state and measure the
// observables behind a question tuple.  This module computes the exact
// answer distribution directly from the definition: expectations of
// products of commuting observables on Enc_outer(|history>), assembled from
// per-timestep snapshot vectors and cross inner products — the full encoded
// state is never materialized.  For every subset s of the non-identity
// observables the correlation
//
//   chi(s) = <Enc(Phi)| prod_{j in s} W_j |Enc(Phi)>
//
// is computed by splitting the Pauli product into clock-share, wire-share,
// and prover-register factors; share factors compress through the outer
// isometry to exact 2x2 logical matrices, and the remaining double sum over
// clock times collapses under unary-clock orthogonality.  A Walsh-Hadamard
// transform over the chi table then yields the probability of every answer
// vector.  This is the independent engine the zero-knowledge simulator is
// verified against; it knows the full strategy, while the simulator never
// looks at it.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "qzk/history.hpp"
#include "qzk/oracle.hpp"
#include "qzk/questions.hpp"
#include "qzk/ring.hpp"

namespace qzk {

// All snapshot vectors |Phi_0..T| of one history spec, materialized once.
struct SnapshotTable {
  const HistoryStateSpec* spec = nullptr;
  std::vector<SparseState> states;  // index t = 0..T
};

SnapshotTable build_snapshot_table(const HistoryStateSpec& spec);

// Flat answer-bit indexing across players: verifier observables first
// (player-major, six per player), then one bit per prover player.
int flat_verifier_bit(int player /*1..4*/, int observable /*1..6*/);
int flat_prover_bit(int prover /*1..k*/);

// Exact distribution over answer vectors.  Only the bits of non-identity
// observables are free; every other bit is structurally zero (an identity
// observable can never answer 1 honestly).
struct AnswerDistribution {
  int provers = 0;
  std::vector<int> free_bits;  // ascending flat indices
  std::vector<Q2> probabilities;  // size 2^free_bits.size()

  // Probability of one fully specified answer vector (zero if any forced
  // bit is set).
  Q2 probability(const AnswerVector& answers) const;
  // Expand a packed assignment of the free bits into a full answer vector.
  AnswerVector answer_at(std::uint64_t packed) const;
};

// Compute the honest answer distribution for a validated question tuple.
// Throws kCapExceeded when the tuple has more than 16 non-identity
// observables (the table is dense in 2^J).
AnswerDistribution honest_distribution(const SnapshotTable& table,
                                       const QuestionTuple& tuple);

// ---------------------------------------------------------------------------
// Shared outer-code helpers (also used by the simulator and tests).

// The two columns <r|Enc(b)> of the outer-code isometry, as 16-entry
// vectors indexed by the 4-share basis.
std::array<std::vector<CQ2>, 2> outer_isometry_columns();

// Compress a 16x16 operator on the four shares of one encoded qubit to the
// exact 2x2 logical operator E^dag M E.
DenseMatrix outer_compress(const DenseMatrix& share_op);

// Compress a tensor product of single-share 2x2 operators (share 0 first).
DenseMatrix outer_compress_factors(const std::array<DenseMatrix, 4>& shares);

// Apply the flagged reflection P' = |0><1| x P^dag + |1><0| x P of one
// prover to a snapshot-layout state: P is the prover's wrapped action on
// its message-and-private wires, the flag factor acts on the prover flag.
SparseState apply_star_reflection(const HistoryStateSpec& spec, int prover,
                                  const SparseState& state);

}  // namespace qzk
