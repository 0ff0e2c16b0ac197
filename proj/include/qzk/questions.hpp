// Copyright 2026 The qzk Authors
// SPDX-License-Identifier: Apache-2.0
//
// Question and answer formats for the distributed-proof referee, and the
// honest players' measurement observables.
//
// The distributed history state is held by four verifier players and k
// prover players.  Every clock qubit and every verifier circuit wire is
// share-encoded into four qubits, one share per verifier player, so each
// verifier player's register is indexed by LOGICAL qubit: first the clock
// qubits 1..T (clock qubit c flips from 0 to 1 at timestep c), then the
// verifier circuit wires T+1..T+nv in layout order.  Prover player i holds
// its flag triple, its private register, and its message block unencoded.
//
// A question addresses every player at once:
//   - each verifier player gets six two-qubit observables with letters
//     drawn from {I, X, Z}, written against the logical index map above
//     (the player measures its own shares of the named qubits); the six
//     observables must commute pairwise;
//   - each prover player gets one symbol: STAR (apply the reflection,
//     honestly measured as the flagged reflection observable), Q<j> /
//     A<j> (sigma_X / sigma_Z on the j-th message qubit), or QF / AF
//     (sigma_X on the question / answer flag).
//
// Text form, one line:
//   PV1: X1X2,Z1Z2,I7Z5,X3Z4,Z3X4,X7I5 | PV2: ... | PV4: ... | PP1: STAR
//
// An answer is one bit per observable: six per verifier player, one per
// prover player.

#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qzk/history.hpp"

namespace qzk {

inline constexpr int kVerifierPlayers = 4;
inline constexpr int kObservablesPerVerifier = 6;
// Largest possible verifier-side logical support of one question:
// 4 players x 6 observables x 2 qubits.
inline constexpr int kVerifierSupportBound = 48;

enum class QuestionLetter { kI = 0, kX = 1, kZ = 2 };

char question_letter_name(QuestionLetter letter);

// One two-qubit verifier observable, e.g. X1X2 or I7Z5.  Indices are
// 1-based logical indices into the clock-then-wires map; the pair must name
// two distinct qubits.
struct VerifierObservable {
  QuestionLetter first_letter = QuestionLetter::kI;
  int first_qubit = 1;
  QuestionLetter second_letter = QuestionLetter::kI;
  int second_qubit = 2;

  bool is_identity() const {
    return first_letter == QuestionLetter::kI &&
           second_letter == QuestionLetter::kI;
  }
};

enum class ProverSymbol {
  kStar = 0,
  kQuestionGate = 1,   // Q<j>: sigma_X on message qubit j
  kAnswerGate = 2,     // A<j>: sigma_Z on message qubit j
  kQuestionFlagFlip = 3,  // QF: sigma_X on the question flag
  kAnswerFlagFlip = 4,    // AF: sigma_X on the answer flag
};

struct ProverQuestion {
  ProverSymbol symbol = ProverSymbol::kQuestionGate;
  int index = 1;  // 1-based message qubit, used by Q<j> / A<j> only
};

struct QuestionTuple {
  std::array<std::array<VerifierObservable, kObservablesPerVerifier>,
             kVerifierPlayers>
      verifier{};
  std::vector<ProverQuestion> prover;  // one entry per prover player
};

// One answer bit per observable, in question order.
struct AnswerVector {
  std::array<std::array<int, kObservablesPerVerifier>, kVerifierPlayers>
      verifier{};
  std::vector<int> prover;

  static AnswerVector zeros(int provers) {
    AnswerVector a;
    a.prover.assign(static_cast<std::size_t>(provers), 0);
    return a;
  }
  int total_bits() const {
    return kVerifierPlayers * kObservablesPerVerifier +
           static_cast<int>(prover.size());
  }
  bool operator==(const AnswerVector& other) const {
    return verifier == other.verifier && prover == other.prover;
  }
};

// Parse / print the one-line text form.  parse_question throws kFormat on
// malformed text; print_question emits the canonical spelling, which parses
// back to the same tuple.
QuestionTuple parse_question(const std::string& text);
std::string print_question(const QuestionTuple& tuple);

// Compact answer spelling: verifier bits then prover bits, players
// separated by '|', e.g. "010011|101000|000000|110100|1|0".
std::string print_answers(const AnswerVector& answers);

// ---------------------------------------------------------------------------
// Published register map for a history-state spec.

// Number of clock qubits (= T): clock qubit c holds 1 at time t iff c <= t.
std::size_t num_clock_qubits(const HistoryStateSpec& spec);
// Total logical index range for verifier questions: clock, then wires.
std::size_t num_logical_indices(const HistoryStateSpec& spec);
bool is_clock_index(const HistoryStateSpec& spec, int index);
// Snapshot wire behind a non-clock logical index.
int wire_of_index(const HistoryStateSpec& spec, int index);
// Value of clock qubit c (1-based) in the unary pattern for time t.
int clock_bit(int clock_index, std::size_t t);

// Shape and range validation against a concrete spec.  Throws
// kInvalidQuestion on: prover arity mismatch, logical index out of range,
// a repeated qubit inside one two-qubit label, a non-commuting verifier
// 6-tuple, or a message-qubit index beyond the prover's message register.
void validate_question(const QuestionTuple& tuple,
                       const HistoryStateSpec& spec);

// ---------------------------------------------------------------------------
// Honest measurement observables.

// A single +-1 observable resolved against the register map.  Verifier
// observables become share factors (logical qubit, share, letter); prover
// observables become direct factors on snapshot qubits.  STAR is kept
// symbolic: the flagged reflection |0><1| x P^dag + |1><0| x P is not a
// Pauli and needs the prover's action to apply; de-starred variants replace
// it by sigma_X on the prover flag.
struct ShareFactor {
  int logical = 0;  // 1-based logical index (clock or wire)
  int share = 0;    // 0-based share position = verifier player - 1
  QuestionLetter letter = QuestionLetter::kI;
};

struct HonestObservable {
  bool is_star = false;
  int star_prover = 0;      // 1-based, when is_star
  int star_flag_qubit = -1;  // snapshot qubit of the prover flag
  std::vector<ShareFactor> share_factors;
  // (snapshot qubit, X or Z) on prover-held registers.
  std::vector<std::pair<int, QuestionLetter>> direct_factors;

  bool is_identity() const {
    return !is_star && share_factors.empty() && direct_factors.empty();
  }
};

struct HonestObservableSet {
  std::array<std::array<HonestObservable, kObservablesPerVerifier>,
             kVerifierPlayers>
      verifier{};
  std::vector<HonestObservable> prover;
  // Same as `prover` except STAR |-> sigma_X on the prover flag; all-Pauli.
  std::vector<HonestObservable> destarred_prover;
};

// Resolve a validated tuple.  Identity letters contribute no factors.
HonestObservableSet honest_observables(const QuestionTuple& tuple,
                                       const HistoryStateSpec& spec);

// Product-of-projectors descriptor: one commuting factor
// (I + (-1)^bit W) / 2 per observable, in player order.  An identity
// observable with bit 1 is the zero projector (that answer bit can never
// read 1 honestly).
struct ProjectorFactor {
  HonestObservable observable;
  int bit = 0;
};

struct ProjectorProduct {
  std::vector<ProjectorFactor> factors;
};

// The pair (W(a), W~(a)): the honest measurement projector product and its
// de-starred all-Pauli companion.
std::pair<ProjectorProduct, ProjectorProduct> projectors_for(
    const QuestionTuple& tuple, const AnswerVector& answers,
    const HistoryStateSpec& spec);

}  // namespace qzk
