// Copyright 2026 The qzk Authors
// SPDX-License-Identifier: Apache-2.0
//
// Honest answer distributions.  The engine under test compresses share
// operators through the outer isometry and runs a Walsh-Hadamard transform
// over correlation tables; the brute-force reference here materializes the
// outer encoding of every touched register explicitly, applies the
// measurement projectors one by one, and sums clock-pair overlaps directly.
// Hand-derived distributions pin a handful of exactly computable cases.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qzk/circuit.hpp"
#include "qzk/error.hpp"
#include "qzk/history.hpp"
#include "qzk/honest_dist.hpp"
#include "qzk/oracle.hpp"
#include "qzk/protocol.hpp"
#include "qzk/questions.hpp"
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

struct Fixture {
  ProtocolCircuit logical;
  ProverStrategy honest;
  ProtocolCircuit robust;
  ProverStrategy wrapped;
  HistoryStateSpec spec;
  SnapshotTable table;
};

Fixture make_fixture(const StabilizerCode& code) {
  Fixture f;
  f.logical = parse_circuit(
      read_file(std::string(QZK_EXAMPLES_DIR) + "/tiny.zkp"));
  f.honest = parse_strategy(
      read_file(std::string(QZK_EXAMPLES_DIR) + "/tiny.strategy"));
  f.robust = robustify(f.logical, code);
  f.wrapped = wrap_strategy(f.honest, code);
  f.spec = build_history_spec(f.robust, f.wrapped, code);
  f.table = build_snapshot_table(f.spec);
  return f;
}

const std::string kIdentSix = "I1I2,I1I2,I1I2,I1I2,I1I2,I1I2";

std::string question_text(const std::string& pv1, const std::string& pv2,
                          const std::string& pv3, const std::string& pv4,
                          const std::string& pp1) {
  return "PV1: " + pv1 + " | PV2: " + pv2 + " | PV3: " + pv3 + " | PV4: " +
         pv4 + " | PP1: " + pp1;
}

// Pad a partial observable list to six with identities.
std::string six(const std::string& lead) {
  std::string out = lead;
  int commas = 0;
  for (char c : lead) commas += c == ',';
  for (int j = commas + 1; j < 6; ++j) out += ",I1I2";
  return out;
}

// ---------------------------------------------------------------------------
// Brute-force reference: encode every touched logical qubit explicitly.

struct BruteEngine {
  const HistoryStateSpec* spec = nullptr;
  const SnapshotTable* table = nullptr;
  std::vector<int> touched;  // ascending logical indices with share factors
  std::vector<const HonestObservable*> active;  // ascending flat order
  std::vector<int> active_flat;
  mutable std::vector<std::optional<SparseState>> raw;  // lazily built

  int blocks() const { return static_cast<int>(touched.size()); }
  int offset() const { return 4 * blocks(); }
  int total() const { return offset() + spec->total_qubits; }

  int block_of(int logical) const {
    for (int b = 0; b < blocks(); ++b)
      if (touched[static_cast<std::size_t>(b)] == logical) return b;
    FAIL("logical qubit not touched");
    return -1;
  }

  // |unary-clock bits, wire bits> outer-encoded per touched qubit, tensored
  // with the remaining snapshot registers.
  const SparseState& extended(std::size_t t) const {
    auto& slot = raw[t];
    if (slot.has_value()) return *slot;
    const StabilizerCode& outer = StabilizerCode::outer_four();
    int n = spec->total_qubits;
    SparseState out = SparseState::zero_weight(total());
    for (const auto& [basis, amp] : table->states[t].amplitudes()) {
      std::uint64_t ext = 0;
      for (int b = 0; b < blocks(); ++b) {
        int logical = touched[static_cast<std::size_t>(b)];
        int bit;
        if (static_cast<std::size_t>(logical) <= spec->T) {
          bit = clock_bit(logical, t);
        } else {
          int wire = wire_of_index(*spec, logical);
          bit = basis >> (n - 1 - wire) & 1;
        }
        if (bit) {
          int pos = b * 4 + outer.input_qubit();
          ext |= std::uint64_t{1} << (total() - 1 - pos);
        }
      }
      for (int q = 0; q < n; ++q) {
        if (!(basis >> (n - 1 - q) & 1)) continue;
        bool is_touched_wire = false;
        for (int logical : touched)
          if (static_cast<std::size_t>(logical) > spec->T &&
              wire_of_index(*spec, logical) == q)
            is_touched_wire = true;
        if (is_touched_wire) continue;  // moved into its block
        ext |= std::uint64_t{1} << (total() - 1 - (offset() + q));
      }
      out.set_amplitude(ext, amp);
    }
    for (int b = 0; b < blocks(); ++b) {
      std::vector<int> map(4);
      for (int s = 0; s < 4; ++s) map[static_cast<std::size_t>(s)] = b * 4 + s;
      for (const Gate& g : outer.encoder()) out.apply(remap_gate(g, map));
    }
    slot = std::move(out);
    return *slot;
  }

  SparseState apply_observable(const HonestObservable& obs,
                               const SparseState& state) const {
    if (obs.is_star) {
      // Reimplementation of the flagged reflection for this layout.
      int prover = obs.star_prover;
      std::vector<int> local;
      for (int w : spec->message_wires(prover))
        local.push_back(offset() + w);
      for (int q : spec->private_qubits(prover))
        local.push_back(offset() + q);
      int flag = offset() + spec->flag_qubits(prover)[1];
      const ProverAction& action =
          spec->strategy->actions[static_cast<std::size_t>(prover - 1)][0];
      std::uint64_t mask = std::uint64_t{1} << (total() - 1 - flag);
      SparseState lo = SparseState::zero_weight(total());
      SparseState hi = SparseState::zero_weight(total());
      for (const auto& [basis, amp] : state.amplitudes())
        (basis & mask ? hi : lo).set_amplitude(basis, amp);
      if (!action.matrix.empty()) {
        lo.apply_matrix(local, action.matrix);
        hi.apply_matrix(local, dense_adjoint(action.matrix));
      } else {
        // The gate vocabulary is involutive, so the reversed sequence is
        // the adjoint.
        for (const Gate& g : action.gates) lo.apply(remap_gate(g, local));
        for (auto it = action.gates.rbegin(); it != action.gates.rend();
             ++it)
          hi.apply(remap_gate(*it, local));
      }
      Gate flip(GateLabel::kX, {flag});
      lo.apply(flip);
      hi.apply(flip);
      SparseState out = SparseState::zero_weight(total());
      for (const auto& [basis, amp] : lo.amplitudes())
        out.set_amplitude(basis, amp);
      for (const auto& [basis, amp] : hi.amplitudes())
        out.set_amplitude(basis, out.amplitude(basis) + amp);
      return out;
    }
    SparseState out = state;
    for (const ShareFactor& f : obs.share_factors) {
      int pos = block_of(f.logical) * 4 + f.share;
      out.apply(Gate(f.letter == QuestionLetter::kX ? GateLabel::kX
                                                    : GateLabel::kZ,
                     {pos}));
    }
    for (const auto& [qubit, letter] : obs.direct_factors)
      out.apply(Gate(letter == QuestionLetter::kX ? GateLabel::kX
                                                  : GateLabel::kZ,
                     {offset() + qubit}));
    return out;
  }

  SparseState projector(const HonestObservable& obs, int bit,
                        const SparseState& state) const {
    SparseState moved = apply_observable(obs, state);
    CQ2 half(Q2(Rat::make(1, 2)));
    CQ2 sign = bit ? CQ2(0) - half : half;
    SparseState out = SparseState::zero_weight(total());
    for (const auto& [basis, amp] : state.amplitudes())
      out.set_amplitude(basis, amp * half);
    for (const auto& [basis, amp] : moved.amplitudes())
      out.set_amplitude(basis, out.amplitude(basis) + amp * sign);
    return out;
  }

  bool unary_agree_off_touched(std::size_t bra, std::size_t ket) const {
    std::size_t lo = std::min(bra, ket), hi = std::max(bra, ket);
    for (std::size_t c = lo + 1; c <= hi; ++c) {
      bool in = false;
      for (int logical : touched)
        if (static_cast<std::size_t>(logical) == c &&
            static_cast<std::size_t>(logical) <= spec->T)
          in = true;
      if (!in) return false;
    }
    return true;
  }

  Q2 alpha(const AnswerVector& answers) const {
    CQ2 totalv(0);
    for (std::size_t ket_t = 0; ket_t <= spec->T; ++ket_t) {
      std::vector<std::size_t> bras;
      for (std::size_t bra = 0; bra <= spec->T; ++bra)
        if (unary_agree_off_touched(bra, ket_t)) bras.push_back(bra);
      if (bras.empty()) continue;
      SparseState ket = extended(ket_t);
      for (std::size_t j = 0; j < active.size(); ++j) {
        int flat = active_flat[j];
        int bit;
        if (flat < kVerifierPlayers * kObservablesPerVerifier) {
          bit = answers.verifier[static_cast<std::size_t>(flat) / 6]
                                [static_cast<std::size_t>(flat) % 6];
        } else {
          bit = answers.prover[static_cast<std::size_t>(
              flat - kVerifierPlayers * kObservablesPerVerifier)];
        }
        ket = projector(*active[j], bit, ket);
      }
      for (std::size_t bra : bras)
        totalv = totalv + inner_product(extended(bra), ket);
    }
    totalv = totalv *
             CQ2(Q2(Rat::make(1, static_cast<std::int64_t>(spec->T) + 1)));
    REQUIRE(totalv.is_real());
    return totalv.re();
  }
};

BruteEngine make_brute(const Fixture& f, const HonestObservableSet& set) {
  BruteEngine b;
  b.spec = &f.spec;
  b.table = &f.table;
  for (int r = 1; r <= kVerifierPlayers; ++r)
    for (int j = 1; j <= kObservablesPerVerifier; ++j) {
      const HonestObservable& obs =
          set.verifier[static_cast<std::size_t>(r - 1)]
                      [static_cast<std::size_t>(j - 1)];
      if (obs.is_identity()) continue;
      b.active.push_back(&obs);
      b.active_flat.push_back(flat_verifier_bit(r, j));
      for (const ShareFactor& fct : obs.share_factors) {
        bool seen = false;
        for (int t : b.touched) seen |= t == fct.logical;
        if (!seen) b.touched.push_back(fct.logical);
      }
    }
  for (std::size_t i = 0; i < set.prover.size(); ++i) {
    if (set.prover[i].is_identity()) continue;
    b.active.push_back(&set.prover[i]);
    b.active_flat.push_back(flat_prover_bit(static_cast<int>(i) + 1));
  }
  std::sort(b.touched.begin(), b.touched.end());
  b.raw.resize(f.spec.T + 1);
  return b;
}

void check_against_brute(const Fixture& f, const std::string& text) {
  QuestionTuple q = parse_question(text);
  AnswerDistribution dist = honest_distribution(f.table, q);
  HonestObservableSet set = honest_observables(q, f.spec);
  BruteEngine brute = make_brute(f, set);
  REQUIRE(brute.active.size() == dist.free_bits.size());
  Q2 sum(Rat(0));
  for (std::uint64_t packed = 0; packed < dist.probabilities.size();
       ++packed) {
    AnswerVector answers = dist.answer_at(packed);
    Q2 expected = brute.alpha(answers);
    CHECK(dist.probabilities[packed] == expected);
    CHECK(dist.probability(answers) == expected);
    sum = sum + expected;
  }
  CHECK(sum == Q2(Rat(1)));
}

}  // namespace

// ---------------------------------------------------------------------------

TEST_CASE("all-identity questions are answered all-zero") {
  Fixture f = make_fixture(StabilizerCode::trivial());
  QuestionTuple q = parse_question(
      question_text(kIdentSix, kIdentSix, kIdentSix, kIdentSix, "Q1"));
  // Q1 is active; everything else identity.
  AnswerDistribution dist = honest_distribution(f.table, q);
  CHECK(dist.free_bits == std::vector<int>{flat_prover_bit(1)});
  CHECK(dist.probabilities.size() == 2);

  // Forced bits: setting any identity-observable bit gives probability 0.
  AnswerVector forced = AnswerVector::zeros(1);
  forced.verifier[2][4] = 1;
  CHECK(dist.probability(forced) == Q2(Rat(0)));

  // Flat indexing helpers.
  CHECK(flat_verifier_bit(1, 1) == 0);
  CHECK(flat_verifier_bit(4, 6) == 23);
  CHECK(flat_prover_bit(1) == 24);
}

TEST_CASE("the star answer is an unbiased coin") {
  Fixture f = make_fixture(StabilizerCode::trivial());
  QuestionTuple q = parse_question(
      question_text(kIdentSix, kIdentSix, kIdentSix, kIdentSix, "STAR"));
  AnswerDistribution dist = honest_distribution(f.table, q);
  REQUIRE(dist.probabilities.size() == 2);
  CHECK(dist.probabilities[0] == Q2(Rat::make(1, 2)));
  CHECK(dist.probabilities[1] == Q2(Rat::make(1, 2)));
  CHECK(dist.answer_at(1).prover[0] == 1);

  // Same for the question-flag and answer-flag measurements.
  for (const char* symbol : {"QF", "AF"}) {
    QuestionTuple fq = parse_question(
        question_text(kIdentSix, kIdentSix, kIdentSix, kIdentSix, symbol));
    AnswerDistribution fd = honest_distribution(f.table, fq);
    CHECK(fd.probabilities[0] == Q2(Rat::make(1, 2)));
    CHECK(fd.probabilities[1] == Q2(Rat::make(1, 2)));
  }
}

TEST_CASE("two shares of one clock qubit are perfectly anticorrelated") {
  // PV1 and PV2 both measure Z on their share of clock qubit 3.  The pair
  // reconstructs logical Z on that clock qubit: chi = (3 - 15)/18 = -2/3,
  // single-share marginals are unbiased, so the joint table is
  //   alpha(00) = alpha(11) = (1 - 2/3)/4 = 1/12,
  //   alpha(01) = alpha(10) = (1 + 2/3)/4 = 5/12.
  Fixture f = make_fixture(StabilizerCode::trivial());
  QuestionTuple q = parse_question(question_text(
      six("Z3I4"), six("Z3I4"), kIdentSix, kIdentSix, "Q1"));
  AnswerDistribution dist = honest_distribution(f.table, q);
  REQUIRE(dist.free_bits.size() == 3);  // two Z's and Q1
  // Q1's marginal is independent here; sum it out by adding packed pairs.
  auto joint = [&](int b1, int b2) {
    Q2 total(Rat(0));
    for (int bq : {0, 1}) {
      std::uint64_t packed = static_cast<std::uint64_t>(b1) |
                             static_cast<std::uint64_t>(b2) << 1 |
                             static_cast<std::uint64_t>(bq) << 2;
      total = total + dist.probabilities[packed];
    }
    return total;
  };
  CHECK(joint(0, 0) == Q2(Rat::make(1, 12)));
  CHECK(joint(1, 1) == Q2(Rat::make(1, 12)));
  CHECK(joint(0, 1) == Q2(Rat::make(5, 12)));
  CHECK(joint(1, 0) == Q2(Rat::make(5, 12)));
}

TEST_CASE("clock cross terms show up through paired X shares") {
  // The outer code's logical X is supported on shares 0 and 3, so players 1
  // and 4 measure X on their shares of clock qubits 2 and 3.  The pair
  // reconstructs logical X on both clock qubits, whose only matrix elements
  // connect times 1 and 3; the snapshots at t=1 and t=3 coincide (the idle
  // and the CNOT on zeroed wires do nothing), so chi = 2/18 = 1/9:
  //   alpha(00) = alpha(11) = 5/18, alpha(01) = alpha(10) = 2/9.
  Fixture f = make_fixture(StabilizerCode::trivial());
  QuestionTuple q = parse_question(question_text(
      six("X2X3"), kIdentSix, kIdentSix, six("X2X3"), "Q1"));
  AnswerDistribution dist = honest_distribution(f.table, q);
  REQUIRE(dist.free_bits.size() == 3);
  auto joint = [&](int b1, int b4) {
    Q2 total(Rat(0));
    for (int bq : {0, 1}) {
      std::uint64_t packed = static_cast<std::uint64_t>(b1) |
                             static_cast<std::uint64_t>(b4) << 1 |
                             static_cast<std::uint64_t>(bq) << 2;
      total = total + dist.probabilities[packed];
    }
    return total;
  };
  CHECK(joint(0, 0) == Q2(Rat::make(5, 18)));
  CHECK(joint(1, 1) == Q2(Rat::make(5, 18)));
  CHECK(joint(0, 1) == Q2(Rat::make(2, 9)));
  CHECK(joint(1, 0) == Q2(Rat::make(2, 9)));

  // Shares 0 and 1 of X anticommute with a code generator, so the same
  // question on players 1 and 2 compresses to zero: the table collapses to
  // the product of unbiased coins.
  QuestionTuple dead = parse_question(question_text(
      six("X2X3"), six("X2X3"), kIdentSix, kIdentSix, "Q1"));
  AnswerDistribution flat = honest_distribution(f.table, dead);
  for (const Q2& p : flat.probabilities) CHECK(p == Q2(Rat::make(1, 8)));
}

TEST_CASE("the reflection timestep carries a three-way cross term") {
  // Players 1 and 4 reconstruct logical X on clock qubit 9 (the reflection
  // timestep), and the prover measures the flagged reflection.  The only
  // surviving correlation subset is the triple: the reflection maps the
  // snapshot at t=8 exactly onto the one at t=9 and back, so
  // chi = 2/18 = 1/9 and
  //   alpha(even parity) = 5/36, alpha(odd parity) = 1/9.
  Fixture f = make_fixture(StabilizerCode::trivial());
  QuestionTuple q = parse_question(question_text(
      six("X9I1"), kIdentSix, kIdentSix, six("X9I1"), "STAR"));
  AnswerDistribution dist = honest_distribution(f.table, q);
  REQUIRE(dist.free_bits.size() == 3);
  for (std::uint64_t packed = 0; packed < 8; ++packed) {
    int parity = __builtin_popcountll(packed) & 1;
    CHECK(dist.probabilities[packed] ==
          (parity ? Q2(Rat::make(1, 9)) : Q2(Rat::make(5, 36))));
  }
}

TEST_CASE("paired Z shares of the output wire read the acceptance bit") {
  // Logical Z on the output wire: +1 while the output rests at |0> for
  // t <= 15, -1 once the final CNOT writes the answer (t = 16, 17):
  // chi = (16 - 2)/18 = 7/9.
  Fixture f = make_fixture(StabilizerCode::trivial());
  QuestionTuple q = parse_question(question_text(
      six("Z18I1"), six("Z18I1"), kIdentSix, kIdentSix, "Q1"));
  REQUIRE(wire_of_index(f.spec, 18) == f.robust.output_qubit);
  AnswerDistribution dist = honest_distribution(f.table, q);
  auto joint = [&](int b1, int b2) {
    Q2 total(Rat(0));
    for (int bq : {0, 1}) {
      std::uint64_t packed = static_cast<std::uint64_t>(b1) |
                             static_cast<std::uint64_t>(b2) << 1 |
                             static_cast<std::uint64_t>(bq) << 2;
      total = total + dist.probabilities[packed];
    }
    return total;
  };
  CHECK(joint(0, 0) == Q2(Rat::make(4, 9)));
  CHECK(joint(1, 1) == Q2(Rat::make(4, 9)));
  CHECK(joint(0, 1) == Q2(Rat::make(1, 18)));
  CHECK(joint(1, 0) == Q2(Rat::make(1, 18)));
}

TEST_CASE("the engine matches brute-force projector evaluation") {
  Fixture f = make_fixture(StabilizerCode::trivial());
  // Overlapping observables on one player (their product is a Y-type
  // Pauli), a second player's correlated pair, and the star reflection.
  check_against_brute(
      f, question_text(six("X2X3,Z2Z3"), six("Z2Z3"), kIdentSix, kIdentSix,
                       "STAR"));
  // Clock Z, single-share X's on wires, and a question-flag flip.
  check_against_brute(
      f, question_text(six("Z1I2"), kIdentSix, six("X18X19"), kIdentSix,
                       "QF"));
  // Clock cross terms with a message-register Z.
  check_against_brute(
      f, question_text(six("X2X3"), six("X2X3"), kIdentSix, kIdentSix,
                       "A1"));
  // Mixed clock/wire observable spanning both kinds of logical qubits.
  check_against_brute(
      f, question_text(six("Z3Z18"), six("Z3Z18"), kIdentSix, kIdentSix,
                       "Q1"));
  // Answer-flag flip with a clock X pair that dies on flag orthogonality.
  check_against_brute(
      f, question_text(six("X9X10"), kIdentSix, kIdentSix, six("X9X10"),
                       "AF"));
  // The reflection cross term, through both routes.
  check_against_brute(
      f, question_text(six("X9I1"), kIdentSix, kIdentSix, six("X9I1"),
                       "STAR"));
}

TEST_CASE("the encoded instance agrees with brute force and the formula") {
  Fixture f = make_fixture(StabilizerCode::steane());
  // Clock-3 logical Z on the 146-step instance:
  // chi = (3 - 143)/146 = -70/73.
  QuestionTuple q = parse_question(question_text(
      six("Z3I4"), six("Z3I4"), kIdentSix, kIdentSix, "Q1"));
  AnswerDistribution dist = honest_distribution(f.table, q);
  auto joint = [&](int b1, int b2) {
    Q2 total(Rat(0));
    for (int bq : {0, 1}) {
      std::uint64_t packed = static_cast<std::uint64_t>(b1) |
                             static_cast<std::uint64_t>(b2) << 1 |
                             static_cast<std::uint64_t>(bq) << 2;
      total = total + dist.probabilities[packed];
    }
    return total;
  };
  CHECK(joint(0, 0) == Q2(Rat::make(3, 292)));
  CHECK(joint(1, 1) == Q2(Rat::make(3, 292)));
  CHECK(joint(0, 1) == Q2(Rat::make(143, 292)));
  CHECK(joint(1, 0) == Q2(Rat::make(143, 292)));

  // Full dual-route check on the encoded instance.
  check_against_brute(f, question_text(six("Z2I3"), six("Z2I3"), kIdentSix,
                                       kIdentSix, "Q1"));
}

TEST_CASE("oversized and invalid questions are rejected") {
  Fixture f = make_fixture(StabilizerCode::trivial());
  // Anticommuting tuple propagates the question error.
  QuestionTuple bad = parse_question(question_text(
      six("X1I2,Z1I2"), kIdentSix, kIdentSix, kIdentSix, "Q1"));
  expect_error(ErrorKind::kInvalidQuestion,
               [&] { honest_distribution(f.table, bad); });
  // Eighteen non-identity observables exceed the table cap.
  std::string busy = six("X1X2,X1X2,X1X2,X1X2,X1X2,X1X2");
  QuestionTuple big = parse_question(
      question_text(busy, busy, busy, kIdentSix, "Q1"));
  expect_error(ErrorKind::kCapExceeded,
               [&] { honest_distribution(f.table, big); });
}
