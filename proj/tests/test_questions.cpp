// Copyright 2026 The qzk Authors
// SPDX-License-Identifier: Apache-2.0
//
// Question formats and honest observables: text round-trips, commutation
// validation, the published register map, de-starring, and projector
// algebra materialized densely on small registers.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qzk/error.hpp"
#include "qzk/history.hpp"
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

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

struct Fixture {
  ProtocolCircuit logical;
  ProverStrategy honest;
  ProtocolCircuit robust;
  ProverStrategy wrapped;
  HistoryStateSpec spec;
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
  return f;
}

const std::string kPaperQuestion =
    "PV1: X1X2,Z1Z2,I7Z5,X3Z4,Z3X4,X7I5 | "
    "PV2: I1I2,I1I2,I1I2,I1I2,I1I2,I1I2 | "
    "PV3: I1I2,I1I2,I1I2,I1I2,I1I2,I1I2 | "
    "PV4: I1I2,I1I2,I1I2,I1I2,I1I2,I1I2 | PP1: STAR";

const CQ2 kHalf = CQ2(Q2(Rat::make(1, 2)));

// Dense 2x2 of a letter.
DenseMatrix letter_matrix(QuestionLetter l) {
  switch (l) {
    case QuestionLetter::kI: return gate_matrix(GateLabel::kI);
    case QuestionLetter::kX: return gate_matrix(GateLabel::kX);
    case QuestionLetter::kZ: return gate_matrix(GateLabel::kZ);
  }
  return {};
}

// Materialize a non-star observable densely over an explicit ordering of
// (logical, share) keys for share factors; direct factors are keyed by
// (-1, qubit).
using QubitKey = std::pair<int, int>;

DenseMatrix materialize(const HonestObservable& obs,
                        const std::vector<QubitKey>& order) {
  REQUIRE(!obs.is_star);
  std::map<QubitKey, QuestionLetter> letters;
  for (const ShareFactor& f : obs.share_factors)
    letters[{f.logical, f.share}] = f.letter;
  for (const auto& [qubit, letter] : obs.direct_factors)
    letters[{-1, qubit}] = letter;
  DenseMatrix out{CQ2(1)};
  for (const QubitKey& key : order) {
    auto it = letters.find(key);
    QuestionLetter l =
        it == letters.end() ? QuestionLetter::kI : it->second;
    out = dense_tensor(out, letter_matrix(l));
    if (it != letters.end()) letters.erase(it);
  }
  REQUIRE(letters.empty());  // order must cover the observable
  return out;
}

DenseMatrix identity_matrix(int qubits) {
  std::size_t dim = std::size_t{1} << qubits;
  DenseMatrix out(dim * dim, CQ2(0));
  for (std::size_t i = 0; i < dim; ++i) out[i * dim + i] = CQ2(1);
  return out;
}

DenseMatrix scale(const DenseMatrix& m, const CQ2& c) {
  DenseMatrix out = m;
  for (CQ2& v : out) v = v * c;
  return out;
}

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b) {
  REQUIRE(a.size() == b.size());
  DenseMatrix out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

TEST_CASE("question text round-trips through parse and print") {
  QuestionTuple q = parse_question(kPaperQuestion);
  CHECK(print_question(q) == kPaperQuestion);
  CHECK(q.prover.size() == 1);
  CHECK(q.prover[0].symbol == ProverSymbol::kStar);
  CHECK(q.verifier[0][0].first_letter == QuestionLetter::kX);
  CHECK(q.verifier[0][0].first_qubit == 1);
  CHECK(q.verifier[0][2].first_letter == QuestionLetter::kI);
  CHECK(q.verifier[0][2].first_qubit == 7);
  CHECK(q.verifier[0][2].second_letter == QuestionLetter::kZ);
  CHECK(q.verifier[0][2].second_qubit == 5);

  // Whitespace-tolerant parsing, canonical printing.
  QuestionTuple loose = parse_question(
      "PV1:  X1X2 , Z1Z2,I7Z5,X3Z4,Z3X4,X7I5|PV2: I1I2,I1I2,I1I2,I1I2,"
      "I1I2,I1I2 |PV3: I1I2,I1I2,I1I2,I1I2,I1I2,I1I2| "
      "PV4: I1I2,I1I2,I1I2,I1I2,I1I2,I1I2 |  PP1:STAR");
  CHECK(print_question(loose) == kPaperQuestion);

  // Multi-prover symbols round-trip.
  std::string multi = kPaperQuestion;
  multi += " | PP2: Q3 | PP3: A12 | PP4: QF | PP5: AF";
  QuestionTuple big = parse_question(multi);
  CHECK(big.prover.size() == 5);
  CHECK(big.prover[1].symbol == ProverSymbol::kQuestionGate);
  CHECK(big.prover[1].index == 3);
  CHECK(big.prover[2].symbol == ProverSymbol::kAnswerGate);
  CHECK(big.prover[2].index == 12);
  CHECK(big.prover[3].symbol == ProverSymbol::kQuestionFlagFlip);
  CHECK(big.prover[4].symbol == ProverSymbol::kAnswerFlagFlip);
  CHECK(print_question(big) == multi);
}

TEST_CASE("malformed question text is rejected with the section named") {
  auto bad = [](const std::string& text) {
    return expect_error(ErrorKind::kFormat,
                        [&] { parse_question(text); });
  };
  CHECK(contains(bad("PV1: X1X2"), "4 verifier sections"));
  std::string msg = bad(
      "PV1: Y1X2,Z1Z2,I1I2,I1I2,I1I2,I1I2 | PV2: I1I2,I1I2,I1I2,I1I2,"
      "I1I2,I1I2 | PV3: I1I2,I1I2,I1I2,I1I2,I1I2,I1I2 | "
      "PV4: I1I2,I1I2,I1I2,I1I2,I1I2,I1I2 | PP1: STAR");
  CHECK(contains(msg, "PV1"));
  CHECK(contains(msg, "bad Pauli letter 'Y'"));
  // Five observables instead of six.
  msg = bad(
      "PV1: X1X2,Z1Z2,I1I2,I1I2,I1I2 | PV2: I1I2,I1I2,I1I2,I1I2,I1I2,"
      "I1I2 | PV3: I1I2,I1I2,I1I2,I1I2,I1I2,I1I2 | "
      "PV4: I1I2,I1I2,I1I2,I1I2,I1I2,I1I2 | PP1: STAR");
  CHECK(contains(msg, "expected 6 observables"));
  // Sections out of order.
  msg = bad(
      "PV2: I1I2,I1I2,I1I2,I1I2,I1I2,I1I2 | PV1: I1I2,I1I2,I1I2,I1I2,"
      "I1I2,I1I2 | PV3: I1I2,I1I2,I1I2,I1I2,I1I2,I1I2 | "
      "PV4: I1I2,I1I2,I1I2,I1I2,I1I2,I1I2 | PP1: STAR");
  CHECK(contains(msg, "expected section 'PV1:'"));
  // Unknown prover symbol, missing index, trailing junk.
  std::string base =
      "PV1: I1I2,I1I2,I1I2,I1I2,I1I2,I1I2 | PV2: I1I2,I1I2,I1I2,I1I2,"
      "I1I2,I1I2 | PV3: I1I2,I1I2,I1I2,I1I2,I1I2,I1I2 | "
      "PV4: I1I2,I1I2,I1I2,I1I2,I1I2,I1I2 | PP1: ";
  CHECK(contains(bad(base + "B3"), "unknown prover symbol"));
  CHECK(contains(bad(base + "Q"), "missing message index"));
  CHECK(contains(bad(base + "Q2x"), "bad message index"));
  msg = bad(
      "PV1: X1X2y,I1I2,I1I2,I1I2,I1I2,I1I2 | PV2: I1I2,I1I2,I1I2,I1I2,"
      "I1I2,I1I2 | PV3: I1I2,I1I2,I1I2,I1I2,I1I2,I1I2 | "
      "PV4: I1I2,I1I2,I1I2,I1I2,I1I2,I1I2 | PP1: STAR");
  CHECK(contains(msg, "trailing characters"));
}

TEST_CASE("validation checks ranges, pairs, commutation, and arity") {
  Fixture f = make_fixture(StabilizerCode::trivial());
  // T = 17 and three verifier wires: logical indices 1..20.
  CHECK(num_clock_qubits(f.spec) == 17);
  CHECK(num_logical_indices(f.spec) == 20);
  CHECK(is_clock_index(f.spec, 1));
  CHECK(is_clock_index(f.spec, 17));
  CHECK(!is_clock_index(f.spec, 18));
  CHECK(wire_of_index(f.spec, 18) == f.spec.verifier_wires[0]);
  CHECK(wire_of_index(f.spec, 20) == f.spec.verifier_wires[2]);
  CHECK(clock_bit(3, 2) == 0);
  CHECK(clock_bit(3, 3) == 1);
  CHECK(clock_bit(1, 17) == 1);

  QuestionTuple good = parse_question(kPaperQuestion);
  validate_question(good, f.spec);  // the paper's example is valid

  // Anticommuting pair: X1 and Z1 on the same player's share.
  QuestionTuple anti = good;
  anti.verifier[0][0] = {QuestionLetter::kX, 1, QuestionLetter::kI, 2};
  anti.verifier[0][1] = {QuestionLetter::kZ, 1, QuestionLetter::kI, 2};
  std::string msg = expect_error(ErrorKind::kInvalidQuestion,
                                 [&] { validate_question(anti, f.spec); });
  CHECK(contains(msg, "anticommute"));

  // The same pair on DIFFERENT players is fine (disjoint registers).
  QuestionTuple split = good;
  split.verifier[0] = good.verifier[1];  // all-identity six-tuple
  split.verifier[0][0] = {QuestionLetter::kX, 1, QuestionLetter::kI, 2};
  split.verifier[1][0] = {QuestionLetter::kZ, 1, QuestionLetter::kI, 2};
  validate_question(split, f.spec);

  // Out-of-range logical index.
  QuestionTuple range = good;
  range.verifier[2][0] = {QuestionLetter::kX, 21, QuestionLetter::kI, 1};
  msg = expect_error(ErrorKind::kInvalidQuestion,
                     [&] { validate_question(range, f.spec); });
  CHECK(contains(msg, "outside the register map"));

  // A label naming the same qubit twice.
  QuestionTuple dup = good;
  dup.verifier[0][0] = {QuestionLetter::kX, 3, QuestionLetter::kX, 3};
  msg = expect_error(ErrorKind::kInvalidQuestion,
                     [&] { validate_question(dup, f.spec); });
  CHECK(contains(msg, "twice"));

  // Message index beyond the prover's register is a question error.
  QuestionTuple wide = good;
  wide.prover[0] = {ProverSymbol::kQuestionGate, 2};
  msg = expect_error(ErrorKind::kInvalidQuestion,
                     [&] { validate_question(wide, f.spec); });
  CHECK(contains(msg, "beyond the register"));
  wide.prover[0] = {ProverSymbol::kQuestionGate, 1};
  validate_question(wide, f.spec);

  // Wrong number of prover sections.
  QuestionTuple extra = good;
  extra.prover.push_back({ProverSymbol::kStar, 0});
  expect_error(ErrorKind::kInvalidQuestion,
               [&] { validate_question(extra, f.spec); });

  // On the Steane-robustified instance the message register is 7 wide.
  Fixture g = make_fixture(StabilizerCode::steane());
  QuestionTuple deep = good;
  deep.prover[0] = {ProverSymbol::kQuestionGate, 7};
  validate_question(deep, g.spec);
  deep.prover[0] = {ProverSymbol::kQuestionGate, 8};
  expect_error(ErrorKind::kInvalidQuestion,
               [&] { validate_question(deep, g.spec); });
}

TEST_CASE("honest observables resolve against the register map") {
  Fixture f = make_fixture(StabilizerCode::trivial());
  QuestionTuple q = parse_question(kPaperQuestion);
  HonestObservableSet set = honest_observables(q, f.spec);

  // X1X2 for PV1: two share factors on share 0.
  const HonestObservable& xx = set.verifier[0][0];
  REQUIRE(xx.share_factors.size() == 2);
  CHECK(xx.share_factors[0].logical == 1);
  CHECK(xx.share_factors[0].share == 0);
  CHECK(xx.share_factors[0].letter == QuestionLetter::kX);
  CHECK(xx.share_factors[1].logical == 2);
  CHECK(xx.direct_factors.empty());
  CHECK(!xx.is_identity());

  // I7Z5 keeps only the Z factor; identity letters vanish.
  const HonestObservable& iz = set.verifier[0][2];
  REQUIRE(iz.share_factors.size() == 1);
  CHECK(iz.share_factors[0].logical == 5);
  CHECK(iz.share_factors[0].letter == QuestionLetter::kZ);

  // All-identity observables are identity.
  CHECK(set.verifier[1][0].is_identity());

  // STAR stays symbolic; its de-starred companion is X on the prover flag.
  REQUIRE(set.prover.size() == 1);
  CHECK(set.prover[0].is_star);
  CHECK(set.prover[0].star_prover == 1);
  CHECK(set.prover[0].star_flag_qubit == f.spec.flag_qubits(1)[1]);
  CHECK(set.prover[0].share_factors.empty());
  const HonestObservable& tilde = set.destarred_prover[0];
  CHECK(!tilde.is_star);
  REQUIRE(tilde.direct_factors.size() == 1);
  CHECK(tilde.direct_factors[0].first == f.spec.flag_qubits(1)[1]);
  CHECK(tilde.direct_factors[0].second == QuestionLetter::kX);

  // Q1 / A1 / QF / AF resolve to message and flag qubits.
  QuestionTuple qa = q;
  qa.prover[0] = {ProverSymbol::kQuestionGate, 1};
  HonestObservableSet sq = honest_observables(qa, f.spec);
  CHECK(sq.prover[0].direct_factors[0] ==
        std::pair<int, QuestionLetter>(f.spec.message_wires(1)[0],
                                       QuestionLetter::kX));
  qa.prover[0] = {ProverSymbol::kAnswerGate, 1};
  HonestObservableSet sa = honest_observables(qa, f.spec);
  CHECK(sa.prover[0].direct_factors[0].second == QuestionLetter::kZ);
  qa.prover[0] = {ProverSymbol::kQuestionFlagFlip, 0};
  HonestObservableSet sf = honest_observables(qa, f.spec);
  CHECK(sf.prover[0].direct_factors[0].first == f.spec.flag_qubits(1)[0]);
  qa.prover[0] = {ProverSymbol::kAnswerFlagFlip, 0};
  HonestObservableSet sg = honest_observables(qa, f.spec);
  CHECK(sg.prover[0].direct_factors[0].first == f.spec.flag_qubits(1)[2]);
  // De-starring leaves non-star observables untouched.
  CHECK(sg.destarred_prover[0].direct_factors ==
        sg.prover[0].direct_factors);
}

TEST_CASE("projector products are complete families of projectors") {
  Fixture f = make_fixture(StabilizerCode::trivial());
  // Three commuting observables on logical qubits 1..4 of player PV1, plus
  // one all-identity observable: X1X2, Z3Z4, X3X4, I1I2.
  QuestionTuple q = parse_question(
      "PV1: X1X2,Z3Z4,X3X4,I1I2,I1I2,I1I2 | PV2: I1I2,I1I2,I1I2,I1I2,"
      "I1I2,I1I2 | PV3: I1I2,I1I2,I1I2,I1I2,I1I2,I1I2 | "
      "PV4: I1I2,I1I2,I1I2,I1I2,I1I2,I1I2 | PP1: Q1");
  validate_question(q, f.spec);
  HonestObservableSet set = honest_observables(q, f.spec);

  // Materialize PV1's four leading observables on (logical 1..4, share 0).
  std::vector<QubitKey> order = {{1, 0}, {2, 0}, {3, 0}, {4, 0}};
  std::array<DenseMatrix, 4> obs;
  for (int j = 0; j < 4; ++j)
    obs[static_cast<std::size_t>(j)] =
        materialize(set.verifier[0][static_cast<std::size_t>(j)], order);
  DenseMatrix eye = identity_matrix(4);

  // Observables square to I and commute.
  for (int j = 0; j < 3; ++j) {
    const DenseMatrix& w = obs[static_cast<std::size_t>(j)];
    CHECK(dense_multiply(w, w) == eye);
    for (int l = j + 1; l < 3; ++l) {
      const DenseMatrix& v = obs[static_cast<std::size_t>(l)];
      CHECK(dense_multiply(w, v) == dense_multiply(v, w));
    }
  }

  // Sum over all 16 answer patterns of the 4-factor projector product is I,
  // and each term is an exact projector.
  DenseMatrix sum(eye.size(), CQ2(0));
  for (int bits = 0; bits < 16; ++bits) {
    DenseMatrix proj = eye;
    for (int j = 0; j < 4; ++j) {
      int b = bits >> j & 1;
      DenseMatrix factor = add(
          scale(eye, kHalf),
          scale(obs[static_cast<std::size_t>(j)],
                b ? CQ2(0) - kHalf : kHalf));
      proj = dense_multiply(proj, factor);
    }
    CHECK(dense_multiply(proj, proj) == proj);
    sum = add(sum, proj);
    // Structural zero: bit 1 on the identity observable kills the term.
    if (bits >> 3 & 1) {
      for (const CQ2& v : proj) CHECK(v.is_zero());
    }
  }
  CHECK(sum == eye);

  // projectors_for pairs observables with bits in player order, and the
  // de-starred product replaces STAR by the flag Pauli.
  QuestionTuple star = q;
  star.prover[0] = {ProverSymbol::kStar, 0};
  AnswerVector answers = AnswerVector::zeros(1);
  answers.verifier[0][1] = 1;
  answers.prover[0] = 1;
  auto [w, tilde] = projectors_for(star, answers, f.spec);
  REQUIRE(w.factors.size() == 25);
  REQUIRE(tilde.factors.size() == 25);
  CHECK(w.factors[1].bit == 1);
  CHECK(w.factors[24].bit == 1);
  CHECK(w.factors[24].observable.is_star);
  CHECK(!tilde.factors[24].observable.is_star);
  CHECK(tilde.factors[24].observable.direct_factors[0].first ==
        f.spec.flag_qubits(1)[1]);
  for (int j = 0; j < 24; ++j) {
    CHECK(w.factors[static_cast<std::size_t>(j)].observable.is_star ==
          false);
  }
  AnswerVector short_answers = AnswerVector::zeros(2);
  expect_error(ErrorKind::kInvalidQuestion,
               [&] { projectors_for(star, short_answers, f.spec); });

  // Answer printing is stable.
  CHECK(print_answers(answers) == "010000|000000|000000|000000|1");
}

TEST_CASE("a single share of an encoded qubit answers an unbiased coin") {
  // Measuring sigma_Z on one share of the four-share encoding of |0> gives
  // expectation zero: both answers have probability exactly 1/2.
  const StabilizerCode& outer = StabilizerCode::outer_four();
  DenseState enc(outer.num_physical());
  for (const Gate& g : outer.encoder()) enc.apply(g);
  for (int share = 0; share < outer.num_physical(); ++share) {
    PauliOperator z = PauliOperator::parse("Z").embed(
        outer.num_physical(), {share});
    CHECK(enc.expectation(z) == CQ2(0));
  }
  // The logical operator still reads +1: Z on shares 1 and 2 together.
  PauliOperator zz = outer.canonical_logical_z();
  CHECK(enc.expectation(zz) == CQ2(1));
}
