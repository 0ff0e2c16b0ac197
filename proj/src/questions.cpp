// Copyright 2026 The qzk Authors
// SPDX-License-Identifier: Apache-2.0

#include "qzk/questions.hpp"

#include <cctype>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qzk/error.hpp"

namespace qzk {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void section_fail(const std::string& name,
                               const std::string& what) {
  fail(ErrorKind::kFormat, "section " + name + ": " + what);
}

QuestionLetter letter_from_char(char c, const std::string& section) {
  switch (c) {
    case 'I': return QuestionLetter::kI;
    case 'X': return QuestionLetter::kX;
    case 'Z': return QuestionLetter::kZ;
    default:
      section_fail(section, std::string("bad Pauli letter '") + c +
                                "' (expected I, X, or Z)");
  }
}

// Parses <letter><digits> starting at `pos`; advances pos.
std::pair<QuestionLetter, int> parse_factor(const std::string& item,
                                            std::size_t& pos,
                                            const std::string& section) {
  if (pos >= item.size())
    section_fail(section, "truncated observable '" + item + "'");
  QuestionLetter letter = letter_from_char(item[pos], section);
  ++pos;
  std::size_t start = pos;
  while (pos < item.size() &&
         std::isdigit(static_cast<unsigned char>(item[pos])))
    ++pos;
  if (pos == start)
    section_fail(section,
                 "missing qubit index in observable '" + item + "'");
  long value = std::stol(item.substr(start, pos - start));
  if (value <= 0 || value > 1'000'000)
    section_fail(section, "qubit index out of range in '" + item + "'");
  return {letter, static_cast<int>(value)};
}

VerifierObservable parse_observable(const std::string& raw,
                                    const std::string& section) {
  std::string item = trim(raw);
  std::size_t pos = 0;
  VerifierObservable obs;
  auto [l1, q1] = parse_factor(item, pos, section);
  auto [l2, q2] = parse_factor(item, pos, section);
  if (pos != item.size())
    section_fail(section,
                 "trailing characters in observable '" + item + "'");
  obs.first_letter = l1;
  obs.first_qubit = q1;
  obs.second_letter = l2;
  obs.second_qubit = q2;
  return obs;
}

ProverQuestion parse_prover_symbol(const std::string& raw,
                                   const std::string& section) {
  std::string body = trim(raw);
  ProverQuestion q;
  if (body == "STAR") {
    q.symbol = ProverSymbol::kStar;
    return q;
  }
  if (body == "QF") {
    q.symbol = ProverSymbol::kQuestionFlagFlip;
    return q;
  }
  if (body == "AF") {
    q.symbol = ProverSymbol::kAnswerFlagFlip;
    return q;
  }
  if (!body.empty() && (body[0] == 'Q' || body[0] == 'A')) {
    std::string digits = body.substr(1);
    if (digits.empty())
      section_fail(section, "missing message index in '" + body + "'");
    for (char c : digits)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        section_fail(section, "bad message index in '" + body + "'");
    long value = std::stol(digits);
    if (value <= 0 || value > 1'000'000)
      section_fail(section, "message index out of range in '" + body + "'");
    q.symbol = body[0] == 'Q' ? ProverSymbol::kQuestionGate
                              : ProverSymbol::kAnswerGate;
    q.index = static_cast<int>(value);
    return q;
  }
  section_fail(section, "unknown prover symbol '" + body + "'");
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == sep) {
      out.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

// Do two observables of the same verifier player commute?  Each acts on the
// player's shares of its named logical qubits, so overlap happens exactly on
// equal indices; X against Z on the same share anticommutes.
bool letters_anticommute(QuestionLetter a, QuestionLetter b) {
  return (a == QuestionLetter::kX && b == QuestionLetter::kZ) ||
         (a == QuestionLetter::kZ && b == QuestionLetter::kX);
}

bool observables_commute(const VerifierObservable& a,
                         const VerifierObservable& b) {
  int parity = 0;
  const std::pair<QuestionLetter, int> fa[2] = {
      {a.first_letter, a.first_qubit}, {a.second_letter, a.second_qubit}};
  const std::pair<QuestionLetter, int> fb[2] = {
      {b.first_letter, b.first_qubit}, {b.second_letter, b.second_qubit}};
  for (const auto& [la, qa] : fa)
    for (const auto& [lb, qb] : fb)
      if (qa == qb && letters_anticommute(la, lb)) parity ^= 1;
  return parity == 0;
}

std::string player_name(bool is_verifier, int index) {
  return (is_verifier ? "PV" : "PP") + std::to_string(index);
}

}  // namespace

char question_letter_name(QuestionLetter letter) {
  switch (letter) {
    case QuestionLetter::kI: return 'I';
    case QuestionLetter::kX: return 'X';
    case QuestionLetter::kZ: return 'Z';
  }
  fail(ErrorKind::kInternal, "bad QuestionLetter");
}

QuestionTuple parse_question(const std::string& text) {
  std::vector<std::string> sections = split(text, '|');
  if (sections.size() < kVerifierPlayers + 1)
    fail(ErrorKind::kFormat,
         "a question needs 4 verifier sections and at least one prover "
         "section");
  QuestionTuple tuple;
  for (std::size_t s = 0; s < sections.size(); ++s) {
    std::string section = trim(sections[s]);
    bool is_verifier = s < kVerifierPlayers;
    int player = is_verifier ? static_cast<int>(s) + 1
                             : static_cast<int>(s) - kVerifierPlayers + 1;
    std::string name = player_name(is_verifier, player);
    std::string prefix = name + ":";
    if (section.compare(0, prefix.size(), prefix) != 0)
      fail(ErrorKind::kFormat, "expected section '" + name +
                                   ":' at position " + std::to_string(s + 1));
    std::string body = trim(section.substr(prefix.size()));
    if (is_verifier) {
      std::vector<std::string> items = split(body, ',');
      if (items.size() != kObservablesPerVerifier)
        section_fail(name, "expected 6 observables, got " +
                               std::to_string(items.size()));
      for (int j = 0; j < kObservablesPerVerifier; ++j)
        tuple.verifier[s][static_cast<std::size_t>(j)] =
            parse_observable(items[static_cast<std::size_t>(j)], name);
    } else {
      tuple.prover.push_back(parse_prover_symbol(body, name));
    }
  }
  return tuple;
}

std::string print_question(const QuestionTuple& tuple) {
  std::ostringstream out;
  for (int r = 0; r < kVerifierPlayers; ++r) {
    if (r > 0) out << " | ";
    out << "PV" << r + 1 << ": ";
    for (int j = 0; j < kObservablesPerVerifier; ++j) {
      const VerifierObservable& obs =
          tuple.verifier[static_cast<std::size_t>(r)]
                        [static_cast<std::size_t>(j)];
      if (j > 0) out << ",";
      out << question_letter_name(obs.first_letter) << obs.first_qubit
          << question_letter_name(obs.second_letter) << obs.second_qubit;
    }
  }
  for (std::size_t i = 0; i < tuple.prover.size(); ++i) {
    out << " | PP" << i + 1 << ": ";
    const ProverQuestion& q = tuple.prover[i];
    switch (q.symbol) {
      case ProverSymbol::kStar: out << "STAR"; break;
      case ProverSymbol::kQuestionGate: out << "Q" << q.index; break;
      case ProverSymbol::kAnswerGate: out << "A" << q.index; break;
      case ProverSymbol::kQuestionFlagFlip: out << "QF"; break;
      case ProverSymbol::kAnswerFlagFlip: out << "AF"; break;
    }
  }
  return out.str();
}

std::string print_answers(const AnswerVector& answers) {
  std::ostringstream out;
  for (int r = 0; r < kVerifierPlayers; ++r) {
    if (r > 0) out << "|";
    for (int j = 0; j < kObservablesPerVerifier; ++j)
      out << answers.verifier[static_cast<std::size_t>(r)]
                             [static_cast<std::size_t>(j)];
  }
  for (int bit : answers.prover) out << "|" << bit;
  return out.str();
}

std::size_t num_clock_qubits(const HistoryStateSpec& spec) { return spec.T; }

std::size_t num_logical_indices(const HistoryStateSpec& spec) {
  return spec.T + spec.verifier_wires.size();
}

bool is_clock_index(const HistoryStateSpec& spec, int index) {
  check_internal(index >= 1 && static_cast<std::size_t>(index) <=
                                   num_logical_indices(spec),
                 "logical index out of range");
  return static_cast<std::size_t>(index) <= spec.T;
}

int wire_of_index(const HistoryStateSpec& spec, int index) {
  check_internal(!is_clock_index(spec, index),
                 "clock index has no snapshot wire");
  return spec.verifier_wires[static_cast<std::size_t>(index) - spec.T - 1];
}

int clock_bit(int clock_index, std::size_t t) {
  check_internal(clock_index >= 1, "clock index is 1-based");
  return static_cast<std::size_t>(clock_index) <= t ? 1 : 0;
}

void validate_question(const QuestionTuple& tuple,
                       const HistoryStateSpec& spec) {
  if (tuple.prover.size() !=
      static_cast<std::size_t>(spec.circuit->provers))
    fail(ErrorKind::kInvalidQuestion,
         "question addresses " + std::to_string(tuple.prover.size()) +
             " prover players, the protocol has " +
             std::to_string(spec.circuit->provers));
  std::size_t range = num_logical_indices(spec);
  for (int r = 0; r < kVerifierPlayers; ++r) {
    const auto& six = tuple.verifier[static_cast<std::size_t>(r)];
    for (int j = 0; j < kObservablesPerVerifier; ++j) {
      const VerifierObservable& obs = six[static_cast<std::size_t>(j)];
      for (int q : {obs.first_qubit, obs.second_qubit}) {
        if (q < 1 || static_cast<std::size_t>(q) > range)
          fail(ErrorKind::kInvalidQuestion,
               "PV" + std::to_string(r + 1) + " qubit index " +
                   std::to_string(q) + " outside the register map (1.." +
                   std::to_string(range) + ")");
      }
      if (obs.first_qubit == obs.second_qubit)
        fail(ErrorKind::kInvalidQuestion,
             "PV" + std::to_string(r + 1) +
                 " observable names qubit " +
                 std::to_string(obs.first_qubit) + " twice");
    }
    for (int j = 0; j < kObservablesPerVerifier; ++j)
      for (int l = j + 1; l < kObservablesPerVerifier; ++l)
        if (!observables_commute(six[static_cast<std::size_t>(j)],
                                 six[static_cast<std::size_t>(l)]))
          fail(ErrorKind::kInvalidQuestion,
               "PV" + std::to_string(r + 1) + " observables " +
                   std::to_string(j + 1) + " and " + std::to_string(l + 1) +
                   " anticommute");
  }
  for (std::size_t i = 0; i < tuple.prover.size(); ++i) {
    const ProverQuestion& q = tuple.prover[i];
    if (q.symbol == ProverSymbol::kQuestionGate ||
        q.symbol == ProverSymbol::kAnswerGate) {
      std::size_t width =
          spec.message_wires(static_cast<int>(i) + 1).size();
      if (q.index < 1 || static_cast<std::size_t>(q.index) > width)
        fail(ErrorKind::kInvalidQuestion,
             "PP" + std::to_string(i + 1) + " message index " +
                 std::to_string(q.index) + " beyond the register (width " +
                 std::to_string(width) + ")");
    }
  }
}

HonestObservableSet honest_observables(const QuestionTuple& tuple,
                                       const HistoryStateSpec& spec) {
  validate_question(tuple, spec);
  HonestObservableSet set;
  for (int r = 0; r < kVerifierPlayers; ++r) {
    for (int j = 0; j < kObservablesPerVerifier; ++j) {
      const VerifierObservable& obs =
          tuple.verifier[static_cast<std::size_t>(r)]
                        [static_cast<std::size_t>(j)];
      HonestObservable& out = set.verifier[static_cast<std::size_t>(r)]
                                          [static_cast<std::size_t>(j)];
      if (obs.first_letter != QuestionLetter::kI)
        out.share_factors.push_back(
            ShareFactor{obs.first_qubit, r, obs.first_letter});
      if (obs.second_letter != QuestionLetter::kI)
        out.share_factors.push_back(
            ShareFactor{obs.second_qubit, r, obs.second_letter});
    }
  }
  for (std::size_t i = 0; i < tuple.prover.size(); ++i) {
    int prover = static_cast<int>(i) + 1;
    const ProverQuestion& q = tuple.prover[i];
    std::array<int, 3> flags = spec.flag_qubits(prover);
    HonestObservable obs;
    HonestObservable destarred;
    switch (q.symbol) {
      case ProverSymbol::kStar:
        obs.is_star = true;
        obs.star_prover = prover;
        obs.star_flag_qubit = flags[1];
        destarred.direct_factors.emplace_back(flags[1], QuestionLetter::kX);
        break;
      case ProverSymbol::kQuestionGate:
        obs.direct_factors.emplace_back(
            spec.message_wires(prover)[static_cast<std::size_t>(q.index) -
                                       1],
            QuestionLetter::kX);
        destarred = obs;
        break;
      case ProverSymbol::kAnswerGate:
        obs.direct_factors.emplace_back(
            spec.message_wires(prover)[static_cast<std::size_t>(q.index) -
                                       1],
            QuestionLetter::kZ);
        destarred = obs;
        break;
      case ProverSymbol::kQuestionFlagFlip:
        obs.direct_factors.emplace_back(flags[0], QuestionLetter::kX);
        destarred = obs;
        break;
      case ProverSymbol::kAnswerFlagFlip:
        obs.direct_factors.emplace_back(flags[2], QuestionLetter::kX);
        destarred = obs;
        break;
    }
    set.prover.push_back(std::move(obs));
    set.destarred_prover.push_back(std::move(destarred));
  }
  return set;
}

std::pair<ProjectorProduct, ProjectorProduct> projectors_for(
    const QuestionTuple& tuple, const AnswerVector& answers,
    const HistoryStateSpec& spec) {
  if (answers.prover.size() != tuple.prover.size())
    fail(ErrorKind::kInvalidQuestion,
         "answer arity does not match the question");
  HonestObservableSet set = honest_observables(tuple, spec);
  ProjectorProduct w;
  ProjectorProduct destarred;
  for (int r = 0; r < kVerifierPlayers; ++r) {
    for (int j = 0; j < kObservablesPerVerifier; ++j) {
      ProjectorFactor f;
      f.observable = set.verifier[static_cast<std::size_t>(r)]
                                 [static_cast<std::size_t>(j)];
      f.bit = answers.verifier[static_cast<std::size_t>(r)]
                              [static_cast<std::size_t>(j)];
      w.factors.push_back(f);
      destarred.factors.push_back(std::move(f));
    }
  }
  for (std::size_t i = 0; i < tuple.prover.size(); ++i) {
    ProjectorFactor f;
    f.observable = set.prover[i];
    f.bit = answers.prover[i];
    w.factors.push_back(std::move(f));
    ProjectorFactor g;
    g.observable = set.destarred_prover[i];
    g.bit = answers.prover[i];
    destarred.factors.push_back(std::move(g));
  }
  return {std::move(w), std::move(destarred)};
}

}  // namespace qzk
