// Copyright 2026 The qzk Authors
// SPDX-License-Identifier: Apache-2.0

#include "qzk/protocol.hpp"

#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qzk/encoding.hpp"
#include "qzk/error.hpp"

namespace qzk {
namespace {

// ---------------------------------------------------------------------------
// Text helpers shared by the circuit and strategy parsers.

struct Line {
  int number = 0;  // 1-based, for error messages
  std::vector<std::string> tokens;
};

// Splits into whitespace-separated tokens, dropping '#' comments and blank
// lines.
std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> out;
  std::istringstream stream(text);
  std::string raw;
  int number = 0;
  while (std::getline(stream, raw)) {
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    Line line;
    line.number = number;
    std::string tok;
    while (ls >> tok) line.tokens.push_back(tok);
    if (!line.tokens.empty()) out.push_back(std::move(line));
  }
  return out;
}

[[noreturn]] void parse_fail(int line, const std::string& message) {
  fail(ErrorKind::kFormat, "line " + std::to_string(line) + ": " + message);
}

int parse_int(const std::string& token, int line, const char* what) {
  std::size_t pos = 0;
  long long value = 0;
  try {
    value = std::stoll(token, &pos);
  } catch (const std::exception&) {
    parse_fail(line, std::string("expected integer ") + what + ", got '" +
                         token + "'");
  }
  if (pos != token.size())
    parse_fail(line, std::string("trailing characters in integer ") + what +
                         " '" + token + "'");
  if (value < -(1ll << 30) || value > (1ll << 30))
    parse_fail(line, std::string("integer ") + what + " out of range");
  return static_cast<int>(value);
}

// Parses "key=value" returning value, enforcing the expected key.
int parse_keyed(const std::string& token, const char* key, int line) {
  std::string prefix = std::string(key) + "=";
  if (token.rfind(prefix, 0) != 0)
    parse_fail(line, std::string("expected '") + key + "=<int>', got '" +
                         token + "'");
  return parse_int(token.substr(prefix.size()), line, key);
}

// ---------------------------------------------------------------------------
// Register naming.

std::string logical_wire_name(const ProtocolCircuit& c, int wire) {
  int n = c.verifier_qubits;
  int m = c.message_qubits;
  if (wire < n) return "v" + std::to_string(wire + 1);
  int r = wire - n;
  int prover = r / (2 * m) + 1;
  int offset = r % (2 * m);
  if (offset < m)
    return "n" + std::to_string(prover) + "." + std::to_string(offset + 1);
  return "m" + std::to_string(prover) + "." + std::to_string(offset - m + 1);
}

std::string wire_display_name(const ProtocolCircuit& c, int wire) {
  if (c.physical) return "q" + std::to_string(wire + 1);
  return logical_wire_name(c, wire);
}

int parse_logical_wire(const ProtocolCircuit& c, const std::string& token,
                       int line) {
  if (token.size() < 2) parse_fail(line, "bad register name '" + token + "'");
  char kind = token[0];
  if (kind == 'v') {
    int j = parse_int(token.substr(1), line, "verifier index");
    if (j < 1 || j > c.verifier_qubits)
      parse_fail(line, "verifier qubit v" + std::to_string(j) +
                           " out of range (n=" +
                           std::to_string(c.verifier_qubits) + ")");
    return c.wire_v(j);
  }
  if (kind == 'n' || kind == 'm') {
    std::size_t dot = token.find('.');
    if (dot == std::string::npos || dot < 2 || dot + 1 >= token.size())
      parse_fail(line, "bad register name '" + token +
                           "' (expected " + std::string(1, kind) +
                           "<prover>.<qubit>)");
    int i = parse_int(token.substr(1, dot - 1), line, "prover index");
    int j = parse_int(token.substr(dot + 1), line, "qubit index");
    if (i < 1 || i > c.provers)
      parse_fail(line, "prover index " + std::to_string(i) +
                           " out of range (k=" + std::to_string(c.provers) +
                           ")");
    if (j < 1 || j > c.message_qubits)
      parse_fail(line, "message qubit index " + std::to_string(j) +
                           " out of range (m=" +
                           std::to_string(c.message_qubits) + ")");
    return kind == 'n' ? c.wire_n(i, j) : c.wire_m(i, j);
  }
  parse_fail(line, "bad register name '" + token + "'");
}

int parse_physical_wire(const ProtocolCircuit& c, const std::string& token,
                        int line) {
  if (token.empty() || token[0] != 'q')
    parse_fail(line, "bad wire name '" + token + "' (expected q<index>)");
  int w = parse_int(token.substr(1), line, "wire index");
  if (w < 1 || w > c.num_wires())
    parse_fail(line, "wire q" + std::to_string(w) + " out of range (" +
                         std::to_string(c.num_wires()) + " wires)");
  return w - 1;
}

// Gate labels accepted per circuit flavour.  Logical circuits use TOFFOLI
// for the doubly controlled X; physical circuits use the plain vocabulary
// names.  Identity timesteps are written ID in both.
std::optional<GateLabel> lookup_label(const std::string& token,
                                      bool physical) {
  if (token == "ID") return GateLabel::kI;
  if (token == "H") return GateLabel::kH;
  if (token == "CNOT") return GateLabel::kCNOT;
  if (!physical) {
    if (token == "TOFFOLI") return GateLabel::kCCX;
    return std::nullopt;
  }
  if (token == "X") return GateLabel::kX;
  if (token == "Z") return GateLabel::kZ;
  if (token == "CZ") return GateLabel::kCZ;
  if (token == "SWAP") return GateLabel::kSWAP;
  if (token == "CH") return GateLabel::kCH;
  if (token == "CCX") return GateLabel::kCCX;
  if (token == "CCZ") return GateLabel::kCCZ;
  return std::nullopt;
}

std::string label_display_name(GateLabel label, bool physical) {
  if (label == GateLabel::kI) return "ID";
  if (!physical && label == GateLabel::kCCX) return "TOFFOLI";
  return gate_name(label);
}

const char* kMicroNames[] = {"IDLE", "RESOURCE", "LOGICAL", "DECODE"};

std::optional<MicroPhase::Class> lookup_micro_class(const std::string& token) {
  for (int i = 0; i < 4; ++i)
    if (token == kMicroNames[i]) return static_cast<MicroPhase::Class>(i);
  return std::nullopt;
}

// Phase markers in file order for each flavour.
std::vector<ProtocolPhase> phase_sequence(bool physical) {
  if (physical)
    return {ProtocolPhase::kResourceGeneration, ProtocolPhase::kVerifierOp1,
            ProtocolPhase::kCopyQuestion,       ProtocolPhase::kProverOp,
            ProtocolPhase::kCopyAnswer,         ProtocolPhase::kVerifierOp2,
            ProtocolPhase::kOutputDecoding};
  return {ProtocolPhase::kVerifierOp1, ProtocolPhase::kCopyQuestion,
          ProtocolPhase::kProverOp, ProtocolPhase::kCopyAnswer,
          ProtocolPhase::kVerifierOp2};
}

// ---------------------------------------------------------------------------
// Wire classification for validation of logical circuits.

bool wire_in_message_register(const ProtocolCircuit& c, int wire) {
  int n = c.verifier_qubits;
  int m = c.message_qubits;
  if (wire < n) return false;
  return (wire - n) % (2 * m) >= m;
}

// For a logical wire inside N_i or M_i, returns {prover, qubit} (1-based).
std::pair<int, int> split_prover_wire(const ProtocolCircuit& c, int wire) {
  int r = wire - c.verifier_qubits;
  int m = c.message_qubits;
  return {r / (2 * m) + 1, r % m + 1};
}

[[noreturn]] void violation(std::size_t gate_index, const std::string& what) {
  fail(ErrorKind::kDomain,
       "phase violation at gate " + std::to_string(gate_index + 1) + ": " +
           what);
}

}  // namespace

// ---------------------------------------------------------------------------
// Basic structure.

const char* phase_name(ProtocolPhase phase) {
  switch (phase) {
    case ProtocolPhase::kResourceGeneration: return "RESGEN";
    case ProtocolPhase::kVerifierOp1: return "VOP1";
    case ProtocolPhase::kCopyQuestion: return "COPYQ";
    case ProtocolPhase::kProverOp: return "PROVER";
    case ProtocolPhase::kCopyAnswer: return "COPYA";
    case ProtocolPhase::kVerifierOp2: return "VOP2";
    case ProtocolPhase::kOutputDecoding: return "OUTDEC";
  }
  return "?";
}

const char* micro_phase_name(MicroPhase::Class cls) {
  return kMicroNames[static_cast<int>(cls)];
}

ProtoGate ProtoGate::elementary(const Gate& g) {
  ProtoGate pg;
  pg.is_prover = false;
  pg.gate = g;
  return pg;
}

ProtoGate ProtoGate::reflection(int prover, int round) {
  ProtoGate pg;
  pg.is_prover = true;
  pg.prover = prover;
  pg.round = round;
  return pg;
}

MicroPhase::Class MicroPhaseAnnotation::class_at(std::size_t t) const {
  for (const MicroPhase& p : phases)
    if (t >= p.begin && t < p.end) return p.cls;
  fail(ErrorKind::kDomain,
       "timestep " + std::to_string(t) + " not covered by any micro-phase");
}

int ProtocolCircuit::num_wires() const {
  int scale = physical ? block_len : 1;
  return (verifier_qubits + 2 * provers * message_qubits) * scale +
         extra_wires;
}

int ProtocolCircuit::wire_v(int j) const {
  if (j < 1 || j > verifier_qubits)
    fail(ErrorKind::kDomain, "verifier qubit index out of range");
  return (j - 1) * (physical ? block_len : 1);
}

int ProtocolCircuit::wire_n(int i, int j) const {
  if (i < 1 || i > provers || j < 1 || j > message_qubits)
    fail(ErrorKind::kDomain, "question register index out of range");
  return (verifier_qubits + (i - 1) * 2 * message_qubits + (j - 1)) *
         (physical ? block_len : 1);
}

int ProtocolCircuit::wire_m(int i, int j) const {
  if (i < 1 || i > provers || j < 1 || j > message_qubits)
    fail(ErrorKind::kDomain, "message register index out of range");
  return (verifier_qubits + (i - 1) * 2 * message_qubits + message_qubits +
          (j - 1)) *
         (physical ? block_len : 1);
}

int ProtocolCircuit::message_width() const {
  return message_qubits * (physical ? block_len : 1);
}

std::vector<int> ProtocolCircuit::message_wires(int i) const {
  std::vector<int> wires;
  int bl = physical ? block_len : 1;
  for (int j = 1; j <= message_qubits; ++j) {
    int base = wire_m(i, j);
    for (int w = 0; w < bl; ++w) wires.push_back(base + w);
  }
  return wires;
}

ProtocolPhase ProtocolCircuit::phase_of(std::size_t gate_index) const {
  for (int p = 0; p < kNumProtocolPhases; ++p)
    if (gate_index >= boundaries[p] && gate_index < boundaries[p + 1])
      return static_cast<ProtocolPhase>(p);
  fail(ErrorKind::kDomain, "gate index outside circuit");
}

void ProtocolCircuit::validate() const {
  if (verifier_qubits < 1) fail(ErrorKind::kDomain, "need n >= 1");
  if (message_qubits < 1) fail(ErrorKind::kDomain, "need m >= 1");
  if (provers < 1) fail(ErrorKind::kDomain, "need k >= 1");
  if (physical && block_len < 1)
    fail(ErrorKind::kDomain, "physical circuit needs block length >= 1");
  if (!physical && (block_len != 1 || extra_wires != 0))
    fail(ErrorKind::kDomain,
         "logical circuit must have unit blocks and no extra wires");
  if (extra_wires < 0) fail(ErrorKind::kDomain, "negative extra wires");
  if (output_qubit < 0 || output_qubit >= num_wires())
    fail(ErrorKind::kDomain, "output qubit out of range");

  if (boundaries[0] != 0 ||
      boundaries[kNumProtocolPhases] != gates.size())
    fail(ErrorKind::kDomain, "phase boundaries must cover all gates");
  for (int p = 0; p < kNumProtocolPhases; ++p)
    if (boundaries[p] > boundaries[p + 1])
      fail(ErrorKind::kDomain, "phase boundaries out of order");
  if (!physical) {
    if (boundaries[0] != boundaries[1])
      fail(ErrorKind::kDomain,
           "logical circuit cannot have a resource generation phase");
    if (boundaries[6] != boundaries[7])
      fail(ErrorKind::kDomain,
           "logical circuit cannot have an output decoding phase");
  }

  // Round ordering per prover: rounds must be 1, 2, ... in gate order.
  std::vector<int> next_round(static_cast<std::size_t>(provers), 1);

  for (std::size_t idx = 0; idx < gates.size(); ++idx) {
    const ProtoGate& pg = gates[idx];
    ProtocolPhase phase = phase_of(idx);
    if (pg.is_prover) {
      if (phase != ProtocolPhase::kProverOp)
        violation(idx, "prover reflection outside the PROVER phase");
      if (pg.prover < 1 || pg.prover > provers)
        violation(idx, "prover index out of range");
      if (pg.round != next_round[pg.prover - 1])
        violation(idx, "prover " + std::to_string(pg.prover) +
                           " rounds out of order (expected round " +
                           std::to_string(next_round[pg.prover - 1]) + ")");
      ++next_round[pg.prover - 1];
      continue;
    }

    const Gate& g = pg.gate;
    for (int q : g.qubits)
      if (q < 0 || q >= num_wires())
        violation(idx, "gate wire out of range");

    if (!physical) {
      switch (g.label) {
        case GateLabel::kI:
        case GateLabel::kH:
        case GateLabel::kCNOT:
        case GateLabel::kCCX:
          break;
        default:
          violation(idx, std::string("gate ") + gate_name(g.label) +
                             " is not in the protocol vocabulary");
      }
      switch (phase) {
        case ProtocolPhase::kVerifierOp1:
        case ProtocolPhase::kVerifierOp2:
          for (int q : g.qubits)
            if (wire_in_message_register(*this, q))
              violation(idx, "verifier operation touches a message register");
          break;
        case ProtocolPhase::kCopyQuestion:
        case ProtocolPhase::kCopyAnswer: {
          if (g.label == GateLabel::kI) break;
          if (g.label != GateLabel::kCNOT)
            violation(idx, "copy phases admit only CNOT and ID");
          bool to_message = phase == ProtocolPhase::kCopyQuestion;
          int src = g.qubits[0], dst = g.qubits[1];
          bool ok = src >= verifier_qubits && dst >= verifier_qubits &&
                    wire_in_message_register(*this, src) == !to_message &&
                    wire_in_message_register(*this, dst) == to_message &&
                    split_prover_wire(*this, src) ==
                        split_prover_wire(*this, dst);
          if (!ok)
            violation(idx, to_message
                               ? "question copy must be CNOT n<i>.<j> m<i>.<j>"
                               : "answer copy must be CNOT m<i>.<j> n<i>.<j>");
          break;
        }
        case ProtocolPhase::kProverOp:
          if (g.label != GateLabel::kI)
            violation(idx, "PROVER phase admits only reflections and ID");
          break;
        default:
          violation(idx, "gate in empty phase of a logical circuit");
      }
    } else {
      if (phase == ProtocolPhase::kProverOp && g.label != GateLabel::kI)
        violation(idx, "PROVER phase admits only reflections and ID");
    }
  }

  if (annotation) {
    const MicroPhaseAnnotation& ann = *annotation;
    std::size_t cursor = 0;
    for (const MicroPhase& p : ann.phases) {
      if (p.begin != cursor || p.end <= p.begin)
        fail(ErrorKind::kDomain,
             "micro-phases must tile the timesteps in order");
      cursor = p.end;
    }
    if (cursor != gates.size())
      fail(ErrorKind::kDomain, "micro-phases must cover every timestep");
    std::size_t seen = 0;
    for (std::size_t idx = 0; idx < gates.size(); ++idx) {
      if (!gates[idx].is_prover) continue;
      if (seen >= ann.t_star.size() || ann.t_star[seen] != idx + 1)
        fail(ErrorKind::kDomain,
             "t_star entries must list the prover reflection timesteps");
      ++seen;
    }
    if (seen != ann.t_star.size())
      fail(ErrorKind::kDomain, "extra t_star entries");
  }
}

// ---------------------------------------------------------------------------
// Strategy structure.

int ProverStrategy::private_width(int prover) const {
  if (prover < 1 || prover > provers)
    fail(ErrorKind::kDomain, "prover index out of range");
  return private_qubits[prover - 1];
}

int ProverStrategy::total_private() const {
  int total = 0;
  for (int p : private_qubits) total += p;
  return total;
}

void ProverStrategy::validate() const {
  if (provers < 1) fail(ErrorKind::kInvalidStrategy, "need at least 1 prover");
  if (message_width < 1)
    fail(ErrorKind::kInvalidStrategy, "need message width >= 1");
  if (private_qubits.size() != static_cast<std::size_t>(provers) ||
      actions.size() != static_cast<std::size_t>(provers))
    fail(ErrorKind::kInvalidStrategy,
         "need private sizes and action lists for every prover");
  for (int p : private_qubits)
    if (p < 0) fail(ErrorKind::kInvalidStrategy, "negative private register");

  for (int i = 1; i <= provers; ++i) {
    int local = message_width + private_qubits[i - 1];
    for (const ProverAction& action : actions[i - 1]) {
      for (const Gate& g : action.gates)
        for (int q : g.qubits)
          if (q < 0 || q >= local)
            fail(ErrorKind::kInvalidStrategy,
                 "action gate outside the prover's local register");
      if (!action.matrix.empty()) {
        std::uint64_t dim = std::uint64_t{1} << local;
        if (action.matrix.size() != dim * dim)
          fail(ErrorKind::kInvalidStrategy,
               "action matrix has the wrong dimension");
        DenseMatrix product =
            dense_multiply(dense_adjoint(action.matrix), action.matrix);
        for (std::uint64_t r = 0; r < dim; ++r)
          for (std::uint64_t c = 0; c < dim; ++c) {
            const CQ2& want = r == c ? CQ2(1) : CQ2(0);
            if (!(product[r * dim + c] == want))
              fail(ErrorKind::kInvalidStrategy, "action matrix not unitary");
          }
      }
    }
  }

  if (!initial_state.empty()) {
    int total = provers * message_width + total_private();
    if (total > 62)
      fail(ErrorKind::kCapExceeded, "strategy register too wide");
    if (initial_state.size() != (std::size_t{1} << total))
      fail(ErrorKind::kInvalidStrategy,
           "initial state has the wrong dimension");
    Q2 norm;
    for (const CQ2& a : initial_state) norm = norm + a.abs2();
    if (!(norm == Q2(Rat(1))))
      fail(ErrorKind::kInvalidStrategy, "initial state not normalised");
  }
}

// ---------------------------------------------------------------------------
// Circuit file format.

ProtocolCircuit parse_circuit(const std::string& text) {
  std::vector<Line> lines = tokenize(text);
  if (lines.empty()) fail(ErrorKind::kFormat, "empty circuit file");

  const Line& header = lines[0];
  if (header.tokens[0] != "CIRCUIT")
    parse_fail(header.number, "expected CIRCUIT header");

  ProtocolCircuit circuit;
  bool saw_output = false;
  for (std::size_t t = 1; t < header.tokens.size(); ++t) {
    const std::string& tok = header.tokens[t];
    if (tok.rfind("n=", 0) == 0)
      circuit.verifier_qubits = parse_keyed(tok, "n", header.number);
    else if (tok.rfind("m=", 0) == 0)
      circuit.message_qubits = parse_keyed(tok, "m", header.number);
    else if (tok.rfind("k=", 0) == 0)
      circuit.provers = parse_keyed(tok, "k", header.number);
    else if (tok.rfind("block=", 0) == 0) {
      circuit.block_len = parse_keyed(tok, "block", header.number);
      circuit.physical = true;
    } else if (tok.rfind("extra=", 0) == 0) {
      circuit.extra_wires = parse_keyed(tok, "extra", header.number);
      circuit.physical = true;
    } else if (tok.rfind("output=", 0) == 0) {
      circuit.output_qubit = parse_keyed(tok, "output", header.number) - 1;
      saw_output = true;
    } else {
      parse_fail(header.number, "unknown header field '" + tok + "'");
    }
  }
  if (circuit.verifier_qubits < 1 || circuit.message_qubits < 1 ||
      circuit.provers < 1)
    parse_fail(header.number, "header needs n>=1, m>=1, k>=1");
  if (circuit.physical && !saw_output)
    parse_fail(header.number, "physical circuit header needs output=");

  std::vector<ProtocolPhase> sequence = phase_sequence(circuit.physical);
  std::size_t next_marker = 0;  // index into `sequence`
  bool in_annotation = false;
  MicroPhaseAnnotation annotation;
  bool saw_annotation = false;

  for (std::size_t li = 1; li < lines.size(); ++li) {
    const Line& line = lines[li];
    const std::string& head = line.tokens[0];

    if (head == "PHASE") {
      if (in_annotation)
        parse_fail(line.number, "phase marker after annotation lines");
      if (line.tokens.size() != 2)
        parse_fail(line.number, "PHASE takes exactly one marker");
      if (next_marker >= sequence.size())
        parse_fail(line.number, "too many phase markers");
      const char* expected = phase_name(sequence[next_marker]);
      if (line.tokens[1] != expected)
        parse_fail(line.number, "expected 'PHASE " + std::string(expected) +
                                    "', got 'PHASE " + line.tokens[1] + "'");
      circuit.boundaries[static_cast<int>(sequence[next_marker])] =
          circuit.gates.size();
      ++next_marker;
      continue;
    }

    if (head == "MICRO" || head == "TSTAR") {
      if (!circuit.physical)
        parse_fail(line.number, "annotations only apply to physical circuits");
      in_annotation = true;
      saw_annotation = true;
      if (head == "MICRO") {
        if (line.tokens.size() < 4)
          parse_fail(line.number, "MICRO takes class, first, last");
        std::optional<MicroPhase::Class> cls =
            lookup_micro_class(line.tokens[1]);
        if (!cls)
          parse_fail(line.number,
                     "unknown micro-phase class '" + line.tokens[1] + "'");
        MicroPhase phase;
        phase.cls = *cls;
        int first = parse_int(line.tokens[2], line.number, "first timestep");
        int last = parse_int(line.tokens[3], line.number, "last timestep");
        if (first < 1 || last < first)
          parse_fail(line.number, "bad micro-phase range");
        phase.begin = static_cast<std::size_t>(first - 1);
        phase.end = static_cast<std::size_t>(last);
        // Optional unit metadata: B=<blocks,> G=<gate> R=<prover>.
        for (std::size_t ti = 4; ti < line.tokens.size(); ++ti) {
          const std::string& tok = line.tokens[ti];
          if (tok.rfind("B=", 0) == 0) {
            std::string list = tok.substr(2);
            std::size_t pos = 0;
            while (pos < list.size()) {
              std::size_t comma = list.find(',', pos);
              if (comma == std::string::npos) comma = list.size();
              phase.blocks.push_back(parse_int(list.substr(pos, comma - pos),
                                               line.number, "unit block"));
              pos = comma + 1;
            }
          } else if (tok.rfind("G=", 0) == 0) {
            std::optional<GateLabel> label =
                lookup_label(tok.substr(2), /*physical=*/true);
            if (!label)
              parse_fail(line.number, "unknown unit gate '" + tok + "'");
            phase.logical = *label;
          } else if (tok.rfind("R=", 0) == 0) {
            phase.prover = parse_int(tok.substr(2), line.number, "unit prover");
          } else {
            parse_fail(line.number, "unknown MICRO token '" + tok + "'");
          }
        }
        annotation.phases.push_back(phase);
      } else {
        if (line.tokens.size() != 3)
          parse_fail(line.number, "TSTAR takes prover, timestep");
        parse_int(line.tokens[1], line.number, "prover");  // informational
        int t = parse_int(line.tokens[2], line.number, "timestep");
        if (t < 1) parse_fail(line.number, "bad reflection timestep");
        annotation.t_star.push_back(static_cast<std::size_t>(t));
      }
      continue;
    }

    if (in_annotation)
      parse_fail(line.number, "gate line after annotation lines");
    if (next_marker == 0)
      parse_fail(line.number, "gate before the first phase marker");

    if (head == "PROVER") {
      if (line.tokens.size() != 3)
        parse_fail(line.number, "PROVER takes prover and round");
      int prover = parse_int(line.tokens[1], line.number, "prover");
      int round = parse_int(line.tokens[2], line.number, "round");
      if (prover < 1 || prover > circuit.provers)
        parse_fail(line.number, "prover index out of range");
      if (round < 1) parse_fail(line.number, "round must be >= 1");
      circuit.gates.push_back(ProtoGate::reflection(prover, round));
      continue;
    }

    std::optional<GateLabel> label = lookup_label(head, circuit.physical);
    if (!label) parse_fail(line.number, "unknown gate '" + head + "'");
    int arity = gate_arity(*label);
    if (*label == GateLabel::kI) {
      if (line.tokens.size() != 1)
        parse_fail(line.number, "ID takes no operands");
      circuit.gates.push_back(
          ProtoGate::elementary(Gate(GateLabel::kI, {0})));
      continue;
    }
    if (static_cast<int>(line.tokens.size()) != arity + 1)
      parse_fail(line.number, std::string("gate ") + head + " takes " +
                                  std::to_string(arity) + " operands");
    std::vector<int> wires;
    for (int a = 0; a < arity; ++a) {
      const std::string& tok = line.tokens[a + 1];
      wires.push_back(circuit.physical
                          ? parse_physical_wire(circuit, tok, line.number)
                          : parse_logical_wire(circuit, tok, line.number));
    }
    for (std::size_t a = 0; a < wires.size(); ++a)
      for (std::size_t b = a + 1; b < wires.size(); ++b)
        if (wires[a] == wires[b])
          parse_fail(line.number, "gate operands must be distinct");
    circuit.gates.push_back(ProtoGate::elementary(Gate(*label, wires)));
  }

  if (next_marker != sequence.size())
    fail(ErrorKind::kFormat,
         std::string("missing phase marker 'PHASE ") +
             phase_name(sequence[next_marker]) + "'");

  // Close the trailing phase and fill the spans this flavour does not use.
  std::size_t total = circuit.gates.size();
  circuit.boundaries[kNumProtocolPhases] = total;
  if (!circuit.physical) {
    circuit.boundaries[static_cast<int>(ProtocolPhase::kResourceGeneration)] =
        0;
    circuit.boundaries[static_cast<int>(ProtocolPhase::kOutputDecoding)] =
        total;
  }

  if (saw_annotation) circuit.annotation = std::move(annotation);
  circuit.validate();
  return circuit;
}

std::string print_circuit(const ProtocolCircuit& circuit) {
  std::ostringstream out;
  out << "CIRCUIT n=" << circuit.verifier_qubits << " m="
      << circuit.message_qubits << " k=" << circuit.provers;
  if (circuit.physical)
    out << " block=" << circuit.block_len << " extra=" << circuit.extra_wires
        << " output=" << circuit.output_qubit + 1;
  out << "\n";

  for (ProtocolPhase phase : phase_sequence(circuit.physical)) {
    out << "PHASE " << phase_name(phase) << "\n";
    int p = static_cast<int>(phase);
    for (std::size_t idx = circuit.boundaries[p];
         idx < circuit.boundaries[p + 1]; ++idx) {
      const ProtoGate& pg = circuit.gates[idx];
      if (pg.is_prover) {
        out << "PROVER " << pg.prover << " " << pg.round << "\n";
        continue;
      }
      out << label_display_name(pg.gate.label, circuit.physical);
      if (pg.gate.label != GateLabel::kI)
        for (int q : pg.gate.qubits)
          out << " " << wire_display_name(circuit, q);
      out << "\n";
    }
  }

  if (circuit.annotation) {
    for (const MicroPhase& p : circuit.annotation->phases) {
      out << "MICRO " << micro_phase_name(p.cls) << " " << p.begin + 1 << " "
          << p.end;
      if (!p.blocks.empty()) {
        out << " B=";
        for (std::size_t i = 0; i < p.blocks.size(); ++i)
          out << (i ? "," : "") << p.blocks[i];
      }
      if (p.logical != GateLabel::kI) out << " G=" << gate_name(p.logical);
      if (p.prover != 0) out << " R=" << p.prover;
      out << "\n";
    }
    for (std::size_t t : circuit.annotation->t_star) {
      const ProtoGate& pg = circuit.gates[t - 1];
      out << "TSTAR " << pg.prover << " " << t << "\n";
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Strategy file format.

ProverStrategy parse_strategy(const std::string& text) {
  std::vector<Line> lines = tokenize(text);
  if (lines.empty()) fail(ErrorKind::kFormat, "empty strategy file");

  const Line& header = lines[0];
  if (header.tokens[0] != "STRATEGY" || header.tokens.size() != 3)
    parse_fail(header.number, "expected 'STRATEGY k=<int> m=<int>'");

  ProverStrategy strategy;
  strategy.provers = parse_keyed(header.tokens[1], "k", header.number);
  strategy.message_width = parse_keyed(header.tokens[2], "m", header.number);
  if (strategy.provers < 1 || strategy.message_width < 1)
    parse_fail(header.number, "header needs k>=1, m>=1");
  strategy.private_qubits.assign(static_cast<std::size_t>(strategy.provers),
                                 -1);
  strategy.actions.resize(static_cast<std::size_t>(strategy.provers));

  std::size_t li = 1;
  for (int i = 1; i <= strategy.provers; ++i, ++li) {
    if (li >= lines.size() || lines[li].tokens[0] != "PRIVATE" ||
        lines[li].tokens.size() != 3)
      fail(ErrorKind::kFormat,
           "expected 'PRIVATE " + std::to_string(i) + " <qubits>'");
    const Line& line = lines[li];
    int prover = parse_int(line.tokens[1], line.number, "prover");
    if (prover != i)
      parse_fail(line.number, "PRIVATE lines must list provers in order");
    int width = parse_int(line.tokens[2], line.number, "private width");
    if (width < 0) parse_fail(line.number, "negative private width");
    strategy.private_qubits[i - 1] = width;
  }

  if (li < lines.size() && lines[li].tokens[0] == "INITIAL") {
    const Line& line = lines[li];
    if (line.tokens.size() != 3 || line.tokens[1] != "BASIS")
      parse_fail(line.number, "expected 'INITIAL BASIS <bits>'");
    const std::string& bits = line.tokens[2];
    int total =
        strategy.provers * strategy.message_width + strategy.total_private();
    if (static_cast<int>(bits.size()) != total)
      parse_fail(line.number, "expected " + std::to_string(total) +
                                  " bits over [messages][privates]");
    std::uint64_t basis = 0;
    for (char b : bits) {
      if (b != '0' && b != '1')
        parse_fail(line.number, "initial bits must be 0/1");
      basis = basis << 1 | static_cast<std::uint64_t>(b - '0');
    }
    strategy.initial_state.assign(std::size_t{1} << total, CQ2(0));
    strategy.initial_state[basis] = CQ2(1);
    ++li;
  }

  while (li < lines.size()) {
    const Line& head = lines[li];
    if (head.tokens[0] != "ACTION" || head.tokens.size() != 3)
      parse_fail(head.number, "expected 'ACTION <prover> <round>'");
    int prover = parse_int(head.tokens[1], head.number, "prover");
    int round = parse_int(head.tokens[2], head.number, "round");
    if (prover < 1 || prover > strategy.provers)
      parse_fail(head.number, "prover index out of range");
    std::vector<ProverAction>& list = strategy.actions[prover - 1];
    if (round != static_cast<int>(list.size()) + 1)
      parse_fail(head.number, "rounds for a prover must appear as 1, 2, ...");
    int privates = strategy.private_qubits[prover - 1];

    ProverAction action;
    ++li;
    bool closed = false;
    for (; li < lines.size(); ++li) {
      const Line& line = lines[li];
      if (line.tokens[0] == "END") {
        if (line.tokens.size() != 1)
          parse_fail(line.number, "END takes no operands");
        closed = true;
        ++li;
        break;
      }
      std::optional<GateLabel> label = lookup_label(line.tokens[0], true);
      if (!label)
        parse_fail(line.number, "unknown gate '" + line.tokens[0] + "'");
      if (*label == GateLabel::kI)
        parse_fail(line.number, "ID has no effect inside an action");
      int arity = gate_arity(*label);
      if (static_cast<int>(line.tokens.size()) != arity + 1)
        parse_fail(line.number, std::string("gate ") + line.tokens[0] +
                                    " takes " + std::to_string(arity) +
                                    " operands");
      std::vector<int> wires;
      for (int a = 0; a < arity; ++a) {
        const std::string& tok = line.tokens[a + 1];
        if (tok.size() < 2 || (tok[0] != 'm' && tok[0] != 'p'))
          parse_fail(line.number, "operands must be m<i>.<q> or p<i>.<q>");
        std::size_t dot = tok.find('.');
        if (dot == std::string::npos || dot < 2 || dot + 1 >= tok.size())
          parse_fail(line.number, "bad operand '" + tok + "'");
        int owner = parse_int(tok.substr(1, dot - 1), line.number, "prover");
        int q = parse_int(tok.substr(dot + 1), line.number, "qubit");
        if (owner != prover)
          parse_fail(line.number,
                     "action may only touch its own prover's registers");
        if (tok[0] == 'm') {
          if (q < 1 || q > strategy.message_width)
            parse_fail(line.number, "message qubit out of range");
          wires.push_back(q - 1);
        } else {
          if (q < 1 || q > privates)
            parse_fail(line.number, "private qubit out of range");
          wires.push_back(strategy.message_width + q - 1);
        }
      }
      action.gates.push_back(Gate(*label, wires));
    }
    if (!closed) fail(ErrorKind::kFormat, "unterminated ACTION block");
    list.push_back(std::move(action));
  }

  strategy.validate();
  return strategy;
}

std::string print_strategy(const ProverStrategy& strategy) {
  std::ostringstream out;
  out << "STRATEGY k=" << strategy.provers << " m=" << strategy.message_width
      << "\n";
  for (int i = 1; i <= strategy.provers; ++i)
    out << "PRIVATE " << i << " " << strategy.private_qubits[i - 1] << "\n";

  if (!strategy.initial_state.empty()) {
    std::size_t basis = strategy.initial_state.size();
    for (std::size_t idx = 0; idx < strategy.initial_state.size(); ++idx) {
      const CQ2& amp = strategy.initial_state[idx];
      if (amp.is_zero()) continue;
      if (basis != strategy.initial_state.size() || !(amp == CQ2(1)))
        fail(ErrorKind::kFormat,
             "only basis initial states have a file representation");
      basis = idx;
    }
    if (basis != 0 && basis != strategy.initial_state.size()) {
      int total = strategy.provers * strategy.message_width +
                  strategy.total_private();
      std::string bits(static_cast<std::size_t>(total), '0');
      for (int b = 0; b < total; ++b)
        if (basis >> (total - 1 - b) & 1) bits[b] = '1';
      out << "INITIAL BASIS " << bits << "\n";
    }
  }

  for (int i = 1; i <= strategy.provers; ++i) {
    for (std::size_t r = 0; r < strategy.actions[i - 1].size(); ++r) {
      const ProverAction& action = strategy.actions[i - 1][r];
      if (!action.matrix.empty())
        fail(ErrorKind::kFormat,
             "matrix actions have no file representation");
      out << "ACTION " << i << " " << r + 1 << "\n";
      for (const Gate& g : action.gates) {
        out << gate_name(g.label);
        for (int q : g.qubits) {
          if (q < strategy.message_width)
            out << " m" << i << "." << q + 1;
          else
            out << " p" << i << "." << q - strategy.message_width + 1;
        }
        out << "\n";
      }
      out << "END\n";
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Robustification.

namespace {

// Accumulates the physical gate list together with its micro-phases.
struct RobustBuilder {
  ProtocolCircuit out;
  std::vector<MicroPhase> phases;
  std::vector<std::size_t> t_star;

  void push(const Gate& g) { out.gates.push_back(ProtoGate::elementary(g)); }

  // Appends `gates` as one micro-phase (skipped when empty), recording the
  // blocks the unit works on and, for encoded gates, the logical label.
  void push_phase(MicroPhase::Class cls, const std::vector<Gate>& gates,
                  std::vector<int> blocks,
                  GateLabel logical = GateLabel::kI) {
    if (gates.empty()) return;
    MicroPhase p;
    p.cls = cls;
    p.begin = out.gates.size();
    for (const Gate& g : gates) push(g);
    p.end = out.gates.size();
    p.blocks = std::move(blocks);
    p.logical = logical;
    phases.push_back(p);
  }

  void push_idles(std::size_t count) {
    if (count == 0) return;
    std::size_t begin = out.gates.size();
    for (std::size_t i = 0; i < count; ++i)
      push(Gate(GateLabel::kI, {0}));
    // Keep idle runs maximal: extend an adjacent idle micro-phase.
    if (!phases.empty() && phases.back().cls == MicroPhase::Class::kIdling &&
        phases.back().end == begin) {
      phases.back().end = out.gates.size();
      return;
    }
    MicroPhase p;
    p.cls = MicroPhase::Class::kIdling;
    p.begin = begin;
    p.end = out.gates.size();
    phases.push_back(p);
  }

  void push_reflection(int prover, int round) {
    MicroPhase p;
    p.cls = MicroPhase::Class::kLogicalOperation;
    p.begin = out.gates.size();
    out.gates.push_back(ProtoGate::reflection(prover, round));
    p.end = out.gates.size();
    p.prover = prover;
    phases.push_back(p);
    t_star.push_back(p.end);  // 1-based timestep of the reflection
  }
};

// Remaps a local gate list: local wire b*L + w belongs to block_map[b].
std::vector<Gate> remap_blocks(const std::vector<Gate>& gates,
                               const std::vector<int>& block_map, int bl) {
  std::vector<int> wire_map(block_map.size() * static_cast<std::size_t>(bl));
  for (std::size_t b = 0; b < block_map.size(); ++b)
    for (int w = 0; w < bl; ++w)
      wire_map[b * static_cast<std::size_t>(bl) + w] = block_map[b] * bl + w;
  std::vector<Gate> out;
  out.reserve(gates.size());
  for (const Gate& g : gates) out.push_back(remap_gate(g, wire_map));
  return out;
}

// Encoder for one block, remapped onto block `target`.
std::vector<Gate> block_encoder(const StabilizerCode& code, int target) {
  return remap_blocks(code.encoder(), {target}, code.num_physical());
}

}  // namespace

ProtocolCircuit robustify(const ProtocolCircuit& circuit,
                          const StabilizerCode& code, int padding,
                          int gadget_copies) {
  circuit.validate();
  if (circuit.physical)
    fail(ErrorKind::kDomain, "circuit is already physical");
  if (padding < 1) fail(ErrorKind::kDomain, "padding must be >= 1");
  if (gadget_copies < 1)
    fail(ErrorKind::kDomain, "gadget needs at least one copy block");

  int bl = code.num_physical();
  int data_blocks = circuit.num_wires();

  // Pre-pass: each Toffoli consumes one magic triple plus 3 * copies
  // dephasing blocks, allocated after the data blocks in gate order.
  int toffolis = 0;
  for (const ProtoGate& pg : circuit.gates)
    if (!pg.is_prover && pg.gate.label == GateLabel::kCCX) ++toffolis;
  int blocks_per_gadget = 3 + 3 * gadget_copies;

  RobustBuilder builder;
  ProtocolCircuit& out = builder.out;
  out.verifier_qubits = circuit.verifier_qubits;
  out.message_qubits = circuit.message_qubits;
  out.provers = circuit.provers;
  out.physical = true;
  out.block_len = bl;
  out.extra_wires = toffolis * blocks_per_gadget * bl;
  out.output_qubit = code.input_qubit();  // inside block 0 (= v1)

  std::array<std::size_t, kNumProtocolPhases + 1>& bounds = out.boundaries;

  // --- Resource Generation: encode the verifier-side blocks (V and N; the
  // message blocks travel with the strategy's initial state), then prepare
  // the ancilla blocks every Toffoli gadget consumes.
  bounds[static_cast<int>(ProtocolPhase::kResourceGeneration)] = 0;
  int n = circuit.verifier_qubits;
  int m = circuit.message_qubits;
  for (int b = 0; b < data_blocks; ++b) {
    bool is_message = b >= n && (b - n) % (2 * m) >= m;
    if (is_message) continue;
    builder.push_phase(MicroPhase::Class::kResourceEncoding,
                       block_encoder(code, b), {b});
  }
  int next_resource = data_blocks;
  std::vector<int> gadget_base;  // first ancilla block per Toffoli occurrence
  for (int t = 0; t < toffolis; ++t) {
    int base = next_resource;
    gadget_base.push_back(base);
    next_resource += blocks_per_gadget;

    // Joint magic state: prepare on the three input wires, then encode each
    // block (the encoders act on disjoint blocks, so linearity carries the
    // entangled input through).
    std::vector<Gate> prep = toffoli_magic_prep(
        base * bl + code.input_qubit(), (base + 1) * bl + code.input_qubit(),
        (base + 2) * bl + code.input_qubit());
    for (int j = 0; j < 3; ++j) {
      std::vector<Gate> enc = block_encoder(code, base + j);
      prep.insert(prep.end(), enc.begin(), enc.end());
    }
    builder.push_phase(MicroPhase::Class::kResourceEncoding, prep,
                       {base, base + 1, base + 2});

    for (int c = 0; c < 3 * gadget_copies; ++c)
      builder.push_phase(MicroPhase::Class::kResourceEncoding,
                         block_encoder(code, base + 3 + c), {base + 3 + c});
  }

  // --- Main body: the five logical phases.
  int gadget_index = 0;
  for (ProtocolPhase phase :
       {ProtocolPhase::kVerifierOp1, ProtocolPhase::kCopyQuestion,
        ProtocolPhase::kProverOp, ProtocolPhase::kCopyAnswer,
        ProtocolPhase::kVerifierOp2}) {
    bounds[static_cast<int>(phase)] = out.gates.size();
    int p = static_cast<int>(phase);
    bool saw_reflection = false;
    for (std::size_t idx = circuit.boundaries[p];
         idx < circuit.boundaries[p + 1]; ++idx) {
      const ProtoGate& pg = circuit.gates[idx];
      if (pg.is_prover) {
        builder.push_idles(static_cast<std::size_t>(padding) *
                           static_cast<std::size_t>(bl));
        builder.push_reflection(pg.prover, pg.round);
        saw_reflection = true;
        continue;
      }
      switch (pg.gate.label) {
        case GateLabel::kI:
          builder.push_idles(1);
          break;
        case GateLabel::kH: {
          EncodedGateSequence seq =
              transversal_encoding(code, GateLabel::kH, {pg.gate.qubits[0]});
          builder.push_phase(MicroPhase::Class::kLogicalOperation,
                             remap_blocks(seq.gates, pg.gate.qubits, bl),
                             pg.gate.qubits, GateLabel::kH);
          break;
        }
        case GateLabel::kCNOT: {
          EncodedGateSequence seq = transversal_encoding(
              code, GateLabel::kCNOT,
              {pg.gate.qubits[0], pg.gate.qubits[1]});
          builder.push_phase(MicroPhase::Class::kLogicalOperation,
                             remap_blocks(seq.gates, pg.gate.qubits, bl),
                             pg.gate.qubits, GateLabel::kCNOT);
          break;
        }
        case GateLabel::kCCX: {
          EncodedGateSequence seq = toffoli_gadget_encoding(
              code, pg.gate.qubits, gadget_copies);
          std::vector<int> block_map = pg.gate.qubits;
          int base = gadget_base[gadget_index++];
          for (int a = 0; a < blocks_per_gadget; ++a)
            block_map.push_back(base + a);
          builder.push_phase(MicroPhase::Class::kLogicalOperation,
                             remap_blocks(seq.gates, block_map, bl),
                             block_map, GateLabel::kCCX);
          break;
        }
        default:
          fail(ErrorKind::kInternal, "unexpected logical gate label");
      }
    }
    if (phase == ProtocolPhase::kProverOp && saw_reflection)
      builder.push_idles(static_cast<std::size_t>(padding) *
                         static_cast<std::size_t>(bl));
  }

  // --- Output Decoding: decode the output block (v1) down to one qubit.
  bounds[static_cast<int>(ProtocolPhase::kOutputDecoding)] =
      out.gates.size();
  builder.push_phase(MicroPhase::Class::kOutputDecoding,
                     remap_blocks(code.decoder(), {0}, bl), {0});
  bounds[kNumProtocolPhases] = out.gates.size();

  MicroPhaseAnnotation annotation;
  annotation.phases = std::move(builder.phases);
  annotation.t_star = std::move(builder.t_star);
  // Reflections must be separated by at least the padding we inserted.
  for (std::size_t i = 1; i < annotation.t_star.size(); ++i)
    check_internal(annotation.t_star[i] - annotation.t_star[i - 1] >
                       static_cast<std::size_t>(padding) *
                           static_cast<std::size_t>(bl),
                   "prover reflections closer than the padding");
  out.annotation = std::move(annotation);

  out.validate();
  return out;
}

ProverStrategy wrap_strategy(const ProverStrategy& strategy,
                             const StabilizerCode& code) {
  strategy.validate();
  int bl = code.num_physical();
  int mw = strategy.message_width;

  ProverStrategy wrapped;
  wrapped.provers = strategy.provers;
  wrapped.message_width = mw * bl;
  wrapped.private_qubits = strategy.private_qubits;
  wrapped.actions.resize(static_cast<std::size_t>(strategy.provers));

  for (int i = 1; i <= strategy.provers; ++i) {
    int privates = strategy.private_qubits[i - 1];
    // Local wire map for the original action: message qubit q sits on its
    // block's input wire, privates follow the message blocks.
    std::vector<int> inner_map;
    for (int q = 0; q < mw; ++q)
      inner_map.push_back(q * bl + code.input_qubit());
    for (int p = 0; p < privates; ++p) inner_map.push_back(mw * bl + p);

    for (const ProverAction& action : strategy.actions[i - 1]) {
      if (!action.matrix.empty())
        fail(ErrorKind::kDomain,
             "wrapping requires gate-list actions (matrix given)");
      ProverAction wrapped_action;
      std::vector<Gate>& gates = wrapped_action.gates;
      for (int q = 0; q < mw; ++q) {
        std::vector<Gate> dec = remap_blocks(code.decoder(), {q}, bl);
        gates.insert(gates.end(), dec.begin(), dec.end());
      }
      for (const Gate& g : action.gates)
        gates.push_back(remap_gate(g, inner_map));
      for (int q = 0; q < mw; ++q) {
        std::vector<Gate> enc = remap_blocks(code.encoder(), {q}, bl);
        gates.insert(gates.end(), enc.begin(), enc.end());
      }
      wrapped.actions[i - 1].push_back(std::move(wrapped_action));
    }
  }

  // Encode the initial state block-wise on every message register.  The
  // logical amplitudes land on each block's input wire; the block encoders
  // then lift them to codewords.
  int total_logical = strategy.provers * mw + strategy.total_private();
  int total_wrapped =
      strategy.provers * mw * bl + strategy.total_private();
  if (total_wrapped > DenseState::kDefaultQubitCap)
    fail(ErrorKind::kCapExceeded,
         "wrapped initial state exceeds the dense oracle cap");

  std::vector<int> qubit_map(static_cast<std::size_t>(total_logical));
  for (int i = 0; i < strategy.provers; ++i)
    for (int q = 0; q < mw; ++q)
      qubit_map[i * mw + q] = (i * mw + q) * bl + code.input_qubit();
  for (int p = 0; p < strategy.total_private(); ++p)
    qubit_map[strategy.provers * mw + p] = strategy.provers * mw * bl + p;

  std::vector<CQ2> amps(std::size_t{1} << total_wrapped, CQ2(0));
  if (strategy.initial_state.empty()) {
    amps[0] = CQ2(1);
  } else {
    for (std::size_t idx = 0; idx < strategy.initial_state.size(); ++idx) {
      const CQ2& a = strategy.initial_state[idx];
      if (a.is_zero()) continue;
      std::uint64_t target = 0;
      for (int q = 0; q < total_logical; ++q)
        if (idx >> (total_logical - 1 - q) & 1)
          target |= std::uint64_t{1}
                    << (total_wrapped - 1 - qubit_map[q]);
      amps[target] = a;
    }
  }
  DenseState state = DenseState::from_amplitudes(total_wrapped,
                                                 std::move(amps));
  for (int b = 0; b < strategy.provers * mw; ++b)
    state.apply(remap_blocks(code.encoder(), {b}, bl));

  wrapped.initial_state.resize(std::size_t{1} << total_wrapped);
  for (std::uint64_t idx = 0; idx < state.dimension(); ++idx)
    wrapped.initial_state[idx] = state.amplitude(idx);

  wrapped.validate();
  return wrapped;
}

// ---------------------------------------------------------------------------
// Value of a circuit under one fixed strategy.

Q2 circuit_value_fixed_strategy(const ProtocolCircuit& circuit,
                                const ProverStrategy& strategy) {
  circuit.validate();
  strategy.validate();
  if (strategy.provers != circuit.provers)
    fail(ErrorKind::kInvalidStrategy, "prover count mismatch");
  if (strategy.message_width != circuit.message_width())
    fail(ErrorKind::kInvalidStrategy,
         "strategy message width does not match the circuit");
  for (const ProtoGate& pg : circuit.gates)
    if (pg.is_prover &&
        pg.round > static_cast<int>(strategy.actions[pg.prover - 1].size()))
      fail(ErrorKind::kInvalidStrategy,
           "strategy lacks an action for prover " +
               std::to_string(pg.prover) + " round " +
               std::to_string(pg.round));

  int circuit_wires = circuit.num_wires();
  int total = circuit_wires + strategy.total_private();
  if (total > 62) fail(ErrorKind::kCapExceeded, "too many wires");

  // Private registers are appended after the circuit wires, prover by
  // prover.
  std::vector<int> private_base(static_cast<std::size_t>(circuit.provers));
  {
    int cursor = circuit_wires;
    for (int i = 0; i < circuit.provers; ++i) {
      private_base[i] = cursor;
      cursor += strategy.private_qubits[i];
    }
  }

  SparseState state(total);
  if (!strategy.initial_state.empty()) {
    // Strategy qubit order [M_1 .. M_k, P_1 .. P_k] -> global wires.
    std::vector<int> qubit_map;
    for (int i = 1; i <= circuit.provers; ++i)
      for (int w : circuit.message_wires(i)) qubit_map.push_back(w);
    for (int i = 0; i < circuit.provers; ++i)
      for (int p = 0; p < strategy.private_qubits[i]; ++p)
        qubit_map.push_back(private_base[i] + p);

    int logical = static_cast<int>(qubit_map.size());
    state = SparseState::zero_weight(total);
    for (std::size_t idx = 0; idx < strategy.initial_state.size(); ++idx) {
      const CQ2& a = strategy.initial_state[idx];
      if (a.is_zero()) continue;
      std::uint64_t basis = 0;
      for (int q = 0; q < logical; ++q)
        if (idx >> (logical - 1 - q) & 1)
          basis |= std::uint64_t{1} << (total - 1 - qubit_map[q]);
      state.set_amplitude(basis, a);
    }
  }

  for (const ProtoGate& pg : circuit.gates) {
    if (!pg.is_prover) {
      if (pg.gate.label != GateLabel::kI) state.apply(pg.gate);
      continue;
    }
    std::vector<int> local = circuit.message_wires(pg.prover);
    for (int p = 0; p < strategy.private_qubits[pg.prover - 1]; ++p)
      local.push_back(private_base[pg.prover - 1] + p);
    const ProverAction& action =
        strategy.actions[pg.prover - 1][pg.round - 1];
    if (!action.matrix.empty()) {
      state.apply_matrix(local, action.matrix);
    } else {
      for (const Gate& g : action.gates)
        state.apply(remap_gate(g, local));
    }
  }

  Q2 probability;
  int shift = total - 1 - circuit.output_qubit;
  for (const auto& [basis, amp] : state.amplitudes())
    if (basis >> shift & 1) probability = probability + amp.abs2();
  return probability;
}

}  // namespace qzk
