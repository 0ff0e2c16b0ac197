// Copyright 2026 The qzk Authors
// SPDX-License-Identifier: Apache-2.0
//
// Multiprover protocol circuits and their fault-tolerant robustification.
//
// A protocol circuit describes one run of a k-prover interactive proof as a
// straight-line quantum circuit over the verifier's registers.  The wire
// space is laid out as
//
//   [ V: verifier qubits v1..vn ]
//   [ per prover i: N_i (question/answer copies n<i>.1..n<i>.m),
//                   M_i (message qubits    m<i>.1..m<i>.m) ]
//
// and the circuit is split into five phases:
//
//   VOP1   verifier pre-processing on V and N (question preparation),
//   COPYQ  question copy, CNOTs from n<i>.j onto m<i>.j,
//   PROVER one opaque reflection per prover acting on M_i and the prover's
//          private register P_i (not a circuit wire; it lives with the
//          strategy),
//   COPYA  answer copy, CNOTs from m<i>.j onto n<i>.j,
//   VOP2   verifier post-processing on V and N; the decision ends up on v1,
//          the output qubit.
//
// Elementary gates are restricted to H, CNOT, Toffoli and explicit identity
// timesteps, so the total number of gates T doubles as a well-defined clock.
//
// robustify() rewrites a five-phase circuit over an inner stabilizer code:
// every wire becomes a code block, every elementary gate becomes its
// transversal or gadget-based encoded sequence, and two new phases appear —
// a Resource Generation prologue that encodes the verifier blocks and
// prepares the ancilla blocks consumed by Toffoli gadgets, and an Output
// Decoding epilogue that decodes the output block back to a single physical
// qubit.  Prover reflections stay single timesteps; wrap_strategy() supplies
// the matching strategy that decodes each message block, runs the original
// reflection, and re-encodes.
//
// circuit_value_fixed_strategy() computes the exact acceptance probability
// (output qubit measured as 1) for one fixed strategy; no optimisation over
// strategies happens here.

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qzk/circuit.hpp"
#include "qzk/oracle.hpp"
#include "qzk/ring.hpp"
#include "qzk/stabilizer_code.hpp"

namespace qzk {

// Phases of a protocol circuit, in execution order.  Five-phase (logical)
// circuits leave kResourceGeneration and kOutputDecoding empty; robustified
// (physical) circuits use all seven.
enum class ProtocolPhase {
  kResourceGeneration = 0,
  kVerifierOp1 = 1,
  kCopyQuestion = 2,
  kProverOp = 3,
  kCopyAnswer = 4,
  kVerifierOp2 = 5,
  kOutputDecoding = 6,
};

constexpr int kNumProtocolPhases = 7;

// Printable phase marker ("RESGEN", "VOP1", ...).
const char* phase_name(ProtocolPhase phase);

// One timestep of a protocol circuit: either an elementary gate or an opaque
// prover reflection (prover/round are 1-based, matching the file format).
struct ProtoGate {
  bool is_prover = false;
  Gate gate = Gate(GateLabel::kI, {0});
  int prover = 0;
  int round = 0;

  static ProtoGate elementary(const Gate& g);
  static ProtoGate reflection(int prover, int round);
};

// Classification of timesteps in a robustified circuit.  Each micro-phase is
// a run of consecutive timesteps doing one unit of work (one block encoding,
// one encoded gate, one idle stretch); prover reflections count as logical
// operations of their own.  Idle runs are kept maximal; encoding and logical
// units stay separate so each micro-phase has bounded length.
struct MicroPhase {
  enum class Class {
    kIdling = 0,
    kResourceEncoding = 1,
    kLogicalOperation = 2,
    kOutputDecoding = 3,
  };
  Class cls = Class::kIdling;
  // Half-open timestep range [begin, end), 0-based gate indices.
  std::size_t begin = 0;
  std::size_t end = 0;

  // Unit metadata, filled in by robustify so consumers can reconstruct the
  // unit without parsing its gate list.  `blocks` lists the physical blocks
  // the unit works on, in operand order: the encoded block(s) for
  // kResourceEncoding (three entries for a joint magic-state preparation),
  // the logical operands followed by any gadget ancilla blocks for an
  // encoded gate, and the decoded block for kOutputDecoding.  `logical` is
  // the logical gate label of an encoded-gate unit; `prover` is nonzero
  // (1-based) exactly on reflection units.  Idle stretches leave all empty.
  std::vector<int> blocks;
  GateLabel logical = GateLabel::kI;
  int prover = 0;
};

const char* micro_phase_name(MicroPhase::Class cls);

struct MicroPhaseAnnotation {
  std::vector<MicroPhase> phases;
  // 1-based timesteps of the prover reflections, in occurrence order (one
  // entry per reflection; with one round per prover, entry i belongs to the
  // i-th prover that acts).
  std::vector<std::size_t> t_star;

  // Class of the timestep with 0-based index t.  Throws kDomain if t is not
  // covered by any micro-phase.
  MicroPhase::Class class_at(std::size_t t) const;
};

// A protocol circuit, logical (five-phase) or robustified (seven-phase,
// physical = true).  Logical circuits address wires through the register
// names v<j>, n<i>.<j>, m<i>.<j>; physical circuits address raw wires q<w>.
struct ProtocolCircuit {
  int verifier_qubits = 0;  // n
  int message_qubits = 0;   // m, per prover
  int provers = 0;          // k

  bool physical = false;
  int block_len = 1;    // inner code block length (physical circuits)
  int extra_wires = 0;  // ancilla wires appended after the data blocks
  int output_qubit = 0; // wire carrying the decoded decision bit

  std::vector<ProtoGate> gates;

  // Phase p spans gate indices [boundaries[p], boundaries[p+1]).
  std::array<std::size_t, kNumProtocolPhases + 1> boundaries{};

  // Present on robustified circuits.
  std::optional<MicroPhaseAnnotation> annotation;

  // Total number of circuit wires (excludes prover private registers).
  int num_wires() const;
  // Number of timesteps.
  std::size_t depth() const { return gates.size(); }

  // Wire indices, 1-based arguments.  For physical circuits these return the
  // first wire of the corresponding block.
  int wire_v(int j) const;
  int wire_n(int i, int j) const;
  int wire_m(int i, int j) const;

  // Width of one prover's message register (m, or m * block_len).
  int message_width() const;
  // The wires of prover i's message register, in register order.
  std::vector<int> message_wires(int i) const;

  ProtocolPhase phase_of(std::size_t gate_index) const;

  // Structural validation: phase ordering, register ranges, gate vocabulary
  // per phase, prover round ordering.  Throws Error on violation with the
  // offending gate index in the message.
  void validate() const;
};

// One prover reflection: a gate list (always exactly unitary) or an explicit
// matrix over the local register [M_i (message_width), P_i (private)].
// Local wire 0 is the first message qubit.  If `matrix` is nonempty it takes
// precedence over `gates`.
struct ProverAction {
  std::vector<Gate> gates;
  DenseMatrix matrix;
};

// A fixed strategy for all provers: private register sizes, one action per
// (prover, round), and a shared initial state over the concatenated register
// [M_1 .. M_k, P_1 .. P_k].  An empty initial_state means |0...0>.
struct ProverStrategy {
  int provers = 0;
  int message_width = 0;
  std::vector<int> private_qubits;
  std::vector<std::vector<ProverAction>> actions;  // [prover][round]
  std::vector<CQ2> initial_state;

  int private_width(int prover) const;  // 1-based
  int total_private() const;

  // Checks shapes, gate targets, exact unitarity of matrix actions, and
  // exact normalisation of the initial state.  Throws Error on failure.
  void validate() const;
};

// Parses the line-based circuit format.  Throws kFormat with a line number
// on syntax errors and kDomain on structural violations (e.g. a prover gate
// outside the PROVER phase reports a phase violation with its gate index).
// print_circuit() is its exact inverse: parse(print(c)) == c and
// print(parse(text)) == text for canonically formatted text.
ProtocolCircuit parse_circuit(const std::string& text);
std::string print_circuit(const ProtocolCircuit& circuit);

// Loads/saves the strategy file format (gate-list actions and basis initial
// states only; matrix actions and general amplitudes are programmatic).
ProverStrategy parse_strategy(const std::string& text);
std::string print_strategy(const ProverStrategy& strategy);

// Rewrites a five-phase logical circuit over the given inner code.
//   padding        identity timesteps inserted before and after every prover
//                  reflection, as a multiple of the code's block length;
//   gadget_copies  simulatability budget s of every Toffoli gadget (number
//                  of dephasing copies per data block).
// The result is a seven-phase physical circuit with a micro-phase
// annotation.  Requires the code to support the transversal gates involved;
// throws kUnsupportedGate otherwise.
ProtocolCircuit robustify(const ProtocolCircuit& circuit,
                          const StabilizerCode& code, int padding = 4,
                          int gadget_copies = 2);

// Adapts a strategy for the logical circuit to the robustified circuit:
// every reflection becomes decode-blocks / original action / re-encode, and
// the initial state is encoded block-wise on the message registers.
ProverStrategy wrap_strategy(const ProverStrategy& strategy,
                             const StabilizerCode& code);

// Exact probability that the output qubit measures 1 after running the
// circuit on |0...0> (verifier registers) joined with the strategy's initial
// state (message and private registers).  Uses the sparse state oracle;
// throws kCapExceeded if the support outgrows desk scale.
Q2 circuit_value_fixed_strategy(const ProtocolCircuit& circuit,
                                const ProverStrategy& strategy);

}  // namespace qzk
