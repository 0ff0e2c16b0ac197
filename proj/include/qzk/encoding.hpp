// Copyright 2026 The qzk Authors
// SPDX-License-Identifier: Apache-2.0
//
// Encoded logical gates and the prefix-trace engine.
//
// A logical H or CNOT lifts to one transversal gate per block wire. The
// Toffoli is realized by a measurement-free gadget: an entangling layer
// against a magic-state resource, coherent copies of the measured blocks
// into fresh ancilla blocks, and correction unitaries applied once per
// physical wire of the measured block (order consistency of the code makes
// the wire-controlled product act as the logical-bit-controlled correction).
//
// The prefix-trace engine computes reduced densities of any gate-sequence
// prefix applied to Enc(rho) x ancillas WITHOUT knowing rho: each Pauli
// basis element of the target region is conjugated backward through the
// prefix (single image through Clifford gates; an exact Pauli-combination
// expansion through the controlled corrections), then traced against the
// initial region structure. Unknown logical content is tracked as an exact
// operator on the logical space; only proportional-to-identity results are
// emitted, anything else fails loudly.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qzk/circuit.hpp"
#include "qzk/oracle.hpp"
#include "qzk/pauli.hpp"
#include "qzk/stabilizer_code.hpp"

namespace qzk {

// ---------------------------------------------------------------------------
// Exact Pauli combinations and backward conjugation

struct PauliTerm {
  CQ2 coeff;
  PauliOperator op;
};
using PauliCombination = std::vector<PauliTerm>;

// Exact expansion of a dense operator in the Pauli letter basis
// (coefficients Tr(P M) / 2^n); zero-coefficient words are dropped.
PauliCombination pauli_expand(const DenseMatrix& m, int num_qubits);

// g P g for one involutive gate (all supported gates square to identity):
// a single image for Clifford gates, an exact expansion otherwise.
PauliCombination conjugate_term(const PauliTerm& term, const Gate& gate);

// (G_1 ... G_t)^dag P (G_1 ... G_t) for P a combination and the G_i the
// given prefix: conjugates by the gates in reverse order, merging like
// terms after each step. Errors kCapExceeded past term_cap terms.
PauliCombination conjugate_backward(PauliCombination terms,
                                    const std::vector<Gate>& prefix,
                                    std::size_t term_cap = 1u << 15);

// ---------------------------------------------------------------------------
// Register regions: who owns which wires, and what is known about them

struct RegisterRegion {
  enum class Kind {
    kUnknownLogical,  // encoded blocks holding an arbitrary joint state
    kKnownLogical,    // encoded blocks holding the joint density `sigma`
  };
  Kind kind = Kind::kKnownLogical;
  std::vector<BlockRef> blocks;  // wire lists are global register indices
  DenseMatrix sigma;             // kKnownLogical only; 2^m square, m = #blocks
};

// Exact value of Tr(state * sum_terms) where `state` is the product of the
// region states. Unknown regions contribute symbolically: the result is an
// operator on the joint unknown logical space (unknown regions in listing
// order), reported as a dense matrix. A multiple of the identity means the
// value is independent of the unknown states.
struct SymbolicTrace {
  int unknown_qubits = 0;
  DenseMatrix logical_matrix;  // 2^u x 2^u with u = unknown_qubits
  // True iff the matrix is c * identity; writes c when asked.
  bool proportional_to_identity(CQ2* scalar_out = nullptr) const;
};
SymbolicTrace trace_against_regions(const std::vector<RegisterRegion>& regions,
                                    int num_qubits,
                                    const PauliCombination& terms);

// ---------------------------------------------------------------------------
// Encoded gate sequences

struct EncodedGateSequence {
  GateLabel logical = GateLabel::kI;  // kH, kCNOT, or kCCX
  std::vector<int> targets;           // logical qubit indices (reporting)
  const StabilizerCode* code = nullptr;
  int num_data_blocks = 0;
  int num_ancilla_blocks = 0;  // gadget: 3 magic + 3*copies ancilla blocks
  int copies = 0;              // gadget fan-out count s (0 for transversal)
  std::vector<Gate> gates;     // on local wires: data blocks, then ancillas
  std::size_t entangle_end = 0;  // gates[0, entangle_end) = entangling layer
  std::size_t fanout_end = 0;    // gates[entangle_end, fanout_end) = copies

  int block_len() const { return code->num_physical(); }
  int num_blocks() const { return num_data_blocks + num_ancilla_blocks; }
  int num_qubits() const { return num_blocks() * block_len(); }
  std::size_t length() const { return gates.size(); }
  // Local wires of block b (data blocks first).
  std::vector<int> block_wires(int b) const;
  // Largest target-set size the prefix-trace engine accepts: distance - 1
  // for transversal sequences, the copy count for the gadget.
  int budget() const;
  // Initial ancilla regions (known states): magic blocks + |0> blocks.
  std::vector<RegisterRegion> ancilla_input_regions() const;
  std::string ancilla_input_descriptor() const;
  std::string ancilla_output_descriptor() const;
};

// Transversal lift of a logical H (one target) or CNOT (two targets).
EncodedGateSequence transversal_encoding(const StabilizerCode& code,
                                         GateLabel logical,
                                         std::vector<int> targets);

// The Toffoli gadget on three data blocks with `copies` coherent copies of
// each measured block. Requires order consistency at order two.
EncodedGateSequence toffoli_gadget_encoding(const StabilizerCode& code,
                                            std::vector<int> targets,
                                            int copies);

// True iff every computational-basis string of Enc(|b>) has Hamming weight
// congruent to b modulo `order`. Order two is decided algebraically
// (Z^(x)n must act as exactly +Z on the logical qubit); other orders
// enumerate the codeword supports and error kCapExceeded when too large.
bool order_consistency_check(const StabilizerCode& code, int order);

// Reduced density on local wires `targets` of the state reached by the
// first `t` gates from Enc(rho) x ancillas, for every rho at once.
// Errors: kCapExceeded when |targets| exceeds the budget (or term blowup),
// kInsufficientDistance if the value would depend on rho, kDomain for bad
// wires or t out of range.
DenseMatrix simulate_prefix_trace(const EncodedGateSequence& enc,
                                  std::size_t t,
                                  const std::vector<int>& targets);

// Correction layer with the measured logical bits resolved classically:
// the fixed Clifford gates the gadget applies on branch (z1, z2, x3).
std::vector<Gate> toffoli_branch_corrections(const EncodedGateSequence& enc,
                                             int z1, int z2, int x3);

// ---------------------------------------------------------------------------
// Magic state helpers

// |Toffoli> = 1/2 (|000> + |010> + |100> + |111>) as amplitudes / density.
std::vector<CQ2> toffoli_magic_amplitudes();
DenseMatrix toffoli_magic_density();
// Preparation circuit from |000>: H, H, then a Toffoli.
std::vector<Gate> toffoli_magic_prep(int a, int b, int c);

// Timestep-annotated listing of a gate sequence for debugging.
std::string sequence_debug_text(const EncodedGateSequence& enc);

}  // namespace qzk
