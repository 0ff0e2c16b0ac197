// Copyright 2026 The qzk Authors
// SPDX-License-Identifier: Apache-2.0
//
// Stabilizer codes with one logical qubit, their encoders, and the exact
// trace machinery built on a canonical tableau.
//
// A code is given by n-1 commuting Hermitian generators plus anticommuting
// logical X/Z representatives. Construction synthesizes an encoder circuit
// (CSS codes only — every code in this project is CSS), then derives a
// canonical tableau by conjugating the trivial tableau through the encoder:
//   stab_i    = E Z_{q_i} E^dag   (q_i ranges over the non-input wires)
//   destab_i  = E X_{q_i} E^dag
//   logical X = E X_in E^dag,  logical Z = E Z_in E^dag
// Any Pauli P then decomposes uniquely as
//   P = i^delta * prod destab^{a_i} * prod stab^{b_i} * LX^x * LZ^z
// with exponents read off by anticommutation. Everything else — membership,
// codespace traces, logical actions, reduced densities — is a corollary.

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qzk/circuit.hpp"
#include "qzk/oracle.hpp"
#include "qzk/pauli.hpp"

namespace qzk {

class StabilizerCode {
 public:
  // Validates and canonicalizes. Errors kDomain on: non-Hermitian or
  // non-commuting generators, wrong generator count, dependent generators,
  // bad logicals, or non-CSS letter patterns (the encoder synthesis needs
  // X-type and Z-type generators). Generator signs may be -1; the encoder
  // picks up a Pauli correction so the encoded space matches the signs.
  static StabilizerCode create(std::string name, int num_physical, int distance,
                               std::vector<PauliOperator> generators,
                               PauliOperator logical_x,
                               PauliOperator logical_z);

  // [[1,1,1]] identity encoding: no generators, logical = physical. Lets
  // encoded-gate machinery run unencoded for direct oracle comparison.
  static const StabilizerCode& trivial();

  // [[7,1,3]] self-dual CSS code (the workhorse inner code).
  static const StabilizerCode& steane();
  // [[4,1,2]] erasure-style outer code used for share distribution.
  static const StabilizerCode& outer_four();
  // [[7^levels, 1, 3^levels]] concatenation of the seven-qubit code.
  // levels in [1, 3]; higher levels are refused (kCapExceeded).
  static StabilizerCode concatenated_steane(int levels);

  const std::string& name() const { return name_; }
  int num_physical() const { return n_; }
  int distance() const { return distance_; }
  // Generators exactly as supplied (used for files and reports).
  const std::vector<PauliOperator>& generators() const { return gens_; }
  const PauliOperator& logical_x() const { return logical_x_; }
  const PauliOperator& logical_z() const { return logical_z_; }
  // True when some generator has weight below the distance (a sufficient
  // condition for degeneracy; concatenations at level >= 2 trip it).
  bool degenerate_flagged() const { return degenerate_; }

  // Canonical tableau (see file header). Pairing: destabilizer(i)
  // anticommutes with stabilizer(i) only.
  const std::vector<PauliOperator>& canonical_stabilizers() const {
    return canon_stab_;
  }
  const std::vector<PauliOperator>& canonical_destabilizers() const {
    return canon_destab_;
  }
  // Canonical logical representatives (may differ from the declared ones
  // by a stabilizer factor; these are the ones paired with the tableau).
  const PauliOperator& canonical_logical_x() const { return canon_lx_; }
  const PauliOperator& canonical_logical_z() const { return canon_lz_; }

  // Encoder circuit on the block (0-based wire indices); logical input
  // enters on wire input_qubit(), all other wires start |0>.
  const std::vector<Gate>& encoder() const { return encoder_; }
  std::vector<Gate> decoder() const;  // reversed encoder (all gates involutive)
  int input_qubit() const { return input_qubit_; }

  struct Decomposition {
    std::vector<std::uint8_t> destab_exp;  // any 1 => outside the normalizer
    std::vector<std::uint8_t> stab_exp;
    std::uint8_t x_exp = 0, z_exp = 0;     // logical content
    int phase_delta = 0;                   // i-exponent of the leftover scalar
  };
  Decomposition decompose(const PauliOperator& p) const;

  enum class Membership {
    kInStabilizerGroup,        // letters equal a generator product
    kLogicalNotStabilizer,     // in the normalizer with logical content
    kOutsideNormalizer,        // anticommutes with some stabilizer
  };
  // Letter-level membership; signs surface through the trace functions.
  Membership classify(const PauliOperator& p) const;

  // Restriction of P to the code's logical qubit: E^dag P E as a 1-qubit
  // Pauli with exact phase, or nullopt when P is outside the normalizer
  // (E^dag P E = 0 on the codespace).
  std::optional<PauliOperator> logical_action(const PauliOperator& p) const;

  struct TraceResult {
    enum class Kind { kZero, kScalar, kLogicalDependent } kind;
    CQ2 scalar;  // set for kScalar: Tr(Enc(rho) P) = scalar for every rho
  };
  // The universal codespace trace law: 0 outside the normalizer, a fixed
  // +-1 (times i for non-Hermitian inputs) on the stabilizer group, and
  // state-dependent exactly on logical operators.
  TraceResult codeword_pauli_trace(const PauliOperator& p) const;

  // Tr(Enc(sigma) P) for a known 2x2 logical density sigma.
  CQ2 known_state_trace(const DenseMatrix& sigma, const PauliOperator& p) const;

  // Reduced density of Enc(rho) on the wires `qubits` (0-based in-block),
  // valid for every logical rho. Requires |qubits| < distance
  // (kInsufficientDistance otherwise) — that is the hiding bound.
  DenseMatrix reduced_codeword_density(const std::vector<int>& qubits) const;

  // Reduced density of Enc(sigma) on `qubits` for known sigma; no distance
  // cap (cost 4^|qubits| decompositions).
  DenseMatrix reduced_known_density(const std::vector<int>& qubits,
                                    const DenseMatrix& sigma) const;

  // Text form: header [[n,k,d]], one generator per line, then LOGICAL_X and
  // LOGICAL_Z lines. parse(print(code)) reproduces the code exactly.
  std::string to_file_text() const;
  static StabilizerCode from_file_text(const std::string& text);

 private:
  StabilizerCode() = default;

  std::string name_;
  int n_ = 0;
  int distance_ = 0;
  bool degenerate_ = false;
  std::vector<PauliOperator> gens_;
  PauliOperator logical_x_, logical_z_;
  std::vector<Gate> encoder_;
  int input_qubit_ = 0;
  std::vector<PauliOperator> canon_stab_, canon_destab_;
  PauliOperator canon_lx_, canon_lz_;
};

// A block of physical wires in a larger register, encoded with `code`.
// `qubits[j]` is the global index of the block's j-th wire.
struct BlockRef {
  const StabilizerCode* code = nullptr;
  std::vector<int> qubits;
};

// Tr( (Enc_1 x ... x Enc_m)(sigma) * P ) for m blocks holding the joint
// m-qubit logical density sigma (2^m square). P is given on the global
// register and must be identity outside the blocks.
CQ2 encoded_blocks_trace(const std::vector<BlockRef>& blocks,
                         const DenseMatrix& sigma, const PauliOperator& p);

// Reduced density of (Enc x ... x Enc)(sigma) on the global qubit list
// `targets`, each of which must lie inside one of the blocks.
DenseMatrix reduced_encoded_blocks_density(const std::vector<BlockRef>& blocks,
                                           const DenseMatrix& sigma,
                                           const std::vector<int>& targets,
                                           int num_global_qubits);

}  // namespace qzk
