// Copyright 2026 The qzk Authors
// SPDX-License-Identifier: Apache-2.0
//
// Brute-force reference engines. Everything clever in this library is tested
// against one of these three:
//
//   DenseState        — full state vector, exact CQ2 amplitudes, small caps.
//   SparseState       — hash map of basis amplitudes; exact; suited to states
//                       whose support stays polynomial (codewords, branches).
//   StabilizerTableau — generator/destabilizer rows with exact signs; covers
//                       Clifford circuits of a few hundred qubits and yields
//                       reduced densities through Pauli expectations.
//
// The engines share the Gate vocabulary and the qubit convention: qubit 0 is
// the most significant bit of a basis index.

#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "qzk/circuit.hpp"
#include "qzk/pauli.hpp"
#include "qzk/ring.hpp"

namespace qzk {

// Row-major square matrix with exact entries; dimension 2^k for k qubits.
using DenseMatrix = std::vector<CQ2>;

// Unitary matrix of a named gate, dimension 2^arity.
DenseMatrix gate_matrix(GateLabel label);

// Dense matrix of a Pauli operator (dimension 2^n; keep n small).
DenseMatrix pauli_dense(const PauliOperator& p);

DenseMatrix dense_multiply(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix dense_adjoint(const DenseMatrix& a);
DenseMatrix dense_tensor(const DenseMatrix& a, const DenseMatrix& b);
CQ2 dense_trace(const DenseMatrix& a);

// ---------------------------------------------------------------------------

class DenseState {
 public:
  // |basis> on n qubits. Errors kCapExceeded above the qubit cap.
  explicit DenseState(int num_qubits, std::uint64_t basis = 0,
                      int qubit_cap = kDefaultQubitCap);

  static DenseState from_amplitudes(int num_qubits, std::vector<CQ2> amps);

  int num_qubits() const { return n_; }
  std::uint64_t dimension() const { return std::uint64_t{1} << n_; }
  const CQ2& amplitude(std::uint64_t index) const { return amp_[index]; }
  CQ2& amplitude(std::uint64_t index) { return amp_[index]; }

  void apply(const Gate& gate);
  void apply(const std::vector<Gate>& circuit);
  void apply_pauli(const PauliOperator& p);
  // mat is 2^k x 2^k row-major acting on the ordered qubit list.
  void apply_matrix(const std::vector<int>& qubits, const DenseMatrix& mat);

  Q2 norm2() const;
  CQ2 expectation(const PauliOperator& p) const;  // <psi|P|psi>

  // Reduced density of |psi><psi| on the ordered qubit list Y (not
  // normalized beyond the state itself).
  DenseMatrix reduced_density(const std::vector<int>& y) const;

  static constexpr int kDefaultQubitCap = 22;

 private:
  int bit_pos(int qubit) const { return n_ - 1 - qubit; }
  int n_;
  std::vector<CQ2> amp_;
};

// <a|b> with conjugation on a.
CQ2 inner_product(const DenseState& a, const DenseState& b);

// ---------------------------------------------------------------------------

class SparseState {
 public:
  using Map = std::unordered_map<std::uint64_t, CQ2>;

  explicit SparseState(int num_qubits, std::uint64_t basis = 0,
                       std::size_t support_cap = kDefaultSupportCap);
  static SparseState zero_weight(int num_qubits,
                                 std::size_t support_cap = kDefaultSupportCap);

  int num_qubits() const { return n_; }
  const Map& amplitudes() const { return amp_; }
  std::size_t support_size() const { return amp_.size(); }
  void set_amplitude(std::uint64_t basis, const CQ2& v);
  CQ2 amplitude(std::uint64_t basis) const;

  void apply(const Gate& gate);
  void apply(const std::vector<Gate>& circuit);
  void apply_pauli(const PauliOperator& p);
  // Small explicit matrix on the ordered qubit list (support may grow 2^k).
  void apply_matrix(const std::vector<int>& qubits, const DenseMatrix& mat);

  Q2 norm2() const;
  CQ2 expectation(const PauliOperator& p) const;
  DenseMatrix reduced_density(const std::vector<int>& y) const;

  friend CQ2 inner_product(const SparseState& a, const SparseState& b);

  static constexpr std::size_t kDefaultSupportCap = std::size_t{1} << 22;

 private:
  int bit_pos(int qubit) const { return n_ - 1 - qubit; }
  void prune_and_check();
  int n_;
  std::size_t cap_;
  Map amp_;
};

// ---------------------------------------------------------------------------

class StabilizerTableau {
 public:
  // |0...0>: stabilizers Z_i, destabilizers X_i.
  explicit StabilizerTableau(int num_qubits);

  int num_qubits() const { return n_; }

  // Clifford labels only; others error kUnsupportedGate.
  void apply(const Gate& gate);
  void apply(const std::vector<Gate>& circuit);

  // <w> for the stabilized state: +1/-1 if w is in the signed stabilizer
  // group, 0 if w anticommutes with some generator, and i^k phases surface
  // exactly (non-Hermitian w are legal inputs).
  CQ2 expectation(const PauliOperator& w) const;

  // Reduced density on Y via 2^-|Y| sum of Pauli expectations. |Y| stays
  // desk-sized (cost 4^|Y| membership solves).
  DenseMatrix reduced_density(const std::vector<int>& y) const;

  const PauliOperator& stabilizer(int i) const { return stab_[i]; }
  const PauliOperator& destabilizer(int i) const { return destab_[i]; }

 private:
  int n_;
  std::vector<PauliOperator> stab_;
  std::vector<PauliOperator> destab_;
};

}  // namespace qzk
