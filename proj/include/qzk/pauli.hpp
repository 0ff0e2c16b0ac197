// Copyright 2026 The qzk Authors
// SPDX-License-Identifier: Apache-2.0
//
// Pauli operators in symplectic form with exact phase tracking.
//
// Representation: matrix(P) = i^phase * prod_j X^{x_j} Z^{z_j} (tensor order
// qubit 0 leftmost / most significant). The letter Y is stored as x=z=1 with
// one extra factor of i folded into the phase, so X*Z = -i*Y holds exactly.
// All products, adjoints, and Clifford conjugations track the i-exponent; no
// operation here is "up to phase".

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qzk/circuit.hpp"
#include "qzk/error.hpp"
#include "qzk/ring.hpp"

namespace qzk {

class PauliOperator {
 public:
  PauliOperator() : n_(0), phase_(0) {}
  explicit PauliOperator(int num_qubits)
      : n_(num_qubits), x_(num_qubits, 0), z_(num_qubits, 0), phase_(0) {
    if (num_qubits < 0) fail(ErrorKind::kDomain, "negative qubit count");
  }

  static PauliOperator identity(int num_qubits) {
    return PauliOperator(num_qubits);
  }

  // Builds from letters 'I','X','Y','Z'; phase prefix starts at i^0.
  static PauliOperator from_letters(const std::string& letters);

  // Raw constructor: matrix = i^phase_exponent * prod X^{x} Z^{z}.
  static PauliOperator from_bits(std::vector<std::uint8_t> x,
                                 std::vector<std::uint8_t> z,
                                 int phase_exponent) {
    check_internal(x.size() == z.size(), "from_bits size mismatch");
    PauliOperator p(static_cast<int>(x.size()));
    p.x_ = std::move(x);
    p.z_ = std::move(z);
    p.phase_ = mod4(phase_exponent);
    return p;
  }

  // Parses the text form: optional sign prefix in {+, -, +i, -i, i} followed
  // by one letter per qubit, e.g. "-iXZIY". Errors kFormat.
  static PauliOperator parse(const std::string& text);

  // Canonical text form: sign prefix in {+, -, +i, -i} then letters.
  std::string str() const;

  int num_qubits() const { return n_; }
  bool x_bit(int q) const { return x_[q] != 0; }
  bool z_bit(int q) const { return z_[q] != 0; }
  const std::vector<std::uint8_t>& x_bits() const { return x_; }
  const std::vector<std::uint8_t>& z_bits() const { return z_; }

  // i-exponent of the stored phase, mod 4.
  int phase_exponent() const { return phase_; }
  void multiply_phase_i(int exponent) { phase_ = mod4(phase_ + exponent); }

  // Letter at qubit q ignoring phase: I, X, Y, or Z.
  char letter(int q) const {
    static const char kLetters[4] = {'I', 'X', 'Z', 'Y'};
    return kLetters[(x_[q] ? 1 : 0) | (z_[q] ? 2 : 0)];
  }
  void set_letter(int q, char letter);

  int weight() const {
    int w = 0;
    for (int q = 0; q < n_; ++q) w += (x_[q] | z_[q]) ? 1 : 0;
    return w;
  }
  bool is_identity() const { return weight() == 0 && phase_ == 0; }
  bool is_identity_up_to_phase() const { return weight() == 0; }

  bool commutes_with(const PauliOperator& other) const {
    check_internal(n_ == other.n_, "Pauli size mismatch in commutes_with");
    int acc = 0;
    for (int q = 0; q < n_; ++q)
      acc ^= (x_[q] & other.z_[q]) ^ (z_[q] & other.x_[q]);
    return acc == 0;
  }

  friend PauliOperator operator*(const PauliOperator& a,
                                 const PauliOperator& b) {
    check_internal(a.n_ == b.n_, "Pauli size mismatch in product");
    PauliOperator r(a.n_);
    int extra = 0;
    for (int q = 0; q < a.n_; ++q) {
      extra += 2 * (a.z_[q] & b.x_[q]);  // Z X = -X Z per qubit
      r.x_[q] = a.x_[q] ^ b.x_[q];
      r.z_[q] = a.z_[q] ^ b.z_[q];
    }
    r.phase_ = mod4(a.phase_ + b.phase_ + extra);
    return r;
  }

  PauliOperator dagger() const {
    PauliOperator r = *this;
    int xz = 0;
    for (int q = 0; q < n_; ++q) xz += x_[q] & z_[q];
    r.phase_ = mod4(-phase_ + 2 * xz);
    return r;
  }

  bool is_hermitian() const {
    int y_count = 0;
    for (int q = 0; q < n_; ++q) y_count += x_[q] & z_[q];
    return mod4(phase_ - y_count) % 2 == 0;
  }

  // Scalar i^phase as an exact ring element (letters contribute separately).
  CQ2 phase_value() const { return CQ2::i_pow(phase_); }

  // Exact equality including phase.
  friend bool operator==(const PauliOperator& a, const PauliOperator& b) {
    return a.n_ == b.n_ && a.phase_ == b.phase_ && a.x_ == b.x_ && a.z_ == b.z_;
  }
  friend bool operator!=(const PauliOperator& a, const PauliOperator& b) {
    return !(a == b);
  }
  bool equal_up_to_phase(const PauliOperator& b) const {
    return n_ == b.n_ && x_ == b.x_ && z_ == b.z_;
  }

  PauliOperator tensor(const PauliOperator& other) const {
    PauliOperator r(n_ + other.n_);
    for (int q = 0; q < n_; ++q) {
      r.x_[q] = x_[q];
      r.z_[q] = z_[q];
    }
    for (int q = 0; q < other.n_; ++q) {
      r.x_[n_ + q] = other.x_[q];
      r.z_[n_ + q] = other.z_[q];
    }
    r.phase_ = mod4(phase_ + other.phase_);
    return r;
  }

  // Places this operator's qubit j at position `positions[j]` of a fresh
  // identity on `num_qubits` qubits (the block-embedding map). Positions must
  // be distinct and in range.
  PauliOperator embed(int num_qubits, const std::vector<int>& positions) const;

  // Inverse of embed: keeps only `positions`, requiring identity elsewhere
  // (errors kDomain otherwise). Phase is preserved.
  PauliOperator restrict_to(const std::vector<int>& positions) const;

  // List of qubits carrying a non-identity letter.
  std::vector<int> support() const {
    std::vector<int> s;
    for (int q = 0; q < n_; ++q)
      if (x_[q] | z_[q]) s.push_back(q);
    return s;
  }

 private:
  static int mod4(int v) { return ((v % 4) + 4) % 4; }

  int n_;
  std::vector<std::uint8_t> x_;
  std::vector<std::uint8_t> z_;
  int phase_;  // i-exponent, always in {0,1,2,3}
};

// Conjugation U P U^dagger for the gate vocabulary. Exact phases, loud
// failure (kNonPauliConjugation) when the gate is not Clifford and the
// operator falls outside the closed cases:
//   CH : target letter I and control letter in {I, Z}  -> unchanged
//   CCZ: all three letters in {I, Z}                   -> unchanged
//   CCX: control letters in {I, Z}, target in {I, X}   -> unchanged
PauliOperator conjugate_pauli(const PauliOperator& p, const Gate& gate);

// Conjugation by a whole circuit: g_k ... g_1 P g_1^dag ... g_k^dag.
PauliOperator conjugate_pauli(const PauliOperator& p,
                              const std::vector<Gate>& circuit);

}  // namespace qzk
