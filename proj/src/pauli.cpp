// Copyright 2026 The qzk Authors
// SPDX-License-Identifier: Apache-2.0

#include "qzk/pauli.hpp"

#include <algorithm>

namespace qzk {

PauliOperator PauliOperator::from_letters(const std::string& letters) {
  PauliOperator p(static_cast<int>(letters.size()));
  for (size_t q = 0; q < letters.size(); ++q)
    p.set_letter(static_cast<int>(q), letters[q]);
  return p;
}

void PauliOperator::set_letter(int q, char letter) {
  if (q < 0 || q >= n_) fail(ErrorKind::kDomain, "qubit index out of range");
  // Remove the stored Y phase contribution before overwriting, then re-add.
  if (x_[q] && z_[q]) phase_ = mod4(phase_ - 1);
  switch (letter) {
    case 'I': x_[q] = 0; z_[q] = 0; break;
    case 'X': x_[q] = 1; z_[q] = 0; break;
    case 'Z': x_[q] = 0; z_[q] = 1; break;
    case 'Y':
      x_[q] = 1;
      z_[q] = 1;
      phase_ = mod4(phase_ + 1);  // Y = i * X Z
      break;
    default:
      fail(ErrorKind::kFormat, std::string("unknown Pauli letter '") + letter +
                                   "'");
  }
}

PauliOperator PauliOperator::parse(const std::string& text) {
  size_t pos = 0;
  int sign = 0;   // i-exponent from the sign prefix
  bool neg = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    neg = text[pos] == '-';
    ++pos;
  }
  if (pos < text.size() && text[pos] == 'i') {
    sign = 1;
    ++pos;
  }
  if (neg) sign = sign + 2;
  if (pos >= text.size())
    fail(ErrorKind::kFormat, "Pauli text has no letters: '" + text + "'");
  PauliOperator p = from_letters(text.substr(pos));
  p.multiply_phase_i(sign);
  return p;
}

std::string PauliOperator::str() const {
  int y_count = 0;
  for (int q = 0; q < n_; ++q) y_count += x_[q] & z_[q];
  int prefix = mod4(phase_ - y_count);
  std::string s;
  switch (prefix) {
    case 0: s = "+"; break;
    case 1: s = "+i"; break;
    case 2: s = "-"; break;
    case 3: s = "-i"; break;
  }
  for (int q = 0; q < n_; ++q) s += letter(q);
  return s;
}

PauliOperator PauliOperator::embed(int num_qubits,
                                   const std::vector<int>& positions) const {
  if (static_cast<int>(positions.size()) != n_)
    fail(ErrorKind::kDomain, "embed position list size mismatch");
  PauliOperator r(num_qubits);
  for (int q = 0; q < n_; ++q) {
    int at = positions[q];
    if (at < 0 || at >= num_qubits)
      fail(ErrorKind::kDomain, "embed position out of range");
    if (r.x_[at] | r.z_[at])
      fail(ErrorKind::kDomain, "embed positions must be distinct");
    r.x_[at] = x_[q];
    r.z_[at] = z_[q];
  }
  r.phase_ = phase_;
  return r;
}

PauliOperator PauliOperator::restrict_to(
    const std::vector<int>& positions) const {
  std::vector<std::uint8_t> keep(n_, 0);
  PauliOperator r(static_cast<int>(positions.size()));
  for (size_t j = 0; j < positions.size(); ++j) {
    int q = positions[j];
    if (q < 0 || q >= n_) fail(ErrorKind::kDomain, "restrict position range");
    keep[q] = 1;
    r.x_[j] = x_[q];
    r.z_[j] = z_[q];
  }
  for (int q = 0; q < n_; ++q)
    if (!keep[q] && (x_[q] | z_[q]))
      fail(ErrorKind::kDomain, "operator not identity outside restriction");
  r.phase_ = phase_;
  return r;
}

namespace {

// In-place conjugation rules. Phase corrections were pinned against the
// dense matrix oracle over every 1- and 2-qubit Pauli (see tests).
void conjugate_in_place(std::vector<std::uint8_t>& x,
                        std::vector<std::uint8_t>& z, int& phase,
                        const Gate& gate, const PauliOperator& original) {
  auto add_phase = [&phase](int e) { phase = ((phase + e) % 4 + 4) % 4; };
  switch (gate.label) {
    case GateLabel::kI:
      return;
    case GateLabel::kX: {
      int q = gate.qubits[0];
      add_phase(2 * z[q]);
      return;
    }
    case GateLabel::kZ: {
      int q = gate.qubits[0];
      add_phase(2 * x[q]);
      return;
    }
    case GateLabel::kH: {
      int q = gate.qubits[0];
      add_phase(2 * (x[q] & z[q]));
      std::swap(x[q], z[q]);
      return;
    }
    case GateLabel::kSWAP: {
      int a = gate.qubits[0], b = gate.qubits[1];
      std::swap(x[a], x[b]);
      std::swap(z[a], z[b]);
      return;
    }
    case GateLabel::kCNOT: {
      // X_c -> X_c X_t, Z_t -> Z_c Z_t, X_t and Z_c fixed. In the raw
      // i^phase * prod X^x Z^z representation the image needs no reorder
      // sign: the control collects only Z factors and the target only X
      // factors, so each qubit stays in canonical X-before-Z order.
      int c = gate.qubits[0], t = gate.qubits[1];
      x[t] ^= x[c];
      z[c] ^= z[t];
      return;
    }
    case GateLabel::kCZ: {
      int a = gate.qubits[0], b = gate.qubits[1];
      if (x[a] & x[b]) add_phase(2);
      z[a] ^= x[b];
      z[b] ^= x[a];
      return;
    }
    case GateLabel::kCH: {
      int c = gate.qubits[0], t = gate.qubits[1];
      if ((x[t] | z[t]) || x[c])
        fail(ErrorKind::kNonPauliConjugation,
             "controlled-H conjugation of " + original.str() +
                 " leaves the Pauli group");
      return;  // target I, control in {I, Z}: fixed point
    }
    case GateLabel::kCCZ: {
      for (int q : gate.qubits)
        if (x[q])
          fail(ErrorKind::kNonPauliConjugation,
               "CCZ conjugation of " + original.str() +
                   " leaves the Pauli group");
      return;  // diagonal Paulis commute with diagonal gates
    }
    case GateLabel::kCCX: {
      int a = gate.qubits[0], b = gate.qubits[1], t = gate.qubits[2];
      if (x[a] || x[b] || z[t])
        fail(ErrorKind::kNonPauliConjugation,
             "CCX conjugation of " + original.str() +
                 " leaves the Pauli group");
      return;  // control Z's and target X commute with CCX
    }
  }
  fail(ErrorKind::kUnsupportedGate, "conjugation by unknown gate");
}

}  // namespace

PauliOperator conjugate_pauli(const PauliOperator& p, const Gate& gate) {
  for (int q : gate.qubits)
    if (q < 0 || q >= p.num_qubits())
      fail(ErrorKind::kDomain, "gate qubit outside operator");
  std::vector<std::uint8_t> x = p.x_bits();
  std::vector<std::uint8_t> z = p.z_bits();
  int phase = p.phase_exponent();
  conjugate_in_place(x, z, phase, gate, p);
  return PauliOperator::from_bits(std::move(x), std::move(z), phase);
}

PauliOperator conjugate_pauli(const PauliOperator& p,
                              const std::vector<Gate>& circuit) {
  std::vector<std::uint8_t> x = p.x_bits();
  std::vector<std::uint8_t> z = p.z_bits();
  int phase = p.phase_exponent();
  for (const Gate& g : circuit) {
    for (int q : g.qubits)
      if (q < 0 || q >= p.num_qubits())
        fail(ErrorKind::kDomain, "gate qubit outside operator");
    conjugate_in_place(x, z, phase, g, p);
  }
  return PauliOperator::from_bits(std::move(x), std::move(z), phase);
}

}  // namespace qzk
