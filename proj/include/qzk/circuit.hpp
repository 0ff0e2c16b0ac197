// Copyright 2026 The qzk Authors
// SPDX-License-Identifier: Apache-2.0
//
// Shared gate vocabulary. A Gate is a named unitary applied to an ordered
// list of qubit indices (0-based internally; all file formats are 1-based).
// Composite operations (prover actions, encoders, gadgets) are plain vectors
// of Gate, so every engine consumes one representation.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qzk/error.hpp"

namespace qzk {

enum class GateLabel {
  kI,     // explicit idle step (1 qubit, conventionally qubit 0)
  kH,     // Hadamard (1)
  kX,     // Pauli X (1)
  kZ,     // Pauli Z (1)
  kCNOT,  // controlled-X: (control, target)
  kCZ,    // controlled-Z: symmetric (a, b)
  kSWAP,  // swap (a, b)
  kCH,    // controlled-Hadamard: (control, target)
  kCCX,   // doubly controlled X: (control, control, target)
  kCCZ,   // doubly controlled Z: symmetric (a, b, c)
};

inline int gate_arity(GateLabel label) {
  switch (label) {
    case GateLabel::kI:
    case GateLabel::kH:
    case GateLabel::kX:
    case GateLabel::kZ:
      return 1;
    case GateLabel::kCNOT:
    case GateLabel::kCZ:
    case GateLabel::kSWAP:
    case GateLabel::kCH:
      return 2;
    case GateLabel::kCCX:
    case GateLabel::kCCZ:
      return 3;
  }
  return 0;
}

inline const char* gate_name(GateLabel label) {
  switch (label) {
    case GateLabel::kI: return "I";
    case GateLabel::kH: return "H";
    case GateLabel::kX: return "X";
    case GateLabel::kZ: return "Z";
    case GateLabel::kCNOT: return "CNOT";
    case GateLabel::kCZ: return "CZ";
    case GateLabel::kSWAP: return "SWAP";
    case GateLabel::kCH: return "CH";
    case GateLabel::kCCX: return "CCX";
    case GateLabel::kCCZ: return "CCZ";
  }
  return "?";
}

struct Gate {
  GateLabel label = GateLabel::kI;
  std::vector<int> qubits;

  Gate() = default;
  Gate(GateLabel l, std::vector<int> q) : label(l), qubits(std::move(q)) {
    if (static_cast<int>(qubits.size()) != gate_arity(l))
      fail(ErrorKind::kDomain, std::string("gate ") + gate_name(l) +
                                   " given wrong number of qubits");
    for (size_t i = 0; i < qubits.size(); ++i)
      for (size_t j = i + 1; j < qubits.size(); ++j)
        if (qubits[i] == qubits[j])
          fail(ErrorKind::kDomain, "gate qubits must be distinct");
  }

  bool touches(int q) const {
    for (int g : qubits)
      if (g == q) return true;
    return false;
  }
};

// True when conjugation by the gate maps every Pauli to a Pauli.
inline bool gate_is_clifford(GateLabel label) {
  switch (label) {
    case GateLabel::kI:
    case GateLabel::kH:
    case GateLabel::kX:
    case GateLabel::kZ:
    case GateLabel::kCNOT:
    case GateLabel::kCZ:
    case GateLabel::kSWAP:
      return true;
    default:
      return false;
  }
}

// Remaps gate qubit indices through `map` (old index -> new index).
inline Gate remap_gate(const Gate& g, const std::vector<int>& map) {
  std::vector<int> q;
  q.reserve(g.qubits.size());
  for (int old : g.qubits) {
    if (old < 0 || old >= static_cast<int>(map.size()))
      fail(ErrorKind::kDomain, "gate qubit outside remap table");
    q.push_back(map[old]);
  }
  return Gate(g.label, std::move(q));
}

}  // namespace qzk
