// Copyright 2026 The qzk Authors
// SPDX-License-Identifier: Apache-2.0
//
// Error taxonomy shared across the library. Every failure carries a machine
// checkable kind plus a human readable message; tests assert on the kind.

#pragma once

#include <stdexcept>
#include <string>

namespace qzk {

enum class ErrorKind {
  kOverflow,              // exact arithmetic left the representable range
  kDomain,                // argument outside an operation's documented domain
  kFormat,                // malformed text input (files, question strings, CLI)
  kUnsupportedGate,       // gate label not handled by the called engine
  kNonPauliConjugation,   // conjugation result would leave the Pauli group
  kInsufficientDistance,  // reduction asks for more qubits than hiding allows
  kCapExceeded,           // configured resource cap (qubits, support, terms) hit
  kInvalidQuestion,       // well-formed but semantically invalid question
  kInvalidStrategy,       // strategy file inconsistent with its circuit
  kInternal,              // invariant breakage; always a bug
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::kOverflow: return "Overflow";
    case ErrorKind::kDomain: return "Domain";
    case ErrorKind::kFormat: return "Format";
    case ErrorKind::kUnsupportedGate: return "UnsupportedGate";
    case ErrorKind::kNonPauliConjugation: return "NonPauliConjugation";
    case ErrorKind::kInsufficientDistance: return "InsufficientDistance";
    case ErrorKind::kCapExceeded: return "CapExceeded";
    case ErrorKind::kInvalidQuestion: return "InvalidQuestion";
    case ErrorKind::kInvalidStrategy: return "InvalidStrategy";
    case ErrorKind::kInternal: return "Internal";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

// Internal-invariant check that survives NDEBUG builds. Use for conditions
// that guard correctness of exact results rather than for input validation.
inline void check_internal(bool ok, const char* what) {
  if (!ok) fail(ErrorKind::kInternal, what);
}

}  // namespace qzk
