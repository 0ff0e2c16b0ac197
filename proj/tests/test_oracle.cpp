// Copyright 2026 The qzk Authors
// SPDX-License-Identifier: Apache-2.0
//
// Cross-validation of the three reference engines. Dense is the semantic
// anchor; sparse and tableau must agree with it exactly on their shared
// domains (arbitrary circuits for sparse, Clifford circuits for tableau).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "qzk/oracle.hpp"

using namespace qzk;

namespace {

Gate random_gate(std::mt19937_64& rng, int n, bool clifford_only) {
  std::vector<GateLabel> pool = clifford_only
                                    ? std::vector<GateLabel>{GateLabel::kH,
                                                             GateLabel::kX,
                                                             GateLabel::kZ,
                                                             GateLabel::kCNOT,
                                                             GateLabel::kCZ,
                                                             GateLabel::kSWAP}
                                    : std::vector<GateLabel>{GateLabel::kH,
                                                             GateLabel::kX,
                                                             GateLabel::kZ,
                                                             GateLabel::kCNOT,
                                                             GateLabel::kCZ,
                                                             GateLabel::kSWAP,
                                                             GateLabel::kCH,
                                                             GateLabel::kCCX,
                                                             GateLabel::kCCZ};
  GateLabel label = pool[rng() % pool.size()];
  std::vector<int> qs;
  while (static_cast<int>(qs.size()) < gate_arity(label)) {
    int q = static_cast<int>(rng() % n);
    bool dup = false;
    for (int s : qs) dup |= (s == q);
    if (!dup) qs.push_back(q);
  }
  return Gate(label, qs);
}

PauliOperator random_pauli(std::mt19937_64& rng, int n) {
  static const char kAlphabet[4] = {'I', 'X', 'Y', 'Z'};
  std::string letters;
  for (int q = 0; q < n; ++q) letters += kAlphabet[rng() % 4];
  return PauliOperator::from_letters(letters);
}

}  // namespace

TEST_CASE("sparse equals dense on random circuits with all gate labels") {
  std::mt19937_64 rng(99);
  const int n = 6;
  for (int trial = 0; trial < 25; ++trial) {
    std::uint64_t start = rng() % (1u << n);
    DenseState dense(n, start);
    SparseState sparse(n, start);
    for (int step = 0; step < 20; ++step) {
      Gate g = random_gate(rng, n, false);
      dense.apply(g);
      sparse.apply(g);
    }
    for (std::uint64_t idx = 0; idx < dense.dimension(); ++idx)
      CHECK(dense.amplitude(idx) == sparse.amplitude(idx));
    CHECK(dense.norm2() == Q2(1));
    CHECK(sparse.norm2() == Q2(1));
    PauliOperator p = random_pauli(rng, n);
    CHECK(dense.expectation(p) == sparse.expectation(p));
    std::vector<int> y{1, 4, 5};
    CHECK(dense.reduced_density(y) == sparse.reduced_density(y));
  }
}

TEST_CASE("sparse support stays pruned after exact cancellation") {
  // H then H returns to a basis state; stale zeros must disappear.
  SparseState s(3, 0b101);
  s.apply(Gate(GateLabel::kH, {1}));
  CHECK(s.support_size() == 2);
  s.apply(Gate(GateLabel::kH, {1}));
  CHECK(s.support_size() == 1);
  CHECK(s.amplitude(0b101) == CQ2(1));
}

TEST_CASE("sparse support cap trips loudly") {
  SparseState s(8, 0, /*support_cap=*/4);
  s.apply(Gate(GateLabel::kH, {0}));
  s.apply(Gate(GateLabel::kH, {1}));
  try {
    s.apply(Gate(GateLabel::kH, {2}));  // support would be 8 > 4
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kCapExceeded);
  }
}

TEST_CASE("dense qubit cap trips loudly") {
  try {
    DenseState s(12, 0, /*qubit_cap=*/10);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kCapExceeded);
  }
}

TEST_CASE("tableau expectations equal dense expectations on Clifford runs") {
  std::mt19937_64 rng(1234);
  const int n = 6;
  for (int trial = 0; trial < 25; ++trial) {
    DenseState dense(n, 0);
    StabilizerTableau tab(n);
    for (int step = 0; step < 25; ++step) {
      Gate g = random_gate(rng, n, true);
      dense.apply(g);
      tab.apply(g);
    }
    for (int probe = 0; probe < 40; ++probe) {
      PauliOperator p = random_pauli(rng, n);
      CHECK(tab.expectation(p) == dense.expectation(p));
    }
  }
}

TEST_CASE("tableau reduced densities equal dense reduced densities") {
  std::mt19937_64 rng(4321);
  const int n = 7;
  for (int trial = 0; trial < 10; ++trial) {
    DenseState dense(n, 0);
    StabilizerTableau tab(n);
    for (int step = 0; step < 30; ++step) {
      Gate g = random_gate(rng, n, true);
      dense.apply(g);
      tab.apply(g);
    }
    std::vector<int> y;
    for (int q = 0; q < n; ++q)
      if (rng() % 2 && y.size() < 4) y.push_back(q);
    if (y.empty()) y.push_back(0);
    CHECK(tab.reduced_density(y) == dense.reduced_density(y));
  }
}

TEST_CASE("tableau rejects non-Clifford gates") {
  StabilizerTableau tab(3);
  try {
    tab.apply(Gate(GateLabel::kCCX, {0, 1, 2}));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kUnsupportedGate);
  }
}

TEST_CASE("apply_matrix agrees with named gates") {
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 10; ++trial) {
    DenseState dense(5, 7);
    SparseState sparse(5, 7);
    for (int step = 0; step < 6; ++step) {
      Gate g = random_gate(rng, 5, false);
      dense.apply(g);
      sparse.apply(g);
    }
    // Apply CNOT on (3, 1) once as a named gate, once as an explicit matrix.
    DenseState dense2 = dense;
    dense.apply(Gate(GateLabel::kCNOT, {3, 1}));
    dense2.apply_matrix({3, 1}, gate_matrix(GateLabel::kCNOT));
    for (std::uint64_t i = 0; i < dense.dimension(); ++i)
      CHECK(dense.amplitude(i) == dense2.amplitude(i));
    SparseState sparse2 = sparse;
    sparse.apply(Gate(GateLabel::kCH, {2, 4}));
    sparse2.apply_matrix({2, 4}, gate_matrix(GateLabel::kCH));
    for (std::uint64_t i = 0; i < 32; ++i)
      CHECK(sparse.amplitude(i) == sparse2.amplitude(i));
  }
}

TEST_CASE("reduced densities have unit trace and Hermitian symmetry") {
  std::mt19937_64 rng(31);
  DenseState dense(6, 0);
  for (int step = 0; step < 18; ++step) dense.apply(random_gate(rng, 6, false));
  DenseMatrix rho = dense.reduced_density({0, 3, 5});
  CHECK(dense_trace(rho) == CQ2(1));
  CHECK(rho == dense_adjoint(rho));
}
