// Copyright 2026 The qzk Authors
// SPDX-License-Identifier: Apache-2.0

#include "qzk/oracle.hpp"

#include <algorithm>
#include <bit>

namespace qzk {

namespace {

int popcount64(std::uint64_t v) { return std::popcount(v); }

}  // namespace

// ---------------------------------------------------------------------------
// Dense matrices

DenseMatrix gate_matrix(GateLabel label) {
  const CQ2 one(1), zero(0), minus(-1);
  const CQ2 s(q2_inv_sqrt2());
  switch (label) {
    case GateLabel::kI:
      return {one, zero, zero, one};
    case GateLabel::kH:
      return {s, s, s, -s};
    case GateLabel::kX:
      return {zero, one, one, zero};
    case GateLabel::kZ:
      return {one, zero, zero, minus};
    case GateLabel::kCNOT:
      return {one, zero, zero, zero,  //
              zero, one, zero, zero,  //
              zero, zero, zero, one,  //
              zero, zero, one, zero};
    case GateLabel::kCZ:
      return {one, zero, zero, zero,  //
              zero, one, zero, zero,  //
              zero, zero, one, zero,  //
              zero, zero, zero, minus};
    case GateLabel::kSWAP:
      return {one, zero, zero, zero,  //
              zero, zero, one, zero,  //
              zero, one, zero, zero,  //
              zero, zero, zero, one};
    case GateLabel::kCH: {
      DenseMatrix m(16, zero);
      m[0 * 4 + 0] = one;
      m[1 * 4 + 1] = one;
      m[2 * 4 + 2] = s;
      m[2 * 4 + 3] = s;
      m[3 * 4 + 2] = s;
      m[3 * 4 + 3] = -s;
      return m;
    }
    case GateLabel::kCCX: {
      DenseMatrix m(64, zero);
      for (int i = 0; i < 6; ++i) m[i * 8 + i] = one;
      m[6 * 8 + 7] = one;
      m[7 * 8 + 6] = one;
      return m;
    }
    case GateLabel::kCCZ: {
      DenseMatrix m(64, zero);
      for (int i = 0; i < 8; ++i) m[i * 8 + i] = (i == 7) ? minus : one;
      return m;
    }
  }
  fail(ErrorKind::kUnsupportedGate, "gate_matrix: unknown label");
}

DenseMatrix pauli_dense(const PauliOperator& p) {
  int n = p.num_qubits();
  if (n > 12) fail(ErrorKind::kCapExceeded, "pauli_dense beyond 12 qubits");
  std::uint64_t dim = std::uint64_t{1} << n;
  std::uint64_t xmask = 0, zmask = 0;
  for (int q = 0; q < n; ++q) {
    if (p.x_bit(q)) xmask |= std::uint64_t{1} << (n - 1 - q);
    if (p.z_bit(q)) zmask |= std::uint64_t{1} << (n - 1 - q);
  }
  CQ2 ph = p.phase_value();
  DenseMatrix m(dim * dim, CQ2(0));
  for (std::uint64_t c = 0; c < dim; ++c) {
    CQ2 v = ph;
    if (popcount64(zmask & c) & 1) v = -v;
    m[(c ^ xmask) * dim + c] = v;
  }
  return m;
}

DenseMatrix dense_multiply(const DenseMatrix& a, const DenseMatrix& b) {
  std::size_t dim = 1;
  while (dim * dim < a.size()) dim <<= 1;
  check_internal(dim * dim == a.size() && a.size() == b.size(),
                 "dense_multiply shape mismatch");
  DenseMatrix out(dim * dim, CQ2(0));
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t k = 0; k < dim; ++k) {
      const CQ2& aik = a[i * dim + k];
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < dim; ++j) {
        const CQ2& bkj = b[k * dim + j];
        if (!bkj.is_zero()) out[i * dim + j] += aik * bkj;
      }
    }
  return out;
}

DenseMatrix dense_adjoint(const DenseMatrix& a) {
  std::size_t dim = 1;
  while (dim * dim < a.size()) dim <<= 1;
  DenseMatrix out(a.size());
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      out[j * dim + i] = a[i * dim + j].conj();
  return out;
}

DenseMatrix dense_tensor(const DenseMatrix& a, const DenseMatrix& b) {
  std::size_t da = 1, db = 1;
  while (da * da < a.size()) da <<= 1;
  while (db * db < b.size()) db <<= 1;
  std::size_t dim = da * db;
  DenseMatrix out(dim * dim, CQ2(0));
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j) {
      const CQ2& aij = a[i * da + j];
      if (aij.is_zero()) continue;
      for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l) {
          const CQ2& bkl = b[k * db + l];
          if (!bkl.is_zero()) out[(i * db + k) * dim + (j * db + l)] = aij * bkl;
        }
    }
  return out;
}

CQ2 dense_trace(const DenseMatrix& a) {
  std::size_t dim = 1;
  while (dim * dim < a.size()) dim <<= 1;
  CQ2 t(0);
  for (std::size_t i = 0; i < dim; ++i) t += a[i * dim + i];
  return t;
}

// ---------------------------------------------------------------------------
// DenseState

DenseState::DenseState(int num_qubits, std::uint64_t basis, int qubit_cap)
    : n_(num_qubits) {
  if (num_qubits < 0) fail(ErrorKind::kDomain, "negative qubit count");
  if (num_qubits > qubit_cap)
    fail(ErrorKind::kCapExceeded, "dense state beyond qubit cap");
  amp_.assign(std::uint64_t{1} << n_, CQ2(0));
  amp_[basis] = CQ2(1);
}

DenseState DenseState::from_amplitudes(int num_qubits, std::vector<CQ2> amps) {
  DenseState s(num_qubits);
  if (amps.size() != s.dimension())
    fail(ErrorKind::kDomain, "amplitude vector has wrong dimension");
  s.amp_ = std::move(amps);
  return s;
}

void DenseState::apply(const Gate& gate) {
  for (int q : gate.qubits)
    if (q < 0 || q >= n_) fail(ErrorKind::kDomain, "gate qubit out of range");
  const std::uint64_t dim = dimension();
  auto bit = [&](int q) { return std::uint64_t{1} << bit_pos(q); };
  switch (gate.label) {
    case GateLabel::kI:
      return;
    case GateLabel::kX: {
      std::uint64_t b = bit(gate.qubits[0]);
      for (std::uint64_t i = 0; i < dim; ++i)
        if (!(i & b)) std::swap(amp_[i], amp_[i | b]);
      return;
    }
    case GateLabel::kZ: {
      std::uint64_t b = bit(gate.qubits[0]);
      for (std::uint64_t i = 0; i < dim; ++i)
        if (i & b) amp_[i] = -amp_[i];
      return;
    }
    case GateLabel::kH: {
      std::uint64_t b = bit(gate.qubits[0]);
      const CQ2 s(q2_inv_sqrt2());
      for (std::uint64_t i = 0; i < dim; ++i)
        if (!(i & b)) {
          CQ2 u = amp_[i], v = amp_[i | b];
          amp_[i] = (u + v) * s;
          amp_[i | b] = (u - v) * s;
        }
      return;
    }
    case GateLabel::kCNOT: {
      std::uint64_t c = bit(gate.qubits[0]), t = bit(gate.qubits[1]);
      for (std::uint64_t i = 0; i < dim; ++i)
        if ((i & c) && !(i & t)) std::swap(amp_[i], amp_[i | t]);
      return;
    }
    case GateLabel::kCZ: {
      std::uint64_t c = bit(gate.qubits[0]), t = bit(gate.qubits[1]);
      for (std::uint64_t i = 0; i < dim; ++i)
        if ((i & c) && (i & t)) amp_[i] = -amp_[i];
      return;
    }
    case GateLabel::kSWAP: {
      std::uint64_t a = bit(gate.qubits[0]), b = bit(gate.qubits[1]);
      for (std::uint64_t i = 0; i < dim; ++i)
        if ((i & a) && !(i & b)) std::swap(amp_[i], amp_[(i ^ a) | b]);
      return;
    }
    case GateLabel::kCH: {
      std::uint64_t c = bit(gate.qubits[0]), t = bit(gate.qubits[1]);
      const CQ2 s(q2_inv_sqrt2());
      for (std::uint64_t i = 0; i < dim; ++i)
        if ((i & c) && !(i & t)) {
          CQ2 u = amp_[i], v = amp_[i | t];
          amp_[i] = (u + v) * s;
          amp_[i | t] = (u - v) * s;
        }
      return;
    }
    case GateLabel::kCCX: {
      std::uint64_t c1 = bit(gate.qubits[0]), c2 = bit(gate.qubits[1]),
                    t = bit(gate.qubits[2]);
      for (std::uint64_t i = 0; i < dim; ++i)
        if ((i & c1) && (i & c2) && !(i & t)) std::swap(amp_[i], amp_[i | t]);
      return;
    }
    case GateLabel::kCCZ: {
      std::uint64_t c1 = bit(gate.qubits[0]), c2 = bit(gate.qubits[1]),
                    c3 = bit(gate.qubits[2]);
      for (std::uint64_t i = 0; i < dim; ++i)
        if ((i & c1) && (i & c2) && (i & c3)) amp_[i] = -amp_[i];
      return;
    }
  }
  fail(ErrorKind::kUnsupportedGate, "DenseState: unknown gate");
}

void DenseState::apply(const std::vector<Gate>& circuit) {
  for (const Gate& g : circuit) apply(g);
}

void DenseState::apply_pauli(const PauliOperator& p) {
  check_internal(p.num_qubits() == n_, "apply_pauli size mismatch");
  std::uint64_t xmask = 0, zmask = 0;
  for (int q = 0; q < n_; ++q) {
    if (p.x_bit(q)) xmask |= std::uint64_t{1} << bit_pos(q);
    if (p.z_bit(q)) zmask |= std::uint64_t{1} << bit_pos(q);
  }
  CQ2 ph = p.phase_value();
  std::vector<CQ2> out(amp_.size(), CQ2(0));
  for (std::uint64_t i = 0; i < amp_.size(); ++i) {
    if (amp_[i].is_zero()) continue;
    CQ2 v = amp_[i] * ph;
    if (popcount64(zmask & i) & 1) v = -v;
    out[i ^ xmask] = v;
  }
  amp_ = std::move(out);
}

void DenseState::apply_matrix(const std::vector<int>& qubits,
                              const DenseMatrix& mat) {
  int k = static_cast<int>(qubits.size());
  std::uint64_t dk = std::uint64_t{1} << k;
  if (mat.size() != dk * dk)
    fail(ErrorKind::kDomain, "apply_matrix dimension mismatch");
  std::uint64_t mask = 0;
  std::vector<std::uint64_t> bits(k);
  for (int j = 0; j < k; ++j) {
    bits[j] = std::uint64_t{1} << bit_pos(qubits[j]);
    mask |= bits[j];
  }
  auto spread = [&](std::uint64_t local) {
    std::uint64_t v = 0;
    for (int j = 0; j < k; ++j)
      if (local & (std::uint64_t{1} << (k - 1 - j))) v |= bits[j];
    return v;
  };
  std::vector<CQ2> in(dk), out(dk);
  for (std::uint64_t base = 0; base < dimension(); ++base) {
    if (base & mask) continue;
    for (std::uint64_t j = 0; j < dk; ++j) in[j] = amp_[base | spread(j)];
    for (std::uint64_t i = 0; i < dk; ++i) {
      CQ2 acc(0);
      for (std::uint64_t j = 0; j < dk; ++j) {
        const CQ2& m = mat[i * dk + j];
        if (!m.is_zero() && !in[j].is_zero()) acc += m * in[j];
      }
      out[i] = acc;
    }
    for (std::uint64_t i = 0; i < dk; ++i) amp_[base | spread(i)] = out[i];
  }
}

Q2 DenseState::norm2() const {
  Q2 acc(0);
  for (const CQ2& a : amp_) acc += a.abs2();
  return acc;
}

CQ2 DenseState::expectation(const PauliOperator& p) const {
  check_internal(p.num_qubits() == n_, "expectation size mismatch");
  std::uint64_t xmask = 0, zmask = 0;
  for (int q = 0; q < n_; ++q) {
    if (p.x_bit(q)) xmask |= std::uint64_t{1} << bit_pos(q);
    if (p.z_bit(q)) zmask |= std::uint64_t{1} << bit_pos(q);
  }
  CQ2 ph = p.phase_value();
  CQ2 acc(0);
  for (std::uint64_t c = 0; c < amp_.size(); ++c) {
    if (amp_[c].is_zero()) continue;
    CQ2 v = amp_[c] * ph;
    if (popcount64(zmask & c) & 1) v = -v;
    const CQ2& bra = amp_[c ^ xmask];
    if (!bra.is_zero()) acc += bra.conj() * v;
  }
  return acc;
}

DenseMatrix DenseState::reduced_density(const std::vector<int>& y) const {
  int k = static_cast<int>(y.size());
  std::uint64_t dk = std::uint64_t{1} << k;
  std::vector<std::uint64_t> ybits(k);
  std::uint64_t ymask = 0;
  for (int j = 0; j < k; ++j) {
    ybits[j] = std::uint64_t{1} << bit_pos(y[j]);
    ymask |= ybits[j];
  }
  auto spread = [&](std::uint64_t local) {
    std::uint64_t v = 0;
    for (int j = 0; j < k; ++j)
      if (local & (std::uint64_t{1} << (k - 1 - j))) v |= ybits[j];
    return v;
  };
  DenseMatrix out(dk * dk, CQ2(0));
  for (std::uint64_t e = 0; e < dimension(); ++e) {
    if (e & ymask) continue;  // e ranges over environment assignments
    for (std::uint64_t r = 0; r < dk; ++r) {
      const CQ2& vr = amp_[e | spread(r)];
      if (vr.is_zero()) continue;
      for (std::uint64_t c = 0; c < dk; ++c) {
        const CQ2& vc = amp_[e | spread(c)];
        if (!vc.is_zero()) out[r * dk + c] += vr * vc.conj();
      }
    }
  }
  return out;
}

CQ2 inner_product(const DenseState& a, const DenseState& b) {
  check_internal(a.num_qubits() == b.num_qubits(), "inner size mismatch");
  CQ2 acc(0);
  for (std::uint64_t i = 0; i < a.dimension(); ++i)
    acc += a.amplitude(i).conj() * b.amplitude(i);
  return acc;
}

// ---------------------------------------------------------------------------
// SparseState

SparseState::SparseState(int num_qubits, std::uint64_t basis,
                         std::size_t support_cap)
    : n_(num_qubits), cap_(support_cap) {
  if (num_qubits < 0 || num_qubits > 62)
    fail(ErrorKind::kDomain, "sparse state qubit count out of range");
  amp_[basis] = CQ2(1);
}

SparseState SparseState::zero_weight(int num_qubits, std::size_t support_cap) {
  SparseState s(num_qubits, 0, support_cap);
  s.amp_.clear();
  return s;
}

void SparseState::set_amplitude(std::uint64_t basis, const CQ2& v) {
  if (v.is_zero())
    amp_.erase(basis);
  else
    amp_[basis] = v;
  if (amp_.size() > cap_) fail(ErrorKind::kCapExceeded, "sparse support cap");
}

CQ2 SparseState::amplitude(std::uint64_t basis) const {
  auto it = amp_.find(basis);
  return it == amp_.end() ? CQ2(0) : it->second;
}

void SparseState::prune_and_check() {
  for (auto it = amp_.begin(); it != amp_.end();)
    it = it->second.is_zero() ? amp_.erase(it) : std::next(it);
  if (amp_.size() > cap_) fail(ErrorKind::kCapExceeded, "sparse support cap");
}

void SparseState::apply(const Gate& gate) {
  for (int q : gate.qubits)
    if (q < 0 || q >= n_) fail(ErrorKind::kDomain, "gate qubit out of range");
  auto bit = [&](int q) { return std::uint64_t{1} << bit_pos(q); };
  switch (gate.label) {
    case GateLabel::kI:
      return;
    case GateLabel::kX: {
      std::uint64_t b = bit(gate.qubits[0]);
      Map out;
      out.reserve(amp_.size());
      for (auto& [k, v] : amp_) out[k ^ b] = v;
      amp_ = std::move(out);
      return;
    }
    case GateLabel::kZ: {
      std::uint64_t b = bit(gate.qubits[0]);
      for (auto& [k, v] : amp_)
        if (k & b) v = -v;
      return;
    }
    case GateLabel::kCZ: {
      std::uint64_t c = bit(gate.qubits[0]), t = bit(gate.qubits[1]);
      for (auto& [k, v] : amp_)
        if ((k & c) && (k & t)) v = -v;
      return;
    }
    case GateLabel::kCCZ: {
      std::uint64_t c1 = bit(gate.qubits[0]), c2 = bit(gate.qubits[1]),
                    c3 = bit(gate.qubits[2]);
      for (auto& [k, v] : amp_)
        if ((k & c1) && (k & c2) && (k & c3)) v = -v;
      return;
    }
    case GateLabel::kCNOT: {
      std::uint64_t c = bit(gate.qubits[0]), t = bit(gate.qubits[1]);
      Map out;
      out.reserve(amp_.size());
      for (auto& [k, v] : amp_) out[(k & c) ? (k ^ t) : k] = v;
      amp_ = std::move(out);
      return;
    }
    case GateLabel::kSWAP: {
      std::uint64_t a = bit(gate.qubits[0]), b = bit(gate.qubits[1]);
      Map out;
      out.reserve(amp_.size());
      for (auto& [k, v] : amp_) {
        std::uint64_t k2 = k;
        bool ba = k & a, bb = k & b;
        if (ba != bb) k2 = (k ^ a) ^ b;
        out[k2] = v;
      }
      amp_ = std::move(out);
      return;
    }
    case GateLabel::kCCX: {
      std::uint64_t c1 = bit(gate.qubits[0]), c2 = bit(gate.qubits[1]),
                    t = bit(gate.qubits[2]);
      Map out;
      out.reserve(amp_.size());
      for (auto& [k, v] : amp_)
        out[((k & c1) && (k & c2)) ? (k ^ t) : k] = v;
      amp_ = std::move(out);
      return;
    }
    case GateLabel::kH: {
      std::uint64_t b = bit(gate.qubits[0]);
      const CQ2 s(q2_inv_sqrt2());
      Map out;
      out.reserve(amp_.size() * 2);
      for (auto& [k, v] : amp_) {
        CQ2 w = v * s;
        out[k & ~b] += w;
        out[k | b] += (k & b) ? -w : w;
      }
      amp_ = std::move(out);
      prune_and_check();
      return;
    }
    case GateLabel::kCH: {
      std::uint64_t c = bit(gate.qubits[0]), t = bit(gate.qubits[1]);
      const CQ2 s(q2_inv_sqrt2());
      Map out;
      out.reserve(amp_.size() * 2);
      for (auto& [k, v] : amp_) {
        if (!(k & c)) {
          out[k] += v;
          continue;
        }
        CQ2 w = v * s;
        out[k & ~t] += w;
        out[k | t] += (k & t) ? -w : w;
      }
      amp_ = std::move(out);
      prune_and_check();
      return;
    }
  }
  fail(ErrorKind::kUnsupportedGate, "SparseState: unknown gate");
}

void SparseState::apply(const std::vector<Gate>& circuit) {
  for (const Gate& g : circuit) apply(g);
}

void SparseState::apply_pauli(const PauliOperator& p) {
  check_internal(p.num_qubits() == n_, "apply_pauli size mismatch");
  std::uint64_t xmask = 0, zmask = 0;
  for (int q = 0; q < n_; ++q) {
    if (p.x_bit(q)) xmask |= std::uint64_t{1} << bit_pos(q);
    if (p.z_bit(q)) zmask |= std::uint64_t{1} << bit_pos(q);
  }
  CQ2 ph = p.phase_value();
  Map out;
  out.reserve(amp_.size());
  for (auto& [k, v] : amp_) {
    CQ2 w = v * ph;
    if (popcount64(zmask & k) & 1) w = -w;
    out[k ^ xmask] = w;
  }
  amp_ = std::move(out);
}

void SparseState::apply_matrix(const std::vector<int>& qubits,
                               const DenseMatrix& mat) {
  int k = static_cast<int>(qubits.size());
  std::uint64_t dk = std::uint64_t{1} << k;
  if (mat.size() != dk * dk)
    fail(ErrorKind::kDomain, "apply_matrix dimension mismatch");
  std::vector<std::uint64_t> bits(k);
  for (int j = 0; j < k; ++j) bits[j] = std::uint64_t{1} << bit_pos(qubits[j]);
  Map out;
  out.reserve(amp_.size() * dk);
  for (auto& [key, v] : amp_) {
    std::uint64_t local = 0;
    std::uint64_t base = key;
    for (int j = 0; j < k; ++j) {
      if (key & bits[j]) local |= std::uint64_t{1} << (k - 1 - j);
      base &= ~bits[j];
    }
    for (std::uint64_t i = 0; i < dk; ++i) {
      const CQ2& m = mat[i * dk + local];
      if (m.is_zero()) continue;
      std::uint64_t target = base;
      for (int j = 0; j < k; ++j)
        if (i & (std::uint64_t{1} << (k - 1 - j))) target |= bits[j];
      out[target] += m * v;
    }
  }
  amp_ = std::move(out);
  prune_and_check();
}

Q2 SparseState::norm2() const {
  Q2 acc(0);
  for (auto& [k, v] : amp_) acc += v.abs2();
  return acc;
}

CQ2 SparseState::expectation(const PauliOperator& p) const {
  check_internal(p.num_qubits() == n_, "expectation size mismatch");
  std::uint64_t xmask = 0, zmask = 0;
  for (int q = 0; q < n_; ++q) {
    if (p.x_bit(q)) xmask |= std::uint64_t{1} << bit_pos(q);
    if (p.z_bit(q)) zmask |= std::uint64_t{1} << bit_pos(q);
  }
  CQ2 ph = p.phase_value();
  CQ2 acc(0);
  for (auto& [c, v] : amp_) {
    auto bra = amp_.find(c ^ xmask);
    if (bra == amp_.end()) continue;
    CQ2 w = v * ph;
    if (popcount64(zmask & c) & 1) w = -w;
    acc += bra->second.conj() * w;
  }
  return acc;
}

DenseMatrix SparseState::reduced_density(const std::vector<int>& y) const {
  int k = static_cast<int>(y.size());
  std::uint64_t dk = std::uint64_t{1} << k;
  std::vector<std::uint64_t> ybits(k);
  std::uint64_t ymask = 0;
  for (int j = 0; j < k; ++j) {
    ybits[j] = std::uint64_t{1} << bit_pos(y[j]);
    ymask |= ybits[j];
  }
  // Bucket amplitudes by the environment assignment (bits outside Y).
  std::unordered_map<std::uint64_t, std::vector<std::pair<std::uint64_t, CQ2>>>
      buckets;
  for (auto& [key, v] : amp_) {
    std::uint64_t local = 0;
    for (int j = 0; j < k; ++j)
      if (key & ybits[j]) local |= std::uint64_t{1} << (k - 1 - j);
    buckets[key & ~ymask].emplace_back(local, v);
  }
  DenseMatrix out(dk * dk, CQ2(0));
  for (auto& [env, entries] : buckets)
    for (auto& [r, vr] : entries)
      for (auto& [c, vc] : entries) out[r * dk + c] += vr * vc.conj();
  return out;
}

CQ2 inner_product(const SparseState& a, const SparseState& b) {
  check_internal(a.num_qubits() == b.num_qubits(), "inner size mismatch");
  const SparseState::Map& small = a.amp_.size() <= b.amp_.size() ? a.amp_ : b.amp_;
  CQ2 acc(0);
  if (&small == &a.amp_) {
    for (auto& [k, v] : a.amp_) {
      auto it = b.amp_.find(k);
      if (it != b.amp_.end()) acc += v.conj() * it->second;
    }
  } else {
    for (auto& [k, v] : b.amp_) {
      auto it = a.amp_.find(k);
      if (it != a.amp_.end()) acc += it->second.conj() * v;
    }
  }
  return acc;
}

// ---------------------------------------------------------------------------
// StabilizerTableau

StabilizerTableau::StabilizerTableau(int num_qubits) : n_(num_qubits) {
  if (num_qubits <= 0) fail(ErrorKind::kDomain, "tableau needs qubits");
  stab_.reserve(n_);
  destab_.reserve(n_);
  for (int q = 0; q < n_; ++q) {
    PauliOperator z(n_), x(n_);
    z.set_letter(q, 'Z');
    x.set_letter(q, 'X');
    stab_.push_back(z);
    destab_.push_back(x);
  }
}

void StabilizerTableau::apply(const Gate& gate) {
  if (!gate_is_clifford(gate.label))
    fail(ErrorKind::kUnsupportedGate,
         std::string("tableau cannot apply non-Clifford gate ") +
             gate_name(gate.label));
  for (PauliOperator& p : stab_) p = conjugate_pauli(p, gate);
  for (PauliOperator& p : destab_) p = conjugate_pauli(p, gate);
}

void StabilizerTableau::apply(const std::vector<Gate>& circuit) {
  for (const Gate& g : circuit) apply(g);
}

CQ2 StabilizerTableau::expectation(const PauliOperator& w) const {
  check_internal(w.num_qubits() == n_, "tableau expectation size mismatch");
  for (const PauliOperator& s : stab_)
    if (!w.commutes_with(s)) return CQ2(0);
  // w commutes with the full stabilizer group of a rank-n tableau, so it
  // equals a product of stabilizer generators up to phase. The exponent of
  // generator i is read off by commutation against the paired destabilizer.
  PauliOperator candidate = PauliOperator::identity(n_);
  for (int i = 0; i < n_; ++i)
    if (!w.commutes_with(destab_[i])) candidate = candidate * stab_[i];
  check_internal(candidate.equal_up_to_phase(w),
                 "tableau membership reconstruction failed");
  return CQ2::i_pow(w.phase_exponent() - candidate.phase_exponent());
}

DenseMatrix StabilizerTableau::reduced_density(const std::vector<int>& y) const {
  int k = static_cast<int>(y.size());
  if (k > 10) fail(ErrorKind::kCapExceeded, "tableau reduction beyond 10 qubits");
  std::uint64_t dk = std::uint64_t{1} << k;
  DenseMatrix out(dk * dk, CQ2(0));
  Rat scale = Rat::pow2(-k);
  // Sum over all Pauli letter assignments on Y.
  std::vector<int> letters(k, 0);
  static const char kAlphabet[4] = {'I', 'X', 'Y', 'Z'};
  while (true) {
    PauliOperator local(k);
    for (int j = 0; j < k; ++j) local.set_letter(j, kAlphabet[letters[j]]);
    CQ2 coef = expectation(local.embed(n_, y));
    if (!coef.is_zero()) {
      DenseMatrix m = pauli_dense(local);
      CQ2 scaled = coef * CQ2(Q2(scale));
      for (std::uint64_t e = 0; e < dk * dk; ++e)
        if (!m[e].is_zero()) out[e] += scaled * m[e];
    }
    int j = k - 1;
    while (j >= 0 && letters[j] == 3) letters[j--] = 0;
    if (j < 0) break;
    ++letters[j];
  }
  return out;
}

}  // namespace qzk
