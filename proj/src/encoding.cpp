// Copyright 2026 The qzk Authors
// SPDX-License-Identifier: Apache-2.0

#include "qzk/encoding.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <utility>

#include "qzk/error.hpp"

namespace qzk {

namespace {

// Letter word with index `w` (two bits per qubit: 0=I, 1=X, 2=Y, 3=Z).
PauliOperator letter_word(std::uint64_t w, int num_qubits) {
  static const char kLetters[4] = {'I', 'X', 'Y', 'Z'};
  PauliOperator p = PauliOperator::identity(num_qubits);
  for (int q = 0; q < num_qubits; ++q)
    p.set_letter(q, kLetters[(w >> (2 * q)) & 3]);
  return p;
}

// Splits `op` into the factor on `wires` (local operator, phase zero) and
// the factor on everything else (full width, phase zero). Because the two
// factors act on disjoint qubits, op = i^{op.phase} * rest * embed(sub).
void split_operator(const PauliOperator& op, const std::vector<int>& wires,
                    PauliOperator* sub, PauliOperator* rest) {
  std::vector<std::uint8_t> xr = op.x_bits();
  std::vector<std::uint8_t> zr = op.z_bits();
  std::vector<std::uint8_t> xs(wires.size(), 0), zs(wires.size(), 0);
  for (std::size_t j = 0; j < wires.size(); ++j) {
    xs[j] = xr[wires[j]];
    zs[j] = zr[wires[j]];
    xr[wires[j]] = 0;
    zr[wires[j]] = 0;
  }
  *sub = PauliOperator::from_bits(std::move(xs), std::move(zs), 0);
  *rest = PauliOperator::from_bits(std::move(xr), std::move(zr), 0);
}

// Canonical merge: fold each term's stored phase into its coefficient and
// combine terms with identical letter bits. Zero coefficients are dropped.
PauliCombination merge_terms(const PauliCombination& in) {
  std::map<std::vector<std::uint8_t>, std::pair<PauliOperator, CQ2>> acc;
  for (const PauliTerm& t : in) {
    CQ2 c = t.coeff * t.op.phase_value();
    if (c.is_zero()) continue;
    std::vector<std::uint8_t> key = t.op.x_bits();
    key.insert(key.end(), t.op.z_bits().begin(), t.op.z_bits().end());
    auto it = acc.find(key);
    if (it == acc.end()) {
      PauliOperator bare = PauliOperator::from_bits(
          t.op.x_bits(), t.op.z_bits(), 0);
      acc.emplace(std::move(key), std::make_pair(std::move(bare), c));
    } else {
      it->second.second = it->second.second + c;
    }
  }
  PauliCombination out;
  out.reserve(acc.size());
  for (auto& [key, val] : acc) {
    if (val.second.is_zero()) continue;
    out.push_back(PauliTerm{val.second, std::move(val.first)});
  }
  return out;
}

// Gadget register layout helpers: data blocks first, then the three magic
// blocks, then `copies` fan-out blocks per measured register.
struct GadgetLayout {
  int block_len;
  int copies;
  int data(int j, int w) const { return j * block_len + w; }
  int magic(int j, int w) const { return (3 + j) * block_len + w; }
  int copy(int j, int c, int w) const {
    return (6 + j * copies + c) * block_len + w;
  }
};

// Transversal Hadamard must map the code to itself with exact signs before
// the gadget may fold its X-basis measurement into the entangling layer.
void require_transversal_h(const StabilizerCode& code) {
  int n = code.num_physical();
  std::vector<Gate> layer;
  layer.reserve(n);
  for (int q = 0; q < n; ++q) layer.push_back(Gate(GateLabel::kH, {q}));
  for (const PauliOperator& g : code.generators()) {
    PauliOperator img = conjugate_pauli(g, layer);
    StabilizerCode::TraceResult tr = code.codeword_pauli_trace(img);
    if (tr.kind != StabilizerCode::TraceResult::Kind::kScalar ||
        !(tr.scalar == CQ2(1)))
      fail(ErrorKind::kUnsupportedGate,
           "transversal Hadamard does not preserve code " + code.name());
  }
  std::optional<PauliOperator> lx =
      code.logical_action(conjugate_pauli(code.logical_x(), layer));
  std::optional<PauliOperator> lz =
      code.logical_action(conjugate_pauli(code.logical_z(), layer));
  if (!lx || !lz || *lx != PauliOperator::parse("Z") ||
      *lz != PauliOperator::parse("X"))
    fail(ErrorKind::kUnsupportedGate,
         "transversal Hadamard does not act as the logical Hadamard on " +
             code.name());
}

}  // namespace

// ---------------------------------------------------------------------------
// Pauli combinations

PauliCombination pauli_expand(const DenseMatrix& m, int num_qubits) {
  if (num_qubits < 0 || num_qubits > 5)
    fail(ErrorKind::kCapExceeded, "pauli_expand limited to five qubits");
  std::uint64_t dim = std::uint64_t{1} << num_qubits;
  if (m.size() != dim * dim)
    fail(ErrorKind::kDomain, "pauli_expand matrix size mismatch");
  CQ2 inv_dim = CQ2(Rat(1, static_cast<std::int64_t>(dim)));
  PauliCombination out;
  std::uint64_t words = std::uint64_t{1} << (2 * num_qubits);
  for (std::uint64_t w = 0; w < words; ++w) {
    PauliOperator p = letter_word(w, num_qubits);
    DenseMatrix pd = pauli_dense(p);
    CQ2 tr = 0;
    for (std::uint64_t r = 0; r < dim; ++r)
      for (std::uint64_t c = 0; c < dim; ++c)
        tr = tr + pd[r * dim + c] * m[c * dim + r];
    CQ2 coeff = tr * inv_dim;
    if (!coeff.is_zero()) out.push_back(PauliTerm{coeff, std::move(p)});
  }
  return out;
}

PauliCombination conjugate_term(const PauliTerm& term, const Gate& gate) {
  try {
    return {PauliTerm{term.coeff, conjugate_pauli(term.op, gate)}};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kNonPauliConjugation) throw;
  }
  // Outside the closed cases: conjugate the on-gate factor densely and
  // expand the exact result back into Pauli letters.
  PauliOperator sub, rest;
  split_operator(term.op, gate.qubits, &sub, &rest);
  DenseMatrix u = gate_matrix(gate.label);
  DenseMatrix conj = dense_multiply(u, dense_multiply(pauli_dense(sub), u));
  PauliCombination local =
      pauli_expand(conj, static_cast<int>(gate.qubits.size()));
  PauliCombination out;
  out.reserve(local.size());
  CQ2 scale = term.coeff * term.op.phase_value();
  for (const PauliTerm& lt : local) {
    PauliOperator placed =
        rest * lt.op.embed(term.op.num_qubits(), gate.qubits);
    out.push_back(PauliTerm{scale * lt.coeff, std::move(placed)});
  }
  return out;
}

PauliCombination conjugate_backward(PauliCombination terms,
                                    const std::vector<Gate>& prefix,
                                    std::size_t term_cap) {
  terms = merge_terms(terms);
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) {
    PauliCombination next;
    next.reserve(terms.size());
    for (const PauliTerm& t : terms) {
      PauliCombination imgs = conjugate_term(t, *it);
      next.insert(next.end(), imgs.begin(), imgs.end());
    }
    terms = merge_terms(next);
    if (terms.size() > term_cap)
      fail(ErrorKind::kCapExceeded,
           "Pauli combination exceeded " + std::to_string(term_cap) +
               " terms during backward conjugation");
  }
  return terms;
}

// ---------------------------------------------------------------------------
// Region traces

bool SymbolicTrace::proportional_to_identity(CQ2* scalar_out) const {
  std::uint64_t dim = std::uint64_t{1} << unknown_qubits;
  check_internal(logical_matrix.size() == dim * dim,
                 "symbolic trace matrix size mismatch");
  for (std::uint64_t r = 0; r < dim; ++r)
    for (std::uint64_t c = 0; c < dim; ++c) {
      const CQ2& v = logical_matrix[r * dim + c];
      if (r == c ? !(v == logical_matrix[0]) : !v.is_zero()) return false;
    }
  if (scalar_out) *scalar_out = logical_matrix[0];
  return true;
}

SymbolicTrace trace_against_regions(const std::vector<RegisterRegion>& regions,
                                    int num_qubits,
                                    const PauliCombination& terms) {
  // Wire ownership: every qubit belongs to exactly one region block.
  std::vector<int> owner(num_qubits, -1);
  int unknown_blocks = 0;
  for (std::size_t r = 0; r < regions.size(); ++r) {
    const RegisterRegion& reg = regions[r];
    if (reg.blocks.empty())
      fail(ErrorKind::kDomain, "register region without blocks");
    for (const BlockRef& b : reg.blocks) {
      if (b.code == nullptr ||
          static_cast<int>(b.qubits.size()) != b.code->num_physical())
        fail(ErrorKind::kDomain, "region block does not match its code");
      for (int q : b.qubits) {
        if (q < 0 || q >= num_qubits)
          fail(ErrorKind::kDomain, "region wire out of range");
        if (owner[q] != -1)
          fail(ErrorKind::kDomain, "region wires overlap");
        owner[q] = static_cast<int>(r);
      }
    }
    if (reg.kind == RegisterRegion::Kind::kUnknownLogical) {
      unknown_blocks += static_cast<int>(reg.blocks.size());
    } else {
      std::uint64_t dim = std::uint64_t{1} << reg.blocks.size();
      if (reg.sigma.size() != dim * dim)
        fail(ErrorKind::kDomain, "region density has the wrong dimension");
    }
  }
  for (int q = 0; q < num_qubits; ++q)
    if (owner[q] == -1)
      fail(ErrorKind::kDomain, "register wire not covered by any region");
  if (unknown_blocks > 10)
    fail(ErrorKind::kCapExceeded, "too many unknown logical blocks");

  std::uint64_t dim = std::uint64_t{1} << unknown_blocks;
  SymbolicTrace result;
  result.unknown_qubits = unknown_blocks;
  result.logical_matrix.assign(dim * dim, CQ2(0));

  for (const PauliTerm& term : terms) {
    if (term.op.num_qubits() != num_qubits)
      fail(ErrorKind::kDomain, "term width does not match the register");
    CQ2 scalar = term.coeff * term.op.phase_value();
    if (scalar.is_zero()) continue;
    // Phase-zero letter factors on disjoint wire sets multiply back to the
    // term exactly, so known regions contribute plain scalars and unknown
    // blocks contribute their logical restrictions.
    PauliOperator logical_part = PauliOperator::identity(0);
    bool dead = false;
    for (const RegisterRegion& reg : regions) {
      if (reg.kind == RegisterRegion::Kind::kKnownLogical) {
        std::vector<std::uint8_t> x(num_qubits, 0), z(num_qubits, 0);
        bool touched = false;
        for (const BlockRef& b : reg.blocks)
          for (int q : b.qubits) {
            x[q] = term.op.x_bit(q) ? 1 : 0;
            z[q] = term.op.z_bit(q) ? 1 : 0;
            touched |= x[q] || z[q];
          }
        if (!touched) continue;  // identity factor traces to one
        PauliOperator factor =
            PauliOperator::from_bits(std::move(x), std::move(z), 0);
        CQ2 tr = encoded_blocks_trace(reg.blocks, reg.sigma, factor);
        if (tr.is_zero()) {
          dead = true;
          break;
        }
        scalar = scalar * tr;
      } else {
        for (const BlockRef& b : reg.blocks) {
          PauliOperator sub, rest_unused;
          split_operator(term.op, b.qubits, &sub, &rest_unused);
          std::optional<PauliOperator> act = b.code->logical_action(sub);
          if (!act) {
            dead = true;  // outside the normalizer: kills the trace
            break;
          }
          logical_part = logical_part.tensor(*act);
        }
        if (dead) break;
      }
    }
    if (dead) continue;
    check_internal(logical_part.num_qubits() == unknown_blocks,
                   "unknown-block factor count mismatch");
    DenseMatrix contrib = pauli_dense(logical_part);
    for (std::uint64_t i = 0; i < dim * dim; ++i)
      result.logical_matrix[i] =
          result.logical_matrix[i] + scalar * contrib[i];
  }
  return result;
}

// ---------------------------------------------------------------------------
// Encoded gate sequences

std::vector<int> EncodedGateSequence::block_wires(int b) const {
  check_internal(b >= 0 && b < num_blocks(), "block index out of range");
  std::vector<int> w(block_len());
  for (int i = 0; i < block_len(); ++i) w[i] = b * block_len() + i;
  return w;
}

int EncodedGateSequence::budget() const {
  if (logical == GateLabel::kCCX) return copies;
  return code->distance() - 1;
}

std::vector<RegisterRegion> EncodedGateSequence::ancilla_input_regions()
    const {
  std::vector<RegisterRegion> regions;
  if (logical != GateLabel::kCCX) return regions;
  RegisterRegion magic;
  magic.kind = RegisterRegion::Kind::kKnownLogical;
  for (int j = 0; j < 3; ++j)
    magic.blocks.push_back(BlockRef{code, block_wires(num_data_blocks + j)});
  magic.sigma = toffoli_magic_density();
  regions.push_back(std::move(magic));
  DenseMatrix zero = {CQ2(1), CQ2(0), CQ2(0), CQ2(0)};
  for (int b = num_data_blocks + 3; b < num_blocks(); ++b) {
    RegisterRegion r;
    r.kind = RegisterRegion::Kind::kKnownLogical;
    r.blocks.push_back(BlockRef{code, block_wires(b)});
    r.sigma = zero;
    regions.push_back(std::move(r));
  }
  return regions;
}

std::string EncodedGateSequence::ancilla_input_descriptor() const {
  if (logical != GateLabel::kCCX) return "none";
  return "Enc(|Toffoli>) x Enc(|0>)^" + std::to_string(3 * copies);
}

std::string EncodedGateSequence::ancilla_output_descriptor() const {
  if (logical != GateLabel::kCCX) return "none";
  return "uniform superposition of " + std::to_string(copies + 1) +
         "-fold codeword copies";
}

EncodedGateSequence transversal_encoding(const StabilizerCode& code,
                                         GateLabel logical,
                                         std::vector<int> targets) {
  EncodedGateSequence enc;
  enc.logical = logical;
  enc.code = &code;
  enc.copies = 0;
  enc.num_ancilla_blocks = 0;
  int n = code.num_physical();
  if (logical == GateLabel::kH) {
    if (targets.size() != 1)
      fail(ErrorKind::kDomain, "transversal H takes one logical target");
    require_transversal_h(code);
    enc.num_data_blocks = 1;
    for (int w = 0; w < n; ++w)
      enc.gates.push_back(Gate(GateLabel::kH, {w}));
  } else if (logical == GateLabel::kCNOT) {
    if (targets.size() != 2 || targets[0] == targets[1])
      fail(ErrorKind::kDomain,
           "transversal CNOT takes two distinct logical targets");
    enc.num_data_blocks = 2;
    for (int w = 0; w < n; ++w)
      enc.gates.push_back(Gate(GateLabel::kCNOT, {w, n + w}));
  } else {
    fail(ErrorKind::kUnsupportedGate,
         std::string("no transversal lift for gate ") + gate_name(logical));
  }
  enc.targets = std::move(targets);
  enc.entangle_end = 0;
  enc.fanout_end = 0;
  return enc;
}

EncodedGateSequence toffoli_gadget_encoding(const StabilizerCode& code,
                                            std::vector<int> targets,
                                            int copies) {
  if (targets.size() != 3 || targets[0] == targets[1] ||
      targets[0] == targets[2] || targets[1] == targets[2])
    fail(ErrorKind::kDomain,
         "the Toffoli gadget takes three distinct logical targets");
  if (copies < 0) fail(ErrorKind::kDomain, "negative copy count");
  if (!order_consistency_check(code, 2))
    fail(ErrorKind::kDomain,
         "code " + code.name() +
             " fails order-two consistency; wire-controlled corrections "
             "would not realize the logical corrections");
  require_transversal_h(code);

  EncodedGateSequence enc;
  enc.logical = GateLabel::kCCX;
  enc.targets = std::move(targets);
  enc.code = &code;
  enc.num_data_blocks = 3;
  enc.copies = copies;
  enc.num_ancilla_blocks = 3 + 3 * copies;
  int L = code.num_physical();
  GadgetLayout lay{L, copies};

  // Entangling layer: copy the magic state onto the first two data blocks,
  // copy the third data block into the magic register, then rotate the
  // third data block into the X basis so that all three measured registers
  // are read in the Z basis.
  for (int w = 0; w < L; ++w)
    enc.gates.push_back(Gate(GateLabel::kCNOT, {lay.magic(0, w), lay.data(0, w)}));
  for (int w = 0; w < L; ++w)
    enc.gates.push_back(Gate(GateLabel::kCNOT, {lay.magic(1, w), lay.data(1, w)}));
  for (int w = 0; w < L; ++w)
    enc.gates.push_back(Gate(GateLabel::kCNOT, {lay.data(2, w), lay.magic(2, w)}));
  for (int w = 0; w < L; ++w)
    enc.gates.push_back(Gate(GateLabel::kH, {lay.data(2, w)}));
  enc.entangle_end = enc.gates.size();

  // Coherent measurement: fan each measured block out into fresh blocks.
  for (int j = 0; j < 3; ++j)
    for (int c = 0; c < copies; ++c)
      for (int w = 0; w < L; ++w)
        enc.gates.push_back(
            Gate(GateLabel::kCNOT, {lay.data(j, w), lay.copy(j, c, w)}));
  enc.fanout_end = enc.gates.size();

  // Correction layer. Each correction applies its logical unitary once per
  // physical wire of the controlling measured block; order consistency
  // makes the product act as the logical-bit power. Control loop outside,
  // transversal factor loop inside.
  for (int w = 0; w < L; ++w)  // x3 -> CZ on magic blocks 0,1
    for (int v = 0; v < L; ++v)
      enc.gates.push_back(Gate(
          GateLabel::kCCZ, {lay.data(2, w), lay.magic(0, v), lay.magic(1, v)}));
  for (int w = 0; w < L; ++w)  // x3 -> Z on magic block 2
    for (int v = 0; v < L; ++v)
      enc.gates.push_back(
          Gate(GateLabel::kCZ, {lay.data(2, w), lay.magic(2, v)}));
  for (int w = 0; w < L; ++w)  // z2 -> CNOT magic 0 -> magic 2
    for (int v = 0; v < L; ++v)
      enc.gates.push_back(Gate(
          GateLabel::kCCX, {lay.data(1, w), lay.magic(0, v), lay.magic(2, v)}));
  for (int w = 0; w < L; ++w)  // z2 -> X on magic block 1
    for (int v = 0; v < L; ++v)
      enc.gates.push_back(
          Gate(GateLabel::kCNOT, {lay.data(1, w), lay.magic(1, v)}));
  for (int w = 0; w < L; ++w)  // z1 -> X on magic block 0
    for (int v = 0; v < L; ++v)
      enc.gates.push_back(
          Gate(GateLabel::kCNOT, {lay.data(0, w), lay.magic(0, v)}));
  for (int w = 0; w < L; ++w)  // z1 -> CNOT magic 1 -> magic 2
    for (int v = 0; v < L; ++v)
      enc.gates.push_back(Gate(
          GateLabel::kCCX, {lay.data(0, w), lay.magic(1, v), lay.magic(2, v)}));

  // Route the corrected output back onto the data blocks.
  for (int j = 0; j < 3; ++j)
    for (int w = 0; w < L; ++w)
      enc.gates.push_back(
          Gate(GateLabel::kSWAP, {lay.data(j, w), lay.magic(j, w)}));
  return enc;
}

std::vector<Gate> toffoli_branch_corrections(const EncodedGateSequence& enc,
                                             int z1, int z2, int x3) {
  if (enc.logical != GateLabel::kCCX)
    fail(ErrorKind::kDomain, "branch corrections need a Toffoli gadget");
  for (int b : {z1, z2, x3})
    if (b != 0 && b != 1) fail(ErrorKind::kDomain, "branch bits must be 0/1");
  int L = enc.block_len();
  GadgetLayout lay{L, enc.copies};
  std::vector<Gate> out;
  if (x3) {
    for (int v = 0; v < L; ++v)
      out.push_back(Gate(GateLabel::kCZ, {lay.magic(0, v), lay.magic(1, v)}));
    for (int v = 0; v < L; ++v)
      out.push_back(Gate(GateLabel::kZ, {lay.magic(2, v)}));
  }
  if (z2) {
    for (int v = 0; v < L; ++v)
      out.push_back(
          Gate(GateLabel::kCNOT, {lay.magic(0, v), lay.magic(2, v)}));
    for (int v = 0; v < L; ++v)
      out.push_back(Gate(GateLabel::kX, {lay.magic(1, v)}));
  }
  if (z1) {
    for (int v = 0; v < L; ++v)
      out.push_back(Gate(GateLabel::kX, {lay.magic(0, v)}));
    for (int v = 0; v < L; ++v)
      out.push_back(
          Gate(GateLabel::kCNOT, {lay.magic(1, v), lay.magic(2, v)}));
  }
  return out;
}

bool order_consistency_check(const StabilizerCode& code, int order) {
  if (order < 1) fail(ErrorKind::kDomain, "order must be positive");
  if (order == 1) return true;
  int n = code.num_physical();
  if (order == 2) {
    // Weight parity of every codeword string is measured by Z-on-every-wire:
    // the condition holds exactly when that operator is the logical Z with
    // sign +1 (then Enc(|b>) strings all have parity b).
    std::string all_z(n, 'Z');
    std::optional<PauliOperator> act =
        code.logical_action(PauliOperator::from_letters(all_z));
    return act && *act == PauliOperator::parse("Z");
  }
  // Other orders: enumerate both codeword supports.
  for (int b = 0; b < 2; ++b) {
    std::uint64_t basis =
        b ? (std::uint64_t{1} << (n - 1 - code.input_qubit())) : 0;
    SparseState state(n, basis);
    state.apply(code.encoder());
    for (const auto& [string, amp] : state.amplitudes()) {
      if (amp.is_zero()) continue;
      int weight = 0;
      for (std::uint64_t v = string; v; v &= v - 1) ++weight;
      if (weight % order != b % order) return false;
    }
  }
  return true;
}

DenseMatrix simulate_prefix_trace(const EncodedGateSequence& enc,
                                  std::size_t t,
                                  const std::vector<int>& targets) {
  if (t > enc.gates.size())
    fail(ErrorKind::kDomain, "prefix length exceeds the gate sequence");
  std::set<int> seen;
  for (int q : targets) {
    if (q < 0 || q >= enc.num_qubits())
      fail(ErrorKind::kDomain, "target wire out of range");
    if (!seen.insert(q).second)
      fail(ErrorKind::kDomain, "duplicate target wire");
  }
  if (static_cast<int>(targets.size()) > enc.budget())
    fail(ErrorKind::kCapExceeded,
         "simulatability budget " + std::to_string(enc.budget()) +
             " exceeded by " + std::to_string(targets.size()) + " targets");

  std::vector<RegisterRegion> regions;
  RegisterRegion data;
  data.kind = RegisterRegion::Kind::kUnknownLogical;
  for (int b = 0; b < enc.num_data_blocks; ++b)
    data.blocks.push_back(BlockRef{enc.code, enc.block_wires(b)});
  regions.push_back(std::move(data));
  for (RegisterRegion& r : enc.ancilla_input_regions())
    regions.push_back(std::move(r));

  std::vector<Gate> prefix(enc.gates.begin(), enc.gates.begin() + t);
  int k = static_cast<int>(targets.size());
  std::uint64_t dim = std::uint64_t{1} << k;
  DenseMatrix out(dim * dim, CQ2(0));
  CQ2 weight = CQ2(Rat(1, std::int64_t{1} << k));
  std::uint64_t words = std::uint64_t{1} << (2 * k);
  for (std::uint64_t w = 0; w < words; ++w) {
    PauliOperator local = letter_word(w, k);
    PauliCombination terms = {
        PauliTerm{CQ2(1), local.embed(enc.num_qubits(), targets)}};
    terms = conjugate_backward(std::move(terms), prefix);
    SymbolicTrace st = trace_against_regions(regions, enc.num_qubits(), terms);
    CQ2 coeff;
    if (!st.proportional_to_identity(&coeff))
      fail(ErrorKind::kInsufficientDistance,
           "prefix reduction would depend on the logical data state");
    if (coeff.is_zero()) continue;
    DenseMatrix wd = pauli_dense(local);
    for (std::uint64_t i = 0; i < dim * dim; ++i)
      out[i] = out[i] + coeff * weight * wd[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Magic state helpers

std::vector<CQ2> toffoli_magic_amplitudes() {
  std::vector<CQ2> amps(8, CQ2(0));
  CQ2 half = CQ2(Rat(1, 2));
  amps[0b000] = half;
  amps[0b010] = half;
  amps[0b100] = half;
  amps[0b111] = half;
  return amps;
}

DenseMatrix toffoli_magic_density() {
  std::vector<CQ2> amps = toffoli_magic_amplitudes();
  DenseMatrix m(64, CQ2(0));
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) m[r * 8 + c] = amps[r] * amps[c].conj();
  return m;
}

std::vector<Gate> toffoli_magic_prep(int a, int b, int c) {
  return {Gate(GateLabel::kH, {a}), Gate(GateLabel::kH, {b}),
          Gate(GateLabel::kCCX, {a, b, c})};
}

std::string sequence_debug_text(const EncodedGateSequence& enc) {
  std::ostringstream os;
  os << gate_name(enc.logical) << " on " << enc.num_data_blocks
     << " data block(s), " << enc.num_ancilla_blocks << " ancilla block(s), "
     << enc.length() << " gates\n";
  os << "ancilla in:  " << enc.ancilla_input_descriptor() << "\n";
  os << "ancilla out: " << enc.ancilla_output_descriptor() << "\n";
  for (std::size_t i = 0; i < enc.gates.size(); ++i) {
    if (enc.logical == GateLabel::kCCX) {
      if (i == 0) os << "-- entangling layer\n";
      if (i == enc.entangle_end) os << "-- coherent copies\n";
      if (i == enc.fanout_end) os << "-- corrections and output routing\n";
    }
    os << i << ": " << gate_name(enc.gates[i].label);
    for (int q : enc.gates[i].qubits) os << ' ' << q;
    os << '\n';
  }
  return os.str();
}

}  // namespace qzk
