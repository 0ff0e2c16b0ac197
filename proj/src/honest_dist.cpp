// Copyright 2026 The qzk Authors
// SPDX-License-Identifier: Apache-2.0

#include "qzk/honest_dist.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "qzk/error.hpp"
#include "qzk/protocol.hpp"
#include "qzk/stabilizer_code.hpp"

namespace qzk {
namespace {

DenseMatrix letter_matrix(QuestionLetter l) {
  switch (l) {
    case QuestionLetter::kI: return gate_matrix(GateLabel::kI);
    case QuestionLetter::kX: return gate_matrix(GateLabel::kX);
    case QuestionLetter::kZ: return gate_matrix(GateLabel::kZ);
  }
  fail(ErrorKind::kInternal, "bad QuestionLetter");
}

// One evaluated subset of observables, split by register kind.
struct SubsetOperator {
  // Compressed 2x2 logical matrices, keyed by 1-based clock index.
  std::map<int, DenseMatrix> clock;
  // Compressed 2x2 logical matrices, keyed by snapshot wire.
  std::map<int, DenseMatrix> wires;
  // Prover-side single-qubit Pauli factors (snapshot qubit, letter).
  std::vector<std::pair<int, QuestionLetter>> direct;
  std::vector<int> star_provers;  // 1-based
};

// Entry [bra][ket] of a 2x2 matrix.
const CQ2& entry(const DenseMatrix& m, int bra, int ket) {
  return m[static_cast<std::size_t>(bra * 2 + ket)];
}

// Clock-share factor of one (bra time, ket time) pair: untouched clock
// qubits force their unary bits to agree; touched ones contribute matrix
// entries.  Unary patterns differ exactly on clock indices in
// (min(t,t'), max(t,t')].
CQ2 clock_factor(const std::map<int, DenseMatrix>& clock, std::size_t bra,
                 std::size_t ket) {
  std::size_t lo = std::min(bra, ket);
  std::size_t hi = std::max(bra, ket);
  if (hi - lo > clock.size()) return CQ2(0);
  for (std::size_t c = lo + 1; c <= hi; ++c)
    if (clock.find(static_cast<int>(c)) == clock.end()) return CQ2(0);
  CQ2 factor(1);
  for (const auto& [c, m] : clock) {
    factor = factor * entry(m, clock_bit(c, bra), clock_bit(c, ket));
    if (factor.is_zero()) return factor;
  }
  return factor;
}

}  // namespace

SnapshotTable build_snapshot_table(const HistoryStateSpec& spec) {
  SnapshotTable table;
  table.spec = &spec;
  table.states.reserve(spec.T + 1);
  SparseState state = snapshot_vector(spec, 0);
  table.states.push_back(state);
  for (std::size_t t = 1; t <= spec.T; ++t) {
    apply_timestep(spec, state, t);
    table.states.push_back(state);
  }
  return table;
}

int flat_verifier_bit(int player, int observable) {
  check_internal(player >= 1 && player <= kVerifierPlayers &&
                     observable >= 1 &&
                     observable <= kObservablesPerVerifier,
                 "verifier bit index out of range");
  return (player - 1) * kObservablesPerVerifier + observable - 1;
}

int flat_prover_bit(int prover) {
  check_internal(prover >= 1, "prover bit index out of range");
  return kVerifierPlayers * kObservablesPerVerifier + prover - 1;
}

Q2 AnswerDistribution::probability(const AnswerVector& answers) const {
  check_internal(static_cast<int>(answers.prover.size()) == provers,
                 "answer arity mismatch");
  std::uint64_t packed = 0;
  std::size_t next = 0;
  for (int r = 1; r <= kVerifierPlayers; ++r) {
    for (int j = 1; j <= kObservablesPerVerifier; ++j) {
      int bit = answers.verifier[static_cast<std::size_t>(r - 1)]
                                [static_cast<std::size_t>(j - 1)];
      int flat = flat_verifier_bit(r, j);
      if (next < free_bits.size() && free_bits[next] == flat) {
        if (bit) packed |= std::uint64_t{1} << next;
        ++next;
      } else if (bit) {
        return Q2(Rat(0));  // structurally zero
      }
    }
  }
  for (int i = 1; i <= provers; ++i) {
    int bit = answers.prover[static_cast<std::size_t>(i - 1)];
    int flat = flat_prover_bit(i);
    if (next < free_bits.size() && free_bits[next] == flat) {
      if (bit) packed |= std::uint64_t{1} << next;
      ++next;
    } else if (bit) {
      return Q2(Rat(0));
    }
  }
  return probabilities[packed];
}

AnswerVector AnswerDistribution::answer_at(std::uint64_t packed) const {
  AnswerVector out = AnswerVector::zeros(provers);
  for (std::size_t b = 0; b < free_bits.size(); ++b) {
    if (!(packed >> b & 1)) continue;
    int flat = free_bits[b];
    if (flat < kVerifierPlayers * kObservablesPerVerifier) {
      out.verifier[static_cast<std::size_t>(flat) /
                   kObservablesPerVerifier]
                  [static_cast<std::size_t>(flat) %
                   kObservablesPerVerifier] = 1;
    } else {
      out.prover[static_cast<std::size_t>(
          flat - kVerifierPlayers * kObservablesPerVerifier)] = 1;
    }
  }
  return out;
}

std::array<std::vector<CQ2>, 2> outer_isometry_columns() {
  const StabilizerCode& outer = StabilizerCode::outer_four();
  int n = outer.num_physical();
  std::array<std::vector<CQ2>, 2> columns;
  for (int b = 0; b < 2; ++b) {
    std::vector<CQ2> amps(std::size_t{1} << n, CQ2(0));
    std::uint64_t basis =
        b ? std::uint64_t{1} << (n - 1 - outer.input_qubit()) : 0;
    amps[basis] = CQ2(1);
    DenseState state = DenseState::from_amplitudes(n, std::move(amps));
    state.apply(outer.encoder());
    std::vector<CQ2> column(std::size_t{1} << n);
    for (std::uint64_t idx = 0; idx < column.size(); ++idx)
      column[idx] = state.amplitude(idx);
    columns[static_cast<std::size_t>(b)] = std::move(column);
  }
  return columns;
}

DenseMatrix outer_compress(const DenseMatrix& share_op) {
  static const std::array<std::vector<CQ2>, 2> kColumns =
      outer_isometry_columns();
  std::size_t dim = kColumns[0].size();
  check_internal(share_op.size() == dim * dim,
                 "outer_compress expects a 16x16 operator");
  DenseMatrix out(4, CQ2(0));
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      CQ2 sum(0);
      for (std::size_t r = 0; r < dim; ++r) {
        if (kColumns[static_cast<std::size_t>(a)][r].is_zero()) continue;
        CQ2 bra = kColumns[static_cast<std::size_t>(a)][r].conj();
        for (std::size_t c = 0; c < dim; ++c) {
          const CQ2& m = share_op[r * dim + c];
          if (m.is_zero()) continue;
          sum = sum + bra * m * kColumns[static_cast<std::size_t>(b)][c];
        }
      }
      out[static_cast<std::size_t>(a * 2 + b)] = sum;
    }
  }
  return out;
}

DenseMatrix outer_compress_factors(
    const std::array<DenseMatrix, 4>& shares) {
  DenseMatrix op{CQ2(1)};
  for (const DenseMatrix& m : shares) op = dense_tensor(op, m);
  return outer_compress(op);
}

SparseState apply_star_reflection(const HistoryStateSpec& spec, int prover,
                                  const SparseState& state) {
  std::vector<int> local = spec.message_wires(prover);
  for (int q : spec.private_qubits(prover)) local.push_back(q);
  int flag = spec.flag_qubits(prover)[1];
  const ProverAction& action =
      spec.strategy->actions[static_cast<std::size_t>(prover - 1)][0];

  int n = state.num_qubits();
  std::uint64_t flag_mask = std::uint64_t{1} << (n - 1 - flag);
  SparseState low = SparseState::zero_weight(n);   // flag = 0 part
  SparseState high = SparseState::zero_weight(n);  // flag = 1 part
  for (const auto& [basis, amp] : state.amplitudes())
    (basis & flag_mask ? high : low).set_amplitude(basis, amp);

  // P' = |0><1| x P^dag + |1><0| x P: the flag-0 part gets P and moves to
  // flag 1; the flag-1 part gets P^dag and moves to flag 0.
  if (!action.matrix.empty()) {
    low.apply_matrix(local, action.matrix);
    high.apply_matrix(local, dense_adjoint(action.matrix));
  } else {
    for (const Gate& g : action.gates) low.apply(remap_gate(g, local));
    for (auto it = action.gates.rbegin(); it != action.gates.rend(); ++it)
      high.apply(remap_gate(*it, local));
  }
  Gate flip(GateLabel::kX, {flag});
  low.apply(flip);
  high.apply(flip);

  SparseState out = SparseState::zero_weight(n);
  for (const auto& [basis, amp] : low.amplitudes())
    out.set_amplitude(basis, amp);
  for (const auto& [basis, amp] : high.amplitudes()) {
    CQ2 existing = out.amplitude(basis);
    out.set_amplitude(basis, existing + amp);
  }
  return out;
}

AnswerDistribution honest_distribution(const SnapshotTable& table,
                                       const QuestionTuple& tuple) {
  check_internal(table.spec != nullptr && !table.states.empty(),
                 "empty snapshot table");
  const HistoryStateSpec& spec = *table.spec;
  HonestObservableSet set = honest_observables(tuple, spec);

  struct Active {
    int flat;
    const HonestObservable* obs;
  };
  std::vector<Active> active;
  for (int r = 1; r <= kVerifierPlayers; ++r)
    for (int j = 1; j <= kObservablesPerVerifier; ++j) {
      const HonestObservable& obs =
          set.verifier[static_cast<std::size_t>(r - 1)]
                      [static_cast<std::size_t>(j - 1)];
      if (!obs.is_identity())
        active.push_back({flat_verifier_bit(r, j), &obs});
    }
  for (std::size_t i = 0; i < set.prover.size(); ++i)
    if (!set.prover[i].is_identity())
      active.push_back(
          {flat_prover_bit(static_cast<int>(i) + 1), &set.prover[i]});

  std::size_t J = active.size();
  if (J > 16)
    fail(ErrorKind::kCapExceeded,
         "question has " + std::to_string(J) +
             " non-identity observables; the distribution table caps at "
             "2^16 entries");

  std::size_t count = std::size_t{1} << J;
  std::size_t clock_qubits = num_clock_qubits(spec);
  CQ2 weight(Q2(Rat::make(1, static_cast<std::int64_t>(spec.T) + 1)));

  std::vector<Q2> chi(count);
  for (std::size_t s = 0; s < count; ++s) {
    // Assemble the subset's operator, multiplying per-share letter
    // matrices left-to-right in ascending flat order.
    std::map<std::pair<int, int>, DenseMatrix> share_product;
    SubsetOperator op;
    for (std::size_t j = 0; j < J; ++j) {
      if (!(s >> j & 1)) continue;
      const HonestObservable& obs = *active[j].obs;
      if (obs.is_star) {
        op.star_provers.push_back(obs.star_prover);
        continue;
      }
      for (const ShareFactor& f : obs.share_factors) {
        auto key = std::make_pair(f.logical, f.share);
        auto it = share_product.find(key);
        if (it == share_product.end())
          share_product.emplace(key, letter_matrix(f.letter));
        else
          it->second = dense_multiply(it->second, letter_matrix(f.letter));
      }
      for (const auto& factor : obs.direct_factors)
        op.direct.push_back(factor);
    }
    // Group share products by logical qubit and compress.
    std::map<int, std::array<DenseMatrix, 4>> by_logical;
    for (const auto& [key, m] : share_product) {
      auto [logical, share] = key;
      auto it = by_logical.find(logical);
      if (it == by_logical.end()) {
        std::array<DenseMatrix, 4> shares = {
            gate_matrix(GateLabel::kI), gate_matrix(GateLabel::kI),
            gate_matrix(GateLabel::kI), gate_matrix(GateLabel::kI)};
        it = by_logical.emplace(logical, std::move(shares)).first;
      }
      it->second[static_cast<std::size_t>(share)] = m;
    }
    for (const auto& [logical, shares] : by_logical) {
      DenseMatrix compressed = outer_compress_factors(shares);
      if (static_cast<std::size_t>(logical) <= clock_qubits)
        op.clock.emplace(logical, std::move(compressed));
      else
        op.wires.emplace(wire_of_index(spec, logical),
                         std::move(compressed));
    }

    // The clock factor prunes almost all (bra, ket) time pairs: unary
    // patterns must agree outside the touched clock qubits.  Collect the
    // surviving pairs first and transform only the kets that matter.
    struct Pair {
      std::size_t bra, ket;
      CQ2 factor;
    };
    std::vector<Pair> pairs;
    std::vector<char> needed(spec.T + 1, 0);
    for (std::size_t bra = 0; bra <= spec.T; ++bra) {
      for (std::size_t ket = 0; ket <= spec.T; ++ket) {
        CQ2 cf = clock_factor(op.clock, bra, ket);
        if (cf.is_zero()) continue;
        pairs.push_back({bra, ket, cf});
        needed[ket] = 1;
      }
    }
    std::map<std::size_t, SparseState> kets;
    for (std::size_t t = 0; t <= spec.T; ++t) {
      if (!needed[t]) continue;
      SparseState ket = table.states[t];
      for (const auto& [wire, m] : op.wires) ket.apply_matrix({wire}, m);
      for (const auto& [qubit, letter] : op.direct)
        ket.apply(Gate(letter == QuestionLetter::kX ? GateLabel::kX
                                                    : GateLabel::kZ,
                       {qubit}));
      for (int prover : op.star_provers)
        ket = apply_star_reflection(spec, prover, ket);
      kets.emplace(t, std::move(ket));
    }

    CQ2 total(0);
    for (const Pair& p : pairs) {
      CQ2 overlap = inner_product(table.states[p.bra], kets.at(p.ket));
      if (overlap.is_zero()) continue;
      total = total + p.factor * overlap;
    }
    total = total * weight;
    check_internal(total.is_real(),
                   "observable correlation must be real");
    chi[s] = total.re();
  }

  // Walsh-Hadamard butterfly: probabilities = 2^-J * WHT(chi).
  std::vector<Q2> probs = std::move(chi);
  for (std::size_t bit = 0; bit < J; ++bit) {
    std::size_t stride = std::size_t{1} << bit;
    for (std::size_t base = 0; base < count; base += stride << 1) {
      for (std::size_t off = 0; off < stride; ++off) {
        Q2 lo = probs[base + off];
        Q2 hi = probs[base + stride + off];
        probs[base + off] = lo + hi;
        probs[base + stride + off] = lo - hi;
      }
    }
  }
  Q2 norm(Rat::make(1, static_cast<std::int64_t>(count)));
  Q2 sum(Rat(0));
  for (Q2& p : probs) {
    p = p * norm;
    check_internal(p.sign() >= 0,
                   "honest answer probabilities must be nonnegative");
    sum = sum + p;
  }
  check_internal(sum == Q2(Rat(1)),
                 "honest answer probabilities must sum to one");

  AnswerDistribution dist;
  dist.provers = spec.circuit->provers;
  for (const Active& a : active) dist.free_bits.push_back(a.flat);
  dist.probabilities = std::move(probs);
  return dist;
}

}  // namespace qzk
