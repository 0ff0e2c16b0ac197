// Copyright 2026 The qzk Authors
// SPDX-License-Identifier: Apache-2.0

#include "qzk/stabilizer_code.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>

#include "qzk/error.hpp"

namespace qzk {

namespace {

using BitRow = std::vector<std::uint8_t>;

// Reduced row echelon form over GF(2); returns the pivot column of each
// surviving row (rows are compacted to the nonzero ones, in pivot order).
std::vector<int> rref(std::vector<BitRow>& rows, int width) {
  std::vector<int> pivots;
  std::size_t rank = 0;
  for (int col = 0; col < width && rank < rows.size(); ++col) {
    std::size_t hit = rank;
    while (hit < rows.size() && !rows[hit][col]) ++hit;
    if (hit == rows.size()) continue;
    std::swap(rows[rank], rows[hit]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != rank && rows[r][col]) {
        for (int c = 0; c < width; ++c) rows[r][c] ^= rows[rank][c];
      }
    }
    pivots.push_back(col);
    ++rank;
  }
  rows.resize(rank);
  return pivots;
}

// Symplectic GF(2) row of a Pauli: [x bits | z bits].
BitRow symplectic_row(const PauliOperator& p) {
  int n = p.num_qubits();
  BitRow row(2 * n, 0);
  for (int q = 0; q < n; ++q) {
    row[q] = p.x_bit(q);
    row[n + q] = p.z_bit(q);
  }
  return row;
}

std::size_t gf2_rank(std::vector<BitRow> rows, int width) {
  return rref(rows, width).size();
}

// Solves A u = rhs over GF(2); the system must be consistent.
BitRow gf2_solve(std::vector<BitRow> rows, std::vector<std::uint8_t> rhs,
                 int width) {
  std::vector<int> pivots;
  std::size_t rank = 0;
  for (int col = 0; col < width && rank < rows.size(); ++col) {
    std::size_t hit = rank;
    while (hit < rows.size() && !rows[hit][col]) ++hit;
    if (hit == rows.size()) continue;
    std::swap(rows[rank], rows[hit]);
    std::swap(rhs[rank], rhs[hit]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != rank && rows[r][col]) {
        for (int c = 0; c < width; ++c) rows[r][c] ^= rows[rank][c];
        rhs[r] ^= rhs[rank];
      }
    }
    pivots.push_back(col);
    ++rank;
  }
  for (std::size_t r = rank; r < rows.size(); ++r)
    check_internal(rhs[r] == 0, "inconsistent GF(2) sign system");
  BitRow u(width, 0);
  for (std::size_t r = 0; r < rank; ++r) u[pivots[r]] = rhs[r];
  return u;
}

struct Tableau {
  std::vector<PauliOperator> stab, destab;
  PauliOperator lx, lz;
};

// Non-owning view so decompose never copies the tableau.
struct TableauView {
  const std::vector<PauliOperator>& stab;
  const std::vector<PauliOperator>& destab;
  const PauliOperator& lx;
  const PauliOperator& lz;
  TableauView(const Tableau& t)
      : stab(t.stab), destab(t.destab), lx(t.lx), lz(t.lz) {}
  TableauView(const std::vector<PauliOperator>& s,
              const std::vector<PauliOperator>& d, const PauliOperator& x,
              const PauliOperator& z)
      : stab(s), destab(d), lx(x), lz(z) {}
};

StabilizerCode::Decomposition decompose_against(const TableauView& t,
                                                const PauliOperator& p) {
  StabilizerCode::Decomposition d;
  std::size_t m = t.stab.size();
  d.destab_exp.resize(m);
  d.stab_exp.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    d.destab_exp[i] = p.commutes_with(t.stab[i]) ? 0 : 1;
    d.stab_exp[i] = p.commutes_with(t.destab[i]) ? 0 : 1;
  }
  d.x_exp = p.commutes_with(t.lz) ? 0 : 1;
  d.z_exp = p.commutes_with(t.lx) ? 0 : 1;
  PauliOperator candidate = PauliOperator::identity(p.num_qubits());
  for (std::size_t i = 0; i < m; ++i)
    if (d.destab_exp[i]) candidate = candidate * t.destab[i];
  for (std::size_t i = 0; i < m; ++i)
    if (d.stab_exp[i]) candidate = candidate * t.stab[i];
  if (d.x_exp) candidate = candidate * t.lx;
  if (d.z_exp) candidate = candidate * t.lz;
  check_internal(candidate.equal_up_to_phase(p),
                 "tableau decomposition letter mismatch");
  d.phase_delta =
      ((p.phase_exponent() - candidate.phase_exponent()) % 4 + 4) % 4;
  return d;
}

// Conjugates the trivial tableau through the encoder: wire `input` carries
// the logical qubit, every other wire contributes a stabilizer/destabilizer
// pair (E Z_q E^dag, E X_q E^dag).
Tableau build_tableau(int n, int input, const std::vector<Gate>& encoder) {
  Tableau t;
  for (int q = 0; q < n; ++q) {
    PauliOperator zq = PauliOperator::identity(n);
    zq.set_letter(q, 'Z');
    PauliOperator xq = PauliOperator::identity(n);
    xq.set_letter(q, 'X');
    if (q == input) {
      t.lz = conjugate_pauli(zq, encoder);
      t.lx = conjugate_pauli(xq, encoder);
    } else {
      t.stab.push_back(conjugate_pauli(zq, encoder));
      t.destab.push_back(conjugate_pauli(xq, encoder));
    }
  }
  return t;
}

}  // namespace

StabilizerCode StabilizerCode::create(std::string name, int num_physical,
                                      int distance,
                                      std::vector<PauliOperator> generators,
                                      PauliOperator logical_x,
                                      PauliOperator logical_z) {
  int n = num_physical;
  if (n < 1) fail(ErrorKind::kDomain, "code needs at least one qubit");
  if (distance < 1) fail(ErrorKind::kDomain, "code distance must be positive");
  if ((int)generators.size() != n - 1)
    fail(ErrorKind::kDomain, "a one-logical-qubit code on " +
                                 std::to_string(n) + " qubits needs " +
                                 std::to_string(n - 1) + " generators");
  for (const PauliOperator& g : generators) {
    if (g.num_qubits() != n)
      fail(ErrorKind::kDomain, "generator width mismatch");
    if (!g.is_hermitian())
      fail(ErrorKind::kDomain, "generator " + g.str() + " is not Hermitian");
    if (g.is_identity_up_to_phase())
      fail(ErrorKind::kDomain, "identity is not a valid generator");
  }
  for (std::size_t i = 0; i < generators.size(); ++i)
    for (std::size_t j = i + 1; j < generators.size(); ++j)
      if (!generators[i].commutes_with(generators[j]))
        fail(ErrorKind::kDomain, "generators " + generators[i].str() +
                                     " and " + generators[j].str() +
                                     " anticommute");
  for (const PauliOperator* l : {&logical_x, &logical_z}) {
    if (l->num_qubits() != n)
      fail(ErrorKind::kDomain, "logical operator width mismatch");
    if (!l->is_hermitian())
      fail(ErrorKind::kDomain, "logical operators must be Hermitian");
    for (const PauliOperator& g : generators)
      if (!l->commutes_with(g))
        fail(ErrorKind::kDomain,
             "logical operator " + l->str() + " anticommutes with " + g.str());
  }
  if (logical_x.commutes_with(logical_z))
    fail(ErrorKind::kDomain, "logical X and Z must anticommute");

  // Independence over the symplectic vector space.
  std::vector<BitRow> rows;
  for (const PauliOperator& g : generators) rows.push_back(symplectic_row(g));
  if (gf2_rank(rows, 2 * n) != generators.size())
    fail(ErrorKind::kDomain, "generators are not independent");
  rows.push_back(symplectic_row(logical_x));
  rows.push_back(symplectic_row(logical_z));
  if (gf2_rank(rows, 2 * n) != generators.size() + 2)
    fail(ErrorKind::kDomain, "logical operators overlap the stabilizer span");

  // CSS split: every generator pure X-type or pure Z-type.
  std::vector<BitRow> xrows;
  for (const PauliOperator& g : generators) {
    bool has_x = false, has_z = false;
    for (int q = 0; q < n; ++q) {
      has_x |= g.x_bit(q) != 0;
      has_z |= g.z_bit(q) != 0;
    }
    if (has_x && has_z)
      fail(ErrorKind::kDomain,
           "encoder synthesis needs X/Z-split generators; " + g.str() +
               " mixes both");
    if (has_x) {
      BitRow r(n, 0);
      for (int q = 0; q < n; ++q) r[q] = g.x_bit(q);
      xrows.push_back(std::move(r));
    }
  }
  for (int q = 0; q < n; ++q)
    if (logical_x.z_bit(q))
      fail(ErrorKind::kDomain, "logical X must be an X-type operator");

  // Encoder synthesis from the X-type rows: spread the input wire across
  // the reduced logical-X support, then expand each row from its pivot.
  std::vector<int> pivots = rref(xrows, n);
  BitRow ell(n, 0);
  for (int q = 0; q < n; ++q) ell[q] = logical_x.x_bit(q);
  for (std::size_t r = 0; r < xrows.size(); ++r) {
    if (ell[pivots[r]]) {
      for (int c = 0; c < n; ++c) ell[c] ^= xrows[r][c];
    }
  }
  int input = -1;
  for (int q = 0; q < n && input < 0; ++q)
    if (ell[q]) input = q;
  check_internal(input >= 0, "logical X reduced to the identity");
  std::vector<Gate> encoder;
  for (int q = 0; q < n; ++q)
    if (ell[q] && q != input)
      encoder.push_back(Gate(GateLabel::kCNOT, {input, q}));
  for (std::size_t r = 0; r < xrows.size(); ++r) {
    int p = pivots[r];
    encoder.push_back(Gate(GateLabel::kH, {p}));
    for (int q = 0; q < n; ++q)
      if (xrows[r][q] && q != p)
        encoder.push_back(Gate(GateLabel::kCNOT, {p, q}));
  }

  // The synthesized encoder realizes the unsigned code. Compare declared
  // signs against the tableau and patch with a trailing Pauli layer.
  Tableau tab = build_tableau(n, input, encoder);
  std::vector<BitRow> sign_rows;
  std::vector<std::uint8_t> sign_rhs;
  auto sign_constraint = [&](const PauliOperator& op, bool want_logical_x,
                             bool want_logical_z) {
    Decomposition d = decompose_against(tab, op);
    for (std::uint8_t e : d.destab_exp)
      check_internal(e == 0, "declared operator outside synthesized group");
    check_internal(d.x_exp == (want_logical_x ? 1 : 0) &&
                       d.z_exp == (want_logical_z ? 1 : 0),
                   "declared operator has unexpected logical content");
    check_internal(d.phase_delta % 2 == 0, "non-Hermitian sign residue");
    // Row expresses anticommutation with a candidate Pauli fix u:
    // coefficients [op.z | op.x], right side 1 when the sign must flip.
    BitRow row(2 * n, 0);
    for (int q = 0; q < n; ++q) {
      row[q] = op.z_bit(q);
      row[n + q] = op.x_bit(q);
    }
    sign_rows.push_back(std::move(row));
    sign_rhs.push_back(d.phase_delta == 2 ? 1 : 0);
  };
  for (const PauliOperator& g : generators) sign_constraint(g, false, false);
  sign_constraint(logical_x, true, false);
  sign_constraint(logical_z, false, true);
  bool needs_fix = false;
  for (std::uint8_t b : sign_rhs) needs_fix |= b != 0;
  if (needs_fix) {
    BitRow u = gf2_solve(std::move(sign_rows), std::move(sign_rhs), 2 * n);
    for (int q = 0; q < n; ++q) {
      if (u[q]) encoder.push_back(Gate(GateLabel::kX, {q}));
      if (u[n + q]) encoder.push_back(Gate(GateLabel::kZ, {q}));
    }
    tab = build_tableau(n, input, encoder);
    for (const PauliOperator& g : generators) {
      Decomposition d = decompose_against(tab, g);
      check_internal(d.phase_delta == 0, "sign patch failed on a generator");
    }
    check_internal(decompose_against(tab, logical_x).phase_delta == 0 &&
                       decompose_against(tab, logical_z).phase_delta == 0,
                   "sign patch failed on a logical operator");
  }

  StabilizerCode code;
  code.name_ = std::move(name);
  code.n_ = n;
  code.distance_ = distance;
  code.gens_ = std::move(generators);
  code.logical_x_ = std::move(logical_x);
  code.logical_z_ = std::move(logical_z);
  code.encoder_ = std::move(encoder);
  code.input_qubit_ = input;
  code.canon_stab_ = std::move(tab.stab);
  code.canon_destab_ = std::move(tab.destab);
  code.canon_lx_ = std::move(tab.lx);
  code.canon_lz_ = std::move(tab.lz);
  code.degenerate_ = false;
  for (const PauliOperator& g : code.gens_)
    if (g.weight() < distance) code.degenerate_ = true;
  return code;
}

const StabilizerCode& StabilizerCode::trivial() {
  static const StabilizerCode code =
      create("trivial", 1, 1, {}, PauliOperator::parse("X"),
             PauliOperator::parse("Z"));
  return code;
}

const StabilizerCode& StabilizerCode::steane() {
  static const StabilizerCode code = [] {
    std::vector<PauliOperator> gens;
    for (const char* s : {"IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ",
                          "IZZIIZZ", "ZIZIZIZ"})
      gens.push_back(PauliOperator::parse(s));
    return create("steane", 7, 3, std::move(gens),
                  PauliOperator::parse("XXXXXXX"),
                  PauliOperator::parse("ZZZZZZZ"));
  }();
  return code;
}

const StabilizerCode& StabilizerCode::outer_four() {
  static const StabilizerCode code = [] {
    std::vector<PauliOperator> gens;
    for (const char* s : {"XXXX", "ZIIZ", "IZZI"})
      gens.push_back(PauliOperator::parse(s));
    return create("outer4", 4, 2, std::move(gens),
                  PauliOperator::parse("XIIX"), PauliOperator::parse("ZZII"));
  }();
  return code;
}

StabilizerCode StabilizerCode::concatenated_steane(int levels) {
  if (levels < 1 || levels > 3)
    fail(ErrorKind::kCapExceeded,
         "concatenation level must be between 1 and 3");
  if (levels == 1) return steane();
  StabilizerCode prev = concatenated_steane(levels - 1);
  int nsub = prev.num_physical();
  int n = 7 * nsub;
  std::vector<PauliOperator> gens;
  // Lift each top-level generator by replacing letters with the previous
  // level's logical operators.
  for (const PauliOperator& h : steane().generators()) {
    PauliOperator lifted = PauliOperator::identity(n);
    for (int p = 0; p < 7; ++p) {
      char c = h.letter(p);
      if (c == 'I') continue;
      check_internal(c == 'X' || c == 'Z', "unexpected letter in CSS lift");
      const PauliOperator& rep =
          (c == 'X') ? prev.logical_x() : prev.logical_z();
      std::vector<int> where(nsub);
      for (int q = 0; q < nsub; ++q) where[q] = p * nsub + q;
      lifted = lifted * rep.embed(n, where);
    }
    gens.push_back(std::move(lifted));
  }
  // Embed each sub-block's generators.
  for (int p = 0; p < 7; ++p) {
    std::vector<int> where(nsub);
    for (int q = 0; q < nsub; ++q) where[q] = p * nsub + q;
    for (const PauliOperator& g : prev.generators())
      gens.push_back(g.embed(n, where));
  }
  std::string xs(n, 'X'), zs(n, 'Z');
  int distance = 1;
  for (int l = 0; l < levels; ++l) distance *= 3;
  return create("steane^" + std::to_string(levels), n, distance,
                std::move(gens), PauliOperator::parse(xs),
                PauliOperator::parse(zs));
}

std::vector<Gate> StabilizerCode::decoder() const {
  std::vector<Gate> rev(encoder_.rbegin(), encoder_.rend());
  return rev;
}

StabilizerCode::Decomposition StabilizerCode::decompose(
    const PauliOperator& p) const {
  if (p.num_qubits() != n_)
    fail(ErrorKind::kDomain, "operator width does not match the code");
  return decompose_against(
      TableauView(canon_stab_, canon_destab_, canon_lx_, canon_lz_), p);
}

StabilizerCode::Membership StabilizerCode::classify(
    const PauliOperator& p) const {
  Decomposition d = decompose(p);
  for (std::uint8_t e : d.destab_exp)
    if (e) return Membership::kOutsideNormalizer;
  if (d.x_exp || d.z_exp) return Membership::kLogicalNotStabilizer;
  return Membership::kInStabilizerGroup;
}

std::optional<PauliOperator> StabilizerCode::logical_action(
    const PauliOperator& p) const {
  Decomposition d = decompose(p);
  for (std::uint8_t e : d.destab_exp)
    if (e) return std::nullopt;
  return PauliOperator::from_bits({d.x_exp}, {d.z_exp}, d.phase_delta);
}

StabilizerCode::TraceResult StabilizerCode::codeword_pauli_trace(
    const PauliOperator& p) const {
  std::optional<PauliOperator> action = logical_action(p);
  if (!action) return {TraceResult::Kind::kZero, CQ2()};
  if (!action->is_identity_up_to_phase())
    return {TraceResult::Kind::kLogicalDependent, CQ2()};
  return {TraceResult::Kind::kScalar, CQ2::i_pow(action->phase_exponent())};
}

CQ2 StabilizerCode::known_state_trace(const DenseMatrix& sigma,
                                      const PauliOperator& p) const {
  if (sigma.size() != 4)
    fail(ErrorKind::kDomain, "logical density must be 2x2");
  std::optional<PauliOperator> action = logical_action(p);
  if (!action) return CQ2();
  DenseMatrix lam = pauli_dense(*action);
  CQ2 sum;  // Tr(sigma * lam)
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) sum = sum + sigma[r * 2 + c] * lam[c * 2 + r];
  return sum;
}

namespace {

// Shared reduction loop: expands rho_Q in the Hermitian letter basis with
// coefficients supplied by `trace_of` (which receives the embedded Pauli).
template <typename TraceFn>
DenseMatrix reduce_via_traces(int block_width, const std::vector<int>& qubits,
                              TraceFn&& trace_of) {
  int k = (int)qubits.size();
  if (k > 10) fail(ErrorKind::kCapExceeded, "reduction wider than 10 qubits");
  for (int q : qubits)
    if (q < 0 || q >= block_width)
      fail(ErrorKind::kDomain, "reduction qubit outside the register");
  for (std::size_t i = 0; i < qubits.size(); ++i)
    for (std::size_t j = i + 1; j < qubits.size(); ++j)
      if (qubits[i] == qubits[j])
        fail(ErrorKind::kDomain, "duplicate qubit in reduction");
  std::size_t dim = std::size_t(1) << k;
  DenseMatrix rho(dim * dim, CQ2());
  Q2 norm = Rat::pow2(-k);
  std::uint64_t total = 1;
  for (int i = 0; i < k; ++i) total *= 4;
  const char kLetters[4] = {'I', 'X', 'Y', 'Z'};
  for (std::uint64_t word = 0; word < total; ++word) {
    std::string local(k, 'I');
    std::uint64_t w = word;
    for (int i = 0; i < k; ++i) {
      local[i] = kLetters[w % 4];
      w /= 4;
    }
    PauliOperator lp = PauliOperator::parse(local);
    CQ2 coeff = trace_of(lp.embed(block_width, qubits));
    if (coeff.is_zero()) continue;
    DenseMatrix pd = pauli_dense(lp);
    for (std::size_t e = 0; e < dim * dim; ++e)
      rho[e] = rho[e] + coeff * norm * pd[e];
  }
  return rho;
}

}  // namespace

DenseMatrix StabilizerCode::reduced_codeword_density(
    const std::vector<int>& qubits) const {
  if ((int)qubits.size() >= distance_)
    fail(ErrorKind::kInsufficientDistance,
         "reduction on " + std::to_string(qubits.size()) +
             " qubits is not state-independent at distance " +
             std::to_string(distance_));
  return reduce_via_traces(n_, qubits, [&](const PauliOperator& p) {
    TraceResult t = codeword_pauli_trace(p);
    check_internal(t.kind != TraceResult::Kind::kLogicalDependent,
                   "logical operator below the code distance");
    return t.kind == TraceResult::Kind::kScalar ? t.scalar : CQ2();
  });
}

DenseMatrix StabilizerCode::reduced_known_density(
    const std::vector<int>& qubits, const DenseMatrix& sigma) const {
  if (sigma.size() != 4)
    fail(ErrorKind::kDomain, "logical density must be 2x2");
  return reduce_via_traces(n_, qubits, [&](const PauliOperator& p) {
    return known_state_trace(sigma, p);
  });
}

std::string StabilizerCode::to_file_text() const {
  std::ostringstream out;
  out << "[[" << n_ << ",1," << distance_ << "]]\n";
  for (const PauliOperator& g : gens_) out << g.str() << "\n";
  out << "LOGICAL_X " << logical_x_.str() << "\n";
  out << "LOGICAL_Z " << logical_z_.str() << "\n";
  return out.str();
}

StabilizerCode StabilizerCode::from_file_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto next_line = [&](std::string& dst) {
    while (std::getline(in, line)) {
      std::size_t a = line.find_first_not_of(" \t\r");
      if (a == std::string::npos) continue;
      std::size_t b = line.find_last_not_of(" \t\r");
      dst = line.substr(a, b - a + 1);
      if (dst[0] == '#') continue;
      return true;
    }
    return false;
  };
  std::string header;
  if (!next_line(header))
    fail(ErrorKind::kFormat, "empty code description");
  int n = 0, k = 0, d = 0;
  char c1 = 0, c2 = 0;
  std::istringstream hs(header);
  if (!(hs.ignore(2) && hs >> n && hs >> c1 && hs >> k && hs >> c2 && hs >> d) ||
      header.substr(0, 2) != "[[" || c1 != ',' || c2 != ',' ||
      header.substr(header.size() - 2) != "]]")
    fail(ErrorKind::kFormat, "code header must look like [[n,k,d]]");
  if (k != 1)
    fail(ErrorKind::kFormat, "only one-logical-qubit codes are supported");
  std::vector<PauliOperator> gens;
  PauliOperator lx, lz;
  bool have_lx = false, have_lz = false;
  auto after_tag = [](const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t", 9);
    if (a == std::string::npos)
      fail(ErrorKind::kFormat, "LOGICAL line without an operator");
    return s.substr(a);
  };
  std::string body;
  while (next_line(body)) {
    if (body.rfind("LOGICAL_X", 0) == 0) {
      lx = PauliOperator::parse(after_tag(body));
      have_lx = true;
    } else if (body.rfind("LOGICAL_Z", 0) == 0) {
      lz = PauliOperator::parse(after_tag(body));
      have_lz = true;
    } else {
      if (have_lx || have_lz)
        fail(ErrorKind::kFormat, "generators must precede LOGICAL lines");
      gens.push_back(PauliOperator::parse(body));
    }
  }
  if (!have_lx || !have_lz)
    fail(ErrorKind::kFormat, "missing LOGICAL_X or LOGICAL_Z line");
  return create("custom", n, d, std::move(gens), std::move(lx),
                std::move(lz));
}

CQ2 encoded_blocks_trace(const std::vector<BlockRef>& blocks,
                         const DenseMatrix& sigma, const PauliOperator& p) {
  int m = (int)blocks.size();
  if (m < 1 || m > 10) fail(ErrorKind::kDomain, "block count out of range");
  std::size_t dim = std::size_t(1) << m;
  if (sigma.size() != dim * dim)
    fail(ErrorKind::kDomain, "joint logical density has the wrong size");
  std::vector<std::uint8_t> covered(p.num_qubits(), 0);
  for (const BlockRef& b : blocks) {
    check_internal(b.code != nullptr, "block without a code");
    if ((int)b.qubits.size() != b.code->num_physical())
      fail(ErrorKind::kDomain, "block wire list does not match its code");
    for (int q : b.qubits) {
      if (q < 0 || q >= p.num_qubits())
        fail(ErrorKind::kDomain, "block wire outside the register");
      if (covered[q]) fail(ErrorKind::kDomain, "blocks overlap");
      covered[q] = 1;
    }
  }
  for (int q = 0; q < p.num_qubits(); ++q)
    if (!covered[q] && p.letter(q) != 'I')
      fail(ErrorKind::kDomain, "operator acts outside the encoded blocks");

  // Split P into per-block letter factors; the phases of the factors
  // (from Y letters) recombine with a leftover global i-power.
  int phase_used = 0;
  PauliOperator joint_logical = PauliOperator::from_bits({}, {}, 0);
  for (const BlockRef& b : blocks) {
    std::string letters(b.qubits.size(), 'I');
    for (std::size_t j = 0; j < b.qubits.size(); ++j)
      letters[j] = p.letter(b.qubits[j]);
    PauliOperator pb = PauliOperator::parse(letters);
    phase_used += pb.phase_exponent();
    std::optional<PauliOperator> action = b.code->logical_action(pb);
    if (!action) return CQ2();
    joint_logical = joint_logical.tensor(*action);
  }
  int residue = ((p.phase_exponent() - phase_used) % 4 + 4) % 4;
  DenseMatrix lam = pauli_dense(joint_logical);
  CQ2 sum;
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c)
      sum = sum + sigma[r * dim + c] * lam[c * dim + r];
  return CQ2::i_pow(residue) * sum;
}

DenseMatrix reduced_encoded_blocks_density(const std::vector<BlockRef>& blocks,
                                           const DenseMatrix& sigma,
                                           const std::vector<int>& targets,
                                           int num_global_qubits) {
  for (int t : targets) {
    bool inside = false;
    for (const BlockRef& b : blocks)
      for (int q : b.qubits) inside |= q == t;
    if (!inside)
      fail(ErrorKind::kDomain, "reduction qubit outside every block");
  }
  return reduce_via_traces(num_global_qubits, targets,
                           [&](const PauliOperator& p) {
                             return encoded_blocks_trace(blocks, sigma, p);
                           });
}

}  // namespace qzk
