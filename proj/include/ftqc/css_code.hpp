// Copyright 2026 The ftqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ftqc/binary_word.hpp"
#include "ftqc/errors.hpp"
#include "ftqc/gates.hpp"
#include "ftqc/linear_code.hpp"
#include "ftqc/sparse_state.hpp"

namespace ftqc {

/// Physical transversal gate -> logical gate.
using LogicalActionTable = std::map<GateTag, GateTag>;

/// Quantum code built from a classical code C by deleting one coordinate.
///
/// C' = puncture(C) and D' = puncture(dual(C)). Logical |0> and |1> are the
/// uniform superpositions over the even part and the odd coset of C'.
/// z_checks span C'^perp (bit-flip detection), x_checks span C'_0 = D'^perp
/// (sign-flip detection); both are minimum-weight bases.
struct PuncturedCssCode {
    std::string name;
    size_t n = 0;
    LinearCode base;
    size_t puncture_position = 0;
    CosetPair punctured;
    CosetPair dual_punctured;
    std::vector<BinaryWord> z_checks;
    std::vector<BinaryWord> x_checks;
    BinaryWord logical_x;
    BinaryWord logical_z;
    SyndromeTable bit_flip_table;
    SyndromeTable sign_flip_table;
    LogicalActionTable transversal;

    uint64_t logical_x_mask() const { return logical_x.low_word(); }
    uint64_t logical_z_mask() const { return logical_z.low_word(); }
};

inline PuncturedCssCode build_punctured_css(std::string name, const LinearCode& base, size_t position,
                                            LogicalActionTable table) {
    PuncturedCssCode c;
    c.name = std::move(name);
    c.base = base;
    c.puncture_position = position;
    c.n = base.length() - 1;
    if (c.n > 30) throw ParameterError("build_punctured_css: at most 30 physical qubits");
    c.punctured = even_split(puncture(base, position));
    c.dual_punctured = even_split(puncture(dual(base), position));
    c.z_checks = min_weight_basis(dual(c.punctured.parent));
    c.x_checks = min_weight_basis(c.punctured.even_part);
    c.logical_x = c.punctured.odd_representative;
    c.logical_z = c.dual_punctured.odd_representative;
    c.bit_flip_table = SyndromeTable(c.n, c.z_checks);
    c.sign_flip_table = SyndromeTable(c.n, c.x_checks);
    c.transversal = std::move(table);
    return c;
}

/// Seven-qubit code from RM(1,3).
inline PuncturedCssCode build_steane() {
    return build_punctured_css("steane", rm_code(1, 3), 0,
                               {{GateTag::A, GateTag::A},
                                {GateTag::B, GateTag::C},
                                {GateTag::C, GateTag::B},
                                {GateTag::N, GateTag::N},
                                {GateTag::X, GateTag::X},
                                {GateTag::Z, GateTag::Z}});
}

/// Fifteen-qubit code from RM(1,4).
inline PuncturedCssCode build_rm15() {
    return build_punctured_css("rm15", rm_code(1, 4), 0,
                               {{GateTag::B, GateTag::C},
                                {GateTag::C, GateTag::B},
                                {GateTag::D, GateTag::E},
                                {GateTag::E, GateTag::D},
                                {GateTag::N, GateTag::N},
                                {GateTag::X, GateTag::X},
                                {GateTag::Z, GateTag::Z}});
}

inline GateTag logical_action(const PuncturedCssCode& code, GateTag physical) {
    auto it = code.transversal.find(physical);
    if (it == code.transversal.end()) {
        throw UnsupportedGateError("logical_action: " + code.name + " has no transversal " +
                                   std::string(gate_name(physical)));
    }
    return it->second;
}

/// Codewords of one logical basis state: the even part for 0, the odd coset for 1.
inline std::vector<BinaryWord> logical_support(const PuncturedCssCode& code, bool bit) {
    std::vector<BinaryWord> words;
    for (const BinaryWord& w : code.punctured.even_part.codewords()) {
        words.push_back(bit ? (w ^ code.logical_x) : w);
    }
    return words;
}

/// Qubit layout for a multi-block encoded state. Block j occupies qubits
/// [offsets[j], offsets[j] + n); raw qubits carry an unencoded bit.
struct EncodedLayout {
    size_t total_qubits = 0;
    std::vector<size_t> block_offsets;
    std::vector<size_t> raw_qubits;

    size_t num_logical() const { return block_offsets.size() + raw_qubits.size(); }
};

/// Encodes a logical state given by 2^k amplitudes. Bit j of the amplitude
/// index is block j for j < blocks, then the raw qubits in order.
inline SparseState encode_layout(const PuncturedCssCode& code, const EncodedLayout& layout,
                                 const std::vector<Complex>& amplitudes) {
    size_t k = layout.num_logical();
    if (amplitudes.size() != (size_t{1} << k)) throw ParameterError("encode_layout: amplitude count mismatch");
    double nrm = 0;
    for (const Complex& a : amplitudes) nrm += std::norm(a);
    if (std::abs(nrm - 1.0) > 1e-10) throw ParameterError("encode_layout: logical state is not normalized");

    std::vector<uint64_t> even;
    for (const BinaryWord& w : code.punctured.even_part.codewords()) even.push_back(w.low_word());
    uint64_t lx = code.logical_x_mask();
    double coset_scale = 1.0 / std::sqrt(static_cast<double>(even.size()));

    std::vector<SparseState::Entry> entries;
    for (size_t idx = 0; idx < amplitudes.size(); ++idx) {
        if (std::abs(amplitudes[idx]) < 1e-15) continue;
        std::vector<SparseState::Entry> partial{{0, amplitudes[idx]}};
        for (size_t j = 0; j < layout.block_offsets.size(); ++j) {
            bool bit = (idx >> j) & 1;
            std::vector<SparseState::Entry> next;
            next.reserve(partial.size() * even.size());
            for (const auto& p : partial) {
                for (uint64_t w : even) {
                    uint64_t word = bit ? (w ^ lx) : w;
                    next.push_back({p.first | (word << layout.block_offsets[j]), p.second * coset_scale});
                }
            }
            partial = std::move(next);
        }
        for (size_t r = 0; r < layout.raw_qubits.size(); ++r) {
            if ((idx >> (layout.block_offsets.size() + r)) & 1) {
                for (auto& p : partial) p.first |= uint64_t{1} << layout.raw_qubits[r];
            }
        }
        entries.insert(entries.end(), partial.begin(), partial.end());
    }
    return SparseState::from_entries(layout.total_qubits, std::move(entries));
}

inline EncodedLayout block_layout(const PuncturedCssCode& code, size_t blocks) {
    EncodedLayout l;
    l.total_qubits = blocks * code.n;
    for (size_t j = 0; j < blocks; ++j) l.block_offsets.push_back(j * code.n);
    return l;
}

/// alpha |0_L> + beta |1_L>.
inline SparseState encode(const PuncturedCssCode& code, Complex alpha, Complex beta) {
    return encode_layout(code, block_layout(code, 1), {alpha, beta});
}

/// Logical state over `blocks` consecutive blocks.
inline SparseState encode_blocks(const PuncturedCssCode& code, size_t blocks, const std::vector<Complex>& amplitudes) {
    return encode_layout(code, block_layout(code, blocks), amplitudes);
}

/// Applies a gate to every qubit of the block at `offset`, or to every
/// aligned pair of the blocks at `offset` and `offset2` (first block is the
/// control for N).
inline void apply_transversal(SparseState& s, const PuncturedCssCode& code, GateTag g, size_t offset,
                              size_t offset2 = 0) {
    switch (g) {
        case GateTag::A:
        case GateTag::B:
        case GateTag::C:
        case GateTag::X:
        case GateTag::Z:
            for (size_t i = 0; i < code.n; ++i) s.apply_1q(gates::one_qubit(g), offset + i);
            return;
        case GateTag::D:
        case GateTag::E:
            for (size_t i = 0; i < code.n; ++i) s.apply_2q_diag(gates::diagonal(g), offset + i, offset2 + i);
            return;
        case GateTag::N:
            for (size_t i = 0; i < code.n; ++i) s.apply_cnot(offset + i, offset2 + i);
            return;
        default:
            throw UnsupportedGateError("transversal_apply: unsupported gate " + std::string(gate_name(g)));
    }
}

/// Transversal gate on one block (one state) or across two blocks (two states,
/// returned as their tensor product with the first block first).
inline SparseState transversal_apply(const PuncturedCssCode& code, GateTag g, const std::vector<SparseState>& states) {
    if (states.size() == 1) {
        if (is_two_qubit(g)) throw UnsupportedGateError("transversal_apply: two-qubit gate needs two blocks");
        SparseState s = states[0];
        apply_transversal(s, code, g, 0);
        return s;
    }
    if (states.size() == 2) {
        if (!is_two_qubit(g)) throw UnsupportedGateError("transversal_apply: one-qubit gate needs one block");
        SparseState s = SparseState::tensor(states[0], states[1]);
        apply_transversal(s, code, g, 0, states[0].num_qubits());
        return s;
    }
    throw ParameterError("transversal_apply: expected one or two states");
}

/// Applies a logical gate to an unencoded logical state (qubit 0 = first block).
inline void apply_logical(SparseState& s, GateTag g, size_t q0, size_t q1 = 1) {
    switch (g) {
        case GateTag::N: s.apply_cnot(q0, q1); return;
        case GateTag::D:
        case GateTag::E:
        case GateTag::CZ: s.apply_2q_diag(gates::diagonal(g), q0, q1); return;
        default: s.apply_1q(gates::one_qubit(g), q0); return;
    }
}

/// Amplitudes of a small state as a dense vector indexed by its keys.
inline std::vector<Complex> dense_amplitudes(SparseState s) {
    std::vector<Complex> out(size_t{1} << s.num_qubits(), 0.0);
    for (const auto& [k, a] : s.entries()) out[k] = a;
    return out;
}

struct GateTableEntryReport {
    GateTag physical = GateTag::I;
    GateTag logical = GateTag::I;
    double min_fidelity = 1.0;
    size_t states_tested = 0;
    bool pass = true;
};

struct GateTableReport {
    std::string code;
    bool pass = true;
    std::vector<GateTableEntryReport> entries;
};

inline constexpr double kGateTableTolerance = 1e-10;

/// Logical test states for one- or two-qubit gates: basis states and superpositions.
inline std::vector<std::vector<Complex>> logical_test_states(size_t qubits) {
    const double s = 1.0 / std::sqrt(2.0);
    const Complex i(0, 1);
    if (qubits == 1) {
        return {{1, 0}, {0, 1}, {s, s}, {s, -s}, {s, s * i}, {Complex(0.6, 0), Complex(0, 0.8)},
                {Complex(0.28, 0.96) * 0.6, Complex(0.8, 0)}};
    }
    std::vector<std::vector<Complex>> out;
    for (size_t b = 0; b < 4; ++b) {
        std::vector<Complex> v(4, 0.0);
        v[b] = 1.0;
        out.push_back(v);
    }
    out.push_back({0.5, 0.5, 0.5, 0.5});
    out.push_back({0, 0, s, s});
    out.push_back({0, s, 0, s * i});
    out.push_back({Complex(0.5, 0), Complex(0, 0.5), Complex(-0.5, 0), Complex(0.1, 0.7) / std::sqrt(2.0)});
    {
        auto& v = out.back();
        double nrm = 0;
        for (auto& a : v) nrm += std::norm(a);
        for (auto& a : v) a /= std::sqrt(nrm);
    }
    return out;
}

/// Fidelity between transversal `physical` and logical `logical` on one encoded test state.
inline double gate_entry_fidelity(const PuncturedCssCode& code, GateTag physical, GateTag logical,
                                  const std::vector<Complex>& amps) {
    size_t k = is_two_qubit(physical) ? 2 : 1;
    SparseState enc = encode_blocks(code, k, amps);
    if (k == 1) {
        apply_transversal(enc, code, physical, 0);
    } else {
        apply_transversal(enc, code, physical, 0, code.n);
    }
    SparseState logical_state = SparseState::from_entries(k, [&] {
        std::vector<SparseState::Entry> e;
        for (size_t i = 0; i < amps.size(); ++i) e.push_back({i, amps[i]});
        return e;
    }());
    apply_logical(logical_state, logical, 0, 1);
    SparseState oracle = encode_blocks(code, k, dense_amplitudes(logical_state));
    return fidelity(enc, oracle);
}

/// Checks every entry of `table` by exact simulation on `logical_test_states`.
inline GateTableReport verify_gate_table(const PuncturedCssCode& code, const LogicalActionTable& table) {
    GateTableReport report;
    report.code = code.name;
    for (const auto& [physical, logical] : table) {
        GateTableEntryReport e;
        e.physical = physical;
        e.logical = logical;
        for (const auto& amps : logical_test_states(is_two_qubit(physical) ? 2 : 1)) {
            double f = gate_entry_fidelity(code, physical, logical, amps);
            e.min_fidelity = std::min(e.min_fidelity, f);
            ++e.states_tested;
        }
        e.pass = e.min_fidelity >= 1.0 - kGateTableTolerance;
        report.pass = report.pass && e.pass;
        report.entries.push_back(e);
    }
    return report;
}

inline GateTableReport verify_gate_table(const PuncturedCssCode& code) {
    return verify_gate_table(code, code.transversal);
}

struct LogicalMeasurement {
    bool value = false;
    BinaryWord raw;
    BinaryWord decoded;
    SparseState post_state;
};

/// Measures the block at `offset` qubit by qubit and decodes with `table`.
/// The logical bit is the coset of the decoded word in `cosets`.
template <typename Rng>
LogicalMeasurement measure_block(SparseState state, size_t offset, size_t n, const SyndromeTable& table,
                                 const CosetPair& cosets, Rng& rng) {
    BinaryWord raw(n);
    for (size_t i = 0; i < n; ++i) {
        if (state.measure(offset + i, std::nullopt, rng).outcome) raw.set(i, true);
    }
    BinaryWord decoded = decode(table, raw);
    return {cosets.is_odd(decoded), raw, decoded, std::move(state)};
}

/// Classical-basis logical measurement of the block at `offset`.
template <typename Rng>
LogicalMeasurement logical_measure_classical(const PuncturedCssCode& code, SparseState state, Rng& rng,
                                             size_t offset = 0) {
    return measure_block(std::move(state), offset, code.n, code.bit_flip_table, code.punctured, rng);
}

template <typename Rng>
LogicalMeasurement logical_measure_classical(const PuncturedCssCode& code, SparseState state,
                                             const SyndromeTable& decoder, Rng& rng, size_t offset = 0) {
    return measure_block(std::move(state), offset, code.n, decoder, code.punctured, rng);
}

/// Dual-basis logical measurement: A on every qubit, then decoding against D'.
/// `value` is true for the minus outcome.
template <typename Rng>
LogicalMeasurement logical_measure_dual(const PuncturedCssCode& code, SparseState state, Rng& rng,
                                        size_t offset = 0) {
    for (size_t i = 0; i < code.n; ++i) state.apply_1q(gates::A(), offset + i);
    return measure_block(std::move(state), offset, code.n, code.sign_flip_table, code.dual_punctured, rng);
}

struct AProtocolRecord {
    bool minus = false;
    double probability = 0.0;
    BinaryWord raw;
};

/// Unencoded A via B, CNOT from a |+> ancilla, B on the ancilla and a
/// plus/minus measurement of the ancilla. Qubit `data` of `state` receives A;
/// the ancilla is appended as a new last qubit and left measured.
template <typename Rng>
AProtocolRecord a_gate_protocol_raw(SparseState& state, size_t data, std::optional<bool> forced_minus, Rng& rng) {
    size_t anc = state.num_qubits();
    state.extend(1);
    state.apply_1q(gates::A(), anc);
    state.apply_1q(gates::B(), data);
    state.apply_cnot(anc, data);
    state.apply_1q(gates::B(), anc);
    state.apply_1q(gates::A(), anc);
    MeasureResult m = state.measure(anc, forced_minus, rng);
    if (!m.outcome) state.apply_1q(gates::X(), data);
    state.apply_1q(gates::B(), data);
    return {m.outcome, m.probability, BinaryWord::from_uint(m.outcome, 1)};
}

/// Encoded A. The data block sits at `data_offset`; an encoded |+_L> block is
/// appended and consumed. Logical B is transversal C, logical X transversal X.
template <typename Rng>
AProtocolRecord a_gate_protocol(const PuncturedCssCode& code, SparseState& state, size_t data_offset,
                                std::optional<bool> forced_minus, Rng& rng) {
    const double s = 1.0 / std::sqrt(2.0);
    size_t anc = state.num_qubits();
    SparseState plus = encode(code, s, s);
    state = SparseState::tensor(state, plus);
    apply_transversal(state, code, GateTag::C, data_offset);
    apply_transversal(state, code, GateTag::N, anc, data_offset);
    apply_transversal(state, code, GateTag::C, anc);

    uint64_t x_bar = code.logical_x_mask() << anc;
    bool minus;
    double prob;
    if (forced_minus) {
        minus = *forced_minus;
        prob = project_pauli(state, x_bar, 0, minus);
    } else {
        double expect = pauli_expectation(state, x_bar, 0);
        minus = std::uniform_real_distribution<double>(0.0, 1.0)(rng) >= (1.0 + expect) / 2.0;
        prob = project_pauli(state, x_bar, 0, minus);
    }
    LogicalMeasurement m = logical_measure_dual(code, std::move(state), rng, anc);
    state = std::move(m.post_state);
    if (m.value != minus) throw ParameterError("a_gate_protocol: decoded ancilla outcome disagrees with projection");
    if (!minus) apply_transversal(state, code, GateTag::X, data_offset);
    apply_transversal(state, code, GateTag::C, data_offset);
    return {minus, prob, m.raw};
}

struct IdentityCheck {
    std::string name;
    double max_error = 0.0;
    bool pass = true;
};

struct IdentityReport {
    bool pass = true;
    std::vector<IdentityCheck> checks;
};

inline constexpr double kIdentityTolerance = 1e-12;

/// Dense matrix of a circuit on k qubits. Row/column index puts qubit 0 in
/// the most significant bit.
template <typename Circuit>
std::vector<std::vector<Complex>> circuit_matrix(size_t k, Circuit&& circuit) {
    size_t dim = size_t{1} << k;
    auto key_of = [k](size_t idx) {
        uint64_t key = 0;
        for (size_t q = 0; q < k; ++q) {
            if ((idx >> (k - 1 - q)) & 1) key |= uint64_t{1} << q;
        }
        return key;
    };
    std::vector<std::vector<Complex>> m(dim, std::vector<Complex>(dim, 0.0));
    for (size_t col = 0; col < dim; ++col) {
        SparseState s = SparseState::basis(k, key_of(col));
        circuit(s);
        for (size_t row = 0; row < dim; ++row) m[row][col] = s.amplitude(key_of(row));
    }
    return m;
}

inline double max_matrix_error(const std::vector<std::vector<Complex>>& a, const std::vector<std::vector<Complex>>& b) {
    double err = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        for (size_t j = 0; j < a.size(); ++j) err = std::max(err, std::abs(a[i][j] - b[i][j]));
    }
    return err;
}

/// Two-controlled Z on (a, b, c) from two CNOTs, two E and one D.
inline void apply_ccz(SparseState& s, size_t a, size_t b, size_t c) {
    s.apply_2q_diag(gates::E(), b, c);
    s.apply_cnot(a, b);
    s.apply_2q_diag(gates::D(), b, c);
    s.apply_cnot(a, b);
    s.apply_2q_diag(gates::E(), a, c);
}

/// Toffoli with target c: A on c around the two-controlled Z.
inline void apply_toffoli(SparseState& s, size_t a, size_t b, size_t c) {
    s.apply_1q(gates::A(), c);
    apply_ccz(s, a, b, c);
    s.apply_1q(gates::A(), c);
}

inline IdentityReport gate_identities_check() {
    IdentityReport report;
    auto add = [&](std::string name, double err) {
        bool ok = err <= kIdentityTolerance;
        report.pass = report.pass && ok;
        report.checks.push_back({std::move(name), err, ok});
    };
    auto diag = [](std::vector<Complex> d) {
        std::vector<std::vector<Complex>> m(d.size(), std::vector<Complex>(d.size(), 0.0));
        for (size_t i = 0; i < d.size(); ++i) m[i][i] = d[i];
        return m;
    };

    auto d_squared = circuit_matrix(2, [](SparseState& s) {
        s.apply_2q_diag(gates::D(), 0, 1);
        s.apply_2q_diag(gates::D(), 0, 1);
    });
    add("D^2 = CZ", max_matrix_error(d_squared, diag({1, 1, 1, -1})));

    auto cnot = circuit_matrix(2, [](SparseState& s) {
        s.apply_1q(gates::A(), 1);
        s.apply_2q_diag(gates::D(), 0, 1);
        s.apply_2q_diag(gates::D(), 0, 1);
        s.apply_1q(gates::A(), 1);
    });
    std::vector<std::vector<Complex>> n_oracle = diag({1, 1, 0, 0});
    n_oracle[2][3] = 1;
    n_oracle[3][2] = 1;
    add("A D^2 A = N", max_matrix_error(cnot, n_oracle));

    auto ccz = circuit_matrix(3, [](SparseState& s) { apply_ccz(s, 0, 1, 2); });
    add("two-controlled Z", max_matrix_error(ccz, diag({1, 1, 1, 1, 1, 1, 1, -1})));

    auto toffoli = circuit_matrix(3, [](SparseState& s) { apply_toffoli(s, 0, 1, 2); });
    std::vector<std::vector<Complex>> t_oracle = diag({1, 1, 1, 1, 1, 1, 0, 0});
    t_oracle[6][7] = 1;
    t_oracle[7][6] = 1;
    add("Toffoli", max_matrix_error(toffoli, t_oracle));
    return report;
}

}  // namespace ftqc
