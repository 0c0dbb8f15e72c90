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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "ftqc/circuit.hpp"
#include "ftqc/css_code.hpp"
#include "ftqc/exact_executor.hpp"
#include "ftqc/gadgets.hpp"
#include "ftqc/sparse_state.hpp"

namespace ftqc {

// State-level entry points. Each builds its circuit with the data on qubits
// [0, n) of `state` (or [0, 2n) for staged D) and ancillas after the last
// qubit of `state`, runs it exactly with the given faults (location indices
// refer to that circuit) and drops the ancillas again.

using FaultList = std::span<const ForcedFault>;
using Rng = std::mt19937_64;

struct RunTranscript {
    bool detected = false;
    size_t retries = 0;
    size_t nulls = 0;
};

namespace detail {

inline std::vector<size_t> first_qubits(size_t n) {
    std::vector<size_t> v(n);
    for (size_t i = 0; i < n; ++i) v[i] = i;
    return v;
}

inline RunTranscript run_on(const FtCircuit& c, SparseState& state, size_t original, FaultList faults, Rng& rng,
                            std::vector<uint8_t>* records = nullptr) {
    if (c.n_qubits > state.num_qubits()) state.extend(c.n_qubits - state.num_qubits());
    ExactExecutor ex(c, state, rng);
    ex.set_faults(faults);
    ex.run();
    if (records) *records = ex.records();
    state = state.restrict_to(first_qubits(original));
    return {ex.detected(), ex.retries(), ex.nulls()};
}

}  // namespace detail

/// Cat preparation with its verification test, on qubits 0..w-1 and test qubit w.
inline FtCircuit cat_prep_circuit(size_t w, size_t retry_cap = kDefaultRetryCap) {
    if (w < 2) throw ParameterError("cat_prep_circuit: w must be at least 2");
    return make_cat_gadget(w, retry_cap).circuit;
}

struct ParityResult {
    bool parity = false;
    SparseState post_state;
    RunTranscript transcript;
};

/// Parity of `check` on qubits [0, check.length()) through a verified cat
/// of size weight(check). Z-type measures the classical parity, X-type the
/// parity in the dual basis.
inline ParityResult parity_extract(SparseState state, const BinaryWord& check, FaultList faults, Rng& rng,
                                   bool z_type = true, size_t retry_cap = kDefaultRetryCap) {
    size_t original = state.num_qubits();
    size_t w = check.weight();
    if (w < 2) throw ParameterError("parity_extract: check weight must be at least 2");
    CircuitBuilder b(original + w + 1);
    PhysicalEmitter em(b);
    std::vector<uint32_t> data;
    for (size_t i : check.support()) data.push_back(static_cast<uint32_t>(i));
    AncillaUnits anc = ancilla_units(original, w);
    auto recs = z_type ? emit_parity_z(em, data, anc, retry_cap) : emit_parity_x(em, data, anc, retry_cap);
    FtCircuit c = b.finish();
    c.data_qubits = data;
    std::vector<uint8_t> records;
    ParityResult r;
    r.transcript = detail::run_on(c, state, original, faults, rng, &records);
    for (uint32_t x : recs) r.parity ^= records[x];
    r.post_state = std::move(state);
    return r;
}

struct SyndromeResult {
    /// Agreed syndrome, or nothing when no two consecutive rounds agree.
    std::optional<std::pair<uint32_t, uint32_t>> syndrome;
    /// Per round: (bit-flip syndrome, sign-flip syndrome).
    std::vector<std::pair<uint32_t, uint32_t>> rounds;
    SparseState post_state;
    RunTranscript transcript;
};

inline FtCircuit ft_syndrome_circuit(const GadgetContext& ctx, size_t ancilla_begin, CorrectionRule* rule_out) {
    const size_t n = ctx.code->n;
    size_t w = ctx.max_check_weight();
    CircuitBuilder b(ancilla_begin + w + 1);
    PhysicalEmitter em(b);
    auto data = range_units(0, n);
    std::vector<ParityFamily> fam{{ctx.bit_flip, true, false, data}, {ctx.sign_flip, false, false, data}};
    *rule_out = emit_syndrome_rounds(em, fam, ancilla_units(ancilla_begin, w), kSyndromeRounds, ctx.retry_cap);
    FtCircuit c = b.finish();
    c.data_qubits = data;
    return c;
}

/// Both syndromes measured three times; the agreement rule picks rounds 1-2,
/// then rounds 2-3, else nothing.
inline SyndromeResult ft_syndrome(const GadgetContext& ctx, SparseState state, FaultList faults, Rng& rng) {
    size_t original = state.num_qubits();
    CorrectionRule rule;
    FtCircuit c = ft_syndrome_circuit(ctx, original, &rule);
    std::vector<uint8_t> records;
    SyndromeResult r;
    r.transcript = detail::run_on(c, state, original, faults, rng, &records);
    std::vector<std::vector<uint32_t>> per_round;
    for (size_t k = 0; k < rule.num_rounds(); ++k) {
        std::vector<uint32_t> parts;
        for (const auto& part : rule.parts) {
            uint32_t s = 0;
            for (size_t ch = 0; ch < part.rounds[k].size(); ++ch) {
                uint8_t bit = 0;
                for (uint32_t x : part.rounds[k][ch]) bit ^= records[x];
                s |= uint32_t{bit} << ch;
            }
            parts.push_back(s);
        }
        r.rounds.push_back({parts[0], parts[1]});
        per_round.push_back(std::move(parts));
    }
    if (auto a = agree_syndromes(per_round)) r.syndrome = std::make_pair((*a)[0], (*a)[1]);
    r.post_state = std::move(state);
    return r;
}

struct RecoverResult {
    SparseState state;
    RunTranscript transcript;
};

/// Full recovery of the block on qubits [0, n).
inline RecoverResult ft_recover(const GadgetContext& ctx, SparseState state, FaultList faults, Rng& rng) {
    size_t original = state.num_qubits();
    const size_t n = ctx.code->n;
    size_t w = ctx.max_check_weight();
    CircuitBuilder b(original + w + 1);
    PhysicalEmitter em(b);
    emit_ft_recover(em, ctx, range_units(0, n), ancilla_units(original, w));
    FtCircuit c = b.finish();
    RecoverResult r;
    r.transcript = detail::run_on(c, state, original, faults, rng);
    r.state = std::move(state);
    return r;
}

/// Fault-tolerant |+_L> on n fresh qubits.
inline RecoverResult prepare_plus_L_ft(const GadgetContext& ctx, FaultList faults, Rng& rng) {
    Gadget g = make_plus_gadget(std::make_shared<GadgetContext>(ctx));
    SparseState state(g.circuit.n_qubits);
    RecoverResult r;
    r.transcript = detail::run_on(g.circuit, state, ctx.code->n, faults, rng);
    r.state = std::move(state);
    return r;
}

/// Circuit of `steane_staged_D` for a state of `state_qubits` qubits.
inline FtCircuit staged_d_circuit(const GadgetContext& ctx, size_t state_qubits) {
    size_t w = ctx.max_check_weight();
    CircuitBuilder b(state_qubits + w + 1);
    PhysicalEmitter em(b);
    emit_staged_d(em, ctx, range_units(0, 7), range_units(7, 7), ancilla_units(state_qubits, w));
    return b.finish();
}

/// Logical D across the blocks on qubits [0, 7) (control) and [7, 14).
inline RecoverResult steane_staged_D(const GadgetContext& ctx, SparseState state, FaultList faults, Rng& rng) {
    if (ctx.code->n != 7) throw ParameterError("steane_staged_D: needs the 7-qubit code");
    size_t original = state.num_qubits();
    FtCircuit c = staged_d_circuit(ctx, original);
    RecoverResult r;
    r.transcript = detail::run_on(c, state, original, faults, rng);
    r.state = std::move(state);
    return r;
}

}  // namespace ftqc
