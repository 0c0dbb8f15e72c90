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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ftqc/circuit.hpp"
#include "ftqc/concatenated_code.hpp"
#include "ftqc/css_code.hpp"
#include "ftqc/errors.hpp"
#include "ftqc/linear_code.hpp"

namespace ftqc {

inline constexpr size_t kSyndromeRounds = 3;
inline constexpr size_t kDefaultRetryCap = 100;

/// A code plus the decoding tables shared by its gadgets.
struct GadgetContext {
    std::shared_ptr<const PuncturedCssCode> code;
    std::shared_ptr<const SyndromeTable> bit_flip;
    std::shared_ptr<const SyndromeTable> sign_flip;
    /// Checks x_checks + logical_x: sign flips relative to |+_L>.
    std::shared_ptr<const SyndromeTable> plus_prep;
    /// Checks z_checks + logical_z: bit flips relative to |0_L>.
    std::shared_ptr<const SyndromeTable> zero_prep;
    size_t retry_cap = kDefaultRetryCap;

    explicit GadgetContext(std::shared_ptr<const PuncturedCssCode> c) : code(std::move(c)) {
        bit_flip = std::make_shared<SyndromeTable>(code->bit_flip_table);
        sign_flip = std::make_shared<SyndromeTable>(code->sign_flip_table);
        auto px = code->x_checks;
        px.push_back(code->logical_x);
        plus_prep = std::make_shared<SyndromeTable>(code->n, px);
        auto pz = code->z_checks;
        pz.push_back(code->logical_z);
        zero_prep = std::make_shared<SyndromeTable>(code->n, pz);
    }

    size_t max_check_weight() const {
        size_t w = std::max(code->logical_x.weight(), code->logical_z.weight());
        for (const auto& c : code->z_checks) w = std::max(w, c.weight());
        for (const auto& c : code->x_checks) w = std::max(w, c.weight());
        return w;
    }
};

/// Ancilla units for one parity extraction: cat qubits and the test qubit.
struct AncillaUnits {
    std::vector<uint32_t> cat;
    uint32_t test = 0;
};

/// Emits physical locations directly.
class PhysicalEmitter {
   public:
    explicit PhysicalEmitter(CircuitBuilder& b) : b_(b) {}

    CircuitBuilder& builder() { return b_; }
    void prep(uint32_t q) { b_.prep(q); }
    void gate1(GateTag g, uint32_t q) { b_.gate1(g, q); }
    void gate2(GateTag g, uint32_t a, uint32_t c) { b_.gate2(g, a, c); }
    void wait(uint32_t q) { b_.wait(q); }
    uint32_t measure(uint32_t q) { return b_.measure(q); }
    size_t begin_retry() { return b_.begin_retry(); }
    void end_retry(size_t h, uint32_t reject, size_t cap) { b_.end_retry(h, reject, cap); }
    void correct(CorrectionRule rule) { b_.correct(std::move(rule)); }
    uint32_t new_record() { return b_.new_record(); }
    std::vector<uint32_t> support(uint32_t q, bool /*x_type*/) const { return {q}; }

   private:
    CircuitBuilder& b_;
};

/// Cat state on `cat` checked against `test`, retried while the test reads 1.
template <typename Emitter>
void emit_cat(Emitter& em, const std::vector<uint32_t>& cat, uint32_t test, size_t retry_cap) {
    if (cat.size() < 2) throw ParameterError("emit_cat: need at least 2 cat qubits");
    size_t h = em.begin_retry();
    for (uint32_t q : cat) em.prep(q);
    em.prep(test);
    em.gate1(GateTag::A, cat[0]);
    for (size_t i = 0; i + 1 < cat.size(); ++i) em.gate2(GateTag::N, cat[i], cat[i + 1]);
    em.gate2(GateTag::N, cat.front(), test);
    em.gate2(GateTag::N, cat.back(), test);
    uint32_t r = em.measure(test);
    em.end_retry(h, r, retry_cap);
}

/// Parity of the Z-type check on `data` (one unit per check position). The
/// returned records XOR to the parity.
template <typename Emitter>
std::vector<uint32_t> emit_parity_z(Emitter& em, const std::vector<uint32_t>& data, const AncillaUnits& anc,
                                    size_t retry_cap) {
    std::vector<uint32_t> cat(anc.cat.begin(), anc.cat.begin() + data.size());
    emit_cat(em, cat, anc.test, retry_cap);
    for (uint32_t q : cat) em.gate1(GateTag::A, q);
    for (size_t k = 0; k < data.size(); ++k) em.gate2(GateTag::N, data[k], cat[k]);
    std::vector<uint32_t> recs;
    for (uint32_t q : cat) recs.push_back(em.measure(q));
    return recs;
}

/// Parity of the X-type check on `data`.
template <typename Emitter>
std::vector<uint32_t> emit_parity_x(Emitter& em, const std::vector<uint32_t>& data, const AncillaUnits& anc,
                                    size_t retry_cap) {
    std::vector<uint32_t> cat(anc.cat.begin(), anc.cat.begin() + data.size());
    emit_cat(em, cat, anc.test, retry_cap);
    for (size_t k = 0; k < data.size(); ++k) em.gate2(GateTag::N, cat[k], data[k]);
    for (uint32_t q : cat) em.gate1(GateTag::A, q);
    std::vector<uint32_t> recs;
    for (uint32_t q : cat) recs.push_back(em.measure(q));
    return recs;
}

/// One family of checks measured on one block.
struct ParityFamily {
    std::shared_ptr<const SyndromeTable> table;
    /// Z-type parities detect bit flips and are corrected with X.
    bool z_type = true;
    bool reference_random = false;
    std::vector<uint32_t> data;
};

inline std::vector<uint32_t> check_units(const BinaryWord& check, const std::vector<uint32_t>& data) {
    std::vector<uint32_t> out;
    for (size_t i : check.support()) out.push_back(data[i]);
    return out;
}

/// Measures every family `rounds` times (whole set per round) and builds the
/// correction rule.
template <typename Emitter>
CorrectionRule emit_syndrome_rounds(Emitter& em, const std::vector<ParityFamily>& families, const AncillaUnits& anc,
                                    size_t rounds, size_t retry_cap) {
    CorrectionRule rule;
    for (const auto& f : families) {
        CorrectionPart part;
        part.table = f.table;
        part.apply_x = f.z_type;
        part.reference_random = f.reference_random;
        part.rounds.resize(rounds);
        for (uint32_t u : f.data) part.supports.push_back(em.support(u, f.z_type));
        rule.parts.push_back(std::move(part));
    }
    for (size_t r = 0; r < rounds; ++r) {
        for (size_t p = 0; p < families.size(); ++p) {
            const auto& f = families[p];
            for (const BinaryWord& check : f.table->checks()) {
                auto units = check_units(check, f.data);
                auto recs = f.z_type ? emit_parity_z(em, units, anc, retry_cap) : emit_parity_x(em, units, anc, retry_cap);
                rule.parts[p].rounds[r].push_back(std::move(recs));
            }
        }
    }
    return rule;
}

/// Full recovery: z_checks then x_checks, three rounds, then correction.
template <typename Emitter>
void emit_ft_recover(Emitter& em, const GadgetContext& ctx, const std::vector<uint32_t>& data, const AncillaUnits& anc) {
    std::vector<ParityFamily> fam{{ctx.bit_flip, true, false, data}, {ctx.sign_flip, false, false, data}};
    em.correct(emit_syndrome_rounds(em, fam, anc, kSyndromeRounds, ctx.retry_cap));
}

/// Bit-flip-only recovery of one block.
template <typename Emitter>
void emit_partial_recover(Emitter& em, const GadgetContext& ctx, const std::vector<uint32_t>& data,
                          const AncillaUnits& anc) {
    std::vector<ParityFamily> fam{{ctx.bit_flip, true, false, data}};
    em.correct(emit_syndrome_rounds(em, fam, anc, kSyndromeRounds, ctx.retry_cap));
}

/// |+_L>: A on fresh qubits, z_checks (random reference) and the X-type
/// parities x_checks + logical_x, corrected; retried when the agreement rule
/// returns nothing.
template <typename Emitter>
void emit_prepare_plus(Emitter& em, const GadgetContext& ctx, const std::vector<uint32_t>& data,
                       const AncillaUnits& anc) {
    size_t h = em.begin_retry();
    for (uint32_t u : data) em.prep(u);
    for (uint32_t u : data) em.gate1(GateTag::A, u);
    std::vector<ParityFamily> fam{{ctx.bit_flip, true, true, data}, {ctx.plus_prep, false, false, data}};
    CorrectionRule rule = emit_syndrome_rounds(em, fam, anc, kSyndromeRounds, ctx.retry_cap);
    uint32_t null_rec = em.new_record();
    rule.null_record = null_rec;
    em.correct(std::move(rule));
    em.end_retry(h, null_rec, ctx.retry_cap);
}

/// |0_L>: fresh qubits, z_checks + logical_z and x_checks (random reference),
/// corrected; retried when the agreement rule returns nothing.
template <typename Emitter>
void emit_prepare_zero(Emitter& em, const GadgetContext& ctx, const std::vector<uint32_t>& data,
                       const AncillaUnits& anc) {
    size_t h = em.begin_retry();
    for (uint32_t u : data) em.prep(u);
    std::vector<ParityFamily> fam{{ctx.zero_prep, true, false, data}, {ctx.sign_flip, false, true, data}};
    CorrectionRule rule = emit_syndrome_rounds(em, fam, anc, kSyndromeRounds, ctx.retry_cap);
    uint32_t null_rec = em.new_record();
    rule.null_record = null_rec;
    em.correct(std::move(rule));
    em.end_retry(h, null_rec, ctx.retry_cap);
}

/// `waits` idle steps on every data unit, then a full recovery.
template <typename Emitter>
void emit_memory(Emitter& em, const GadgetContext& ctx, const std::vector<uint32_t>& data, const AncillaUnits& anc,
                 size_t waits = 1) {
    for (size_t s = 0; s < waits; ++s) {
        for (uint32_t u : data) em.wait(u);
    }
    emit_ft_recover(em, ctx, data, anc);
}

/// Logical D across two 7-qubit blocks in seven stages. Stage s applies D to
/// (a[q], b[(q + s) mod 7]); bit-flip recoveries of both blocks separate the stages.
template <typename Emitter>
void emit_staged_d(Emitter& em, const GadgetContext& ctx, const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                   const AncillaUnits& anc) {
    size_t n = a.size();
    for (size_t s = 0; s < n; ++s) {
        for (size_t q = 0; q < n; ++q) em.gate2(GateTag::D, a[q], b[(q + s) % n]);
        if (s + 1 < n) {
            emit_partial_recover(em, ctx, a, anc);
            emit_partial_recover(em, ctx, b, anc);
        }
    }
}

/// Emits one level of encoding over blocks of physical qubits: every unit is a
/// block, every operation is a transversal gate followed by a full recovery,
/// preparation is the fault-tolerant |0_L> gadget and measurement decodes the
/// block.
class Level2Emitter {
   public:
    Level2Emitter(CircuitBuilder& b, const GadgetContext& ctx, std::vector<uint32_t> block_offsets, AncillaUnits inner_anc)
        : phys_(b), ctx_(ctx), offsets_(std::move(block_offsets)), anc_(std::move(inner_anc)) {
        for (const auto& [physical, logical] : ctx_.code->transversal) {
            if (!inverse_.count(logical)) inverse_[logical] = physical;
        }
    }

    CircuitBuilder& builder() { return phys_.builder(); }

    std::vector<uint32_t> block(uint32_t u) const {
        std::vector<uint32_t> q(ctx_.code->n);
        for (size_t i = 0; i < q.size(); ++i) q[i] = static_cast<uint32_t>(offsets_.at(u) + i);
        return q;
    }

    void prep(uint32_t u) { emit_prepare_zero(phys_, ctx_, block(u), anc_); }

    void gate1(GateTag g, uint32_t u) {
        GateTag p = physical_for(g);
        for (uint32_t q : block(u)) phys_.gate1(p, q);
        emit_ft_recover(phys_, ctx_, block(u), anc_);
    }

    void gate2(GateTag g, uint32_t a, uint32_t c) {
        GateTag p = physical_for(g);
        auto qa = block(a);
        auto qc = block(c);
        for (size_t i = 0; i < qa.size(); ++i) phys_.gate2(p, qa[i], qc[i]);
        emit_ft_recover(phys_, ctx_, qa, anc_);
        emit_ft_recover(phys_, ctx_, qc, anc_);
    }

    void wait(uint32_t u) {
        for (uint32_t q : block(u)) phys_.wait(q);
        emit_ft_recover(phys_, ctx_, block(u), anc_);
    }

    uint32_t measure(uint32_t u) {
        std::vector<uint32_t> recs;
        for (uint32_t q : block(u)) recs.push_back(phys_.measure(q));
        return builder().decode(std::move(recs), ctx_.bit_flip);
    }

    size_t begin_retry() { return phys_.begin_retry(); }
    void end_retry(size_t h, uint32_t reject, size_t cap) { phys_.end_retry(h, reject, cap); }
    void correct(CorrectionRule rule) { phys_.correct(std::move(rule)); }
    uint32_t new_record() { return phys_.new_record(); }

    /// Physical support of the logical X (or Z) of block u.
    std::vector<uint32_t> support(uint32_t u, bool x_type) const {
        const BinaryWord& w = x_type ? ctx_.code->logical_x : ctx_.code->logical_z;
        std::vector<uint32_t> out;
        for (size_t i : w.support()) out.push_back(static_cast<uint32_t>(offsets_.at(u) + i));
        return out;
    }

   private:
    GateTag physical_for(GateTag logical) const {
        auto it = inverse_.find(logical);
        if (it == inverse_.end()) {
            throw UnsupportedGateError("Level2Emitter: no transversal gate realizes logical " +
                                       std::string(gate_name(logical)));
        }
        return it->second;
    }

    PhysicalEmitter phys_;
    const GadgetContext& ctx_;
    std::vector<uint32_t> offsets_;
    AncillaUnits anc_;
    std::map<GateTag, GateTag> inverse_;
};

enum class GadgetKind { Recover, Memory, Cat, Plus, Zero, StagedD };

inline std::string_view gadget_kind_name(GadgetKind k) {
    switch (k) {
        case GadgetKind::Recover: return "recover";
        case GadgetKind::Memory: return "memory";
        case GadgetKind::Cat: return "cat";
        case GadgetKind::Plus: return "plus";
        case GadgetKind::Zero: return "zero";
        case GadgetKind::StagedD: return "staged-d";
    }
    return "?";
}

/// A circuit together with what its output is supposed to be.
struct Gadget {
    GadgetKind kind = GadgetKind::Recover;
    size_t level = 1;
    FtCircuit circuit;
    std::shared_ptr<const GadgetContext> ctx;
    /// Physical qubits of each output data block.
    std::vector<std::vector<uint32_t>> blocks;
    /// Cat qubits (cat gadget only).
    std::vector<uint32_t> cat;
    /// Two-level codes for level-2 verdicts: bit flips and sign flips.
    std::shared_ptr<const ConcatenatedCode> concatenated;
    std::shared_ptr<const ConcatenatedCode> concatenated_dual;

    bool clifford() const { return kind != GadgetKind::StagedD; }
};

inline std::shared_ptr<const GadgetContext> make_context(const PuncturedCssCode& code) {
    return std::make_shared<GadgetContext>(std::make_shared<PuncturedCssCode>(code));
}

inline std::vector<uint32_t> range_units(size_t begin, size_t count) {
    std::vector<uint32_t> out(count);
    for (size_t i = 0; i < count; ++i) out[i] = static_cast<uint32_t>(begin + i);
    return out;
}

inline AncillaUnits ancilla_units(size_t begin, size_t cat_size) {
    AncillaUnits a;
    a.cat = range_units(begin, cat_size);
    a.test = static_cast<uint32_t>(begin + cat_size);
    return a;
}

namespace detail {

inline Gadget level1_gadget(GadgetKind kind, std::shared_ptr<const GadgetContext> ctx, size_t blocks) {
    Gadget g;
    g.kind = kind;
    g.ctx = ctx;
    size_t n = ctx->code->n;
    for (size_t b = 0; b < blocks; ++b) g.blocks.push_back(range_units(b * n, n));
    return g;
}

inline void finish(Gadget& g, CircuitBuilder& b) {
    g.circuit = b.finish();
    for (const auto& blk : g.blocks) g.circuit.data_qubits.insert(g.circuit.data_qubits.end(), blk.begin(), blk.end());
}

}  // namespace detail

inline Gadget make_recover_gadget(std::shared_ptr<const GadgetContext> ctx) {
    Gadget g = detail::level1_gadget(GadgetKind::Recover, ctx, 1);
    size_t n = ctx->code->n;
    CircuitBuilder b(n + ctx->max_check_weight() + 1);
    PhysicalEmitter em(b);
    emit_ft_recover(em, *ctx, g.blocks[0], ancilla_units(n, ctx->max_check_weight()));
    detail::finish(g, b);
    return g;
}

inline Gadget make_memory_gadget(std::shared_ptr<const GadgetContext> ctx, size_t waits = 1) {
    Gadget g = detail::level1_gadget(GadgetKind::Memory, ctx, 1);
    size_t n = ctx->code->n;
    CircuitBuilder b(n + ctx->max_check_weight() + 1);
    PhysicalEmitter em(b);
    emit_memory(em, *ctx, g.blocks[0], ancilla_units(n, ctx->max_check_weight()), waits);
    detail::finish(g, b);
    return g;
}

inline Gadget make_plus_gadget(std::shared_ptr<const GadgetContext> ctx) {
    Gadget g = detail::level1_gadget(GadgetKind::Plus, ctx, 1);
    size_t n = ctx->code->n;
    CircuitBuilder b(n + ctx->max_check_weight() + 1);
    PhysicalEmitter em(b);
    emit_prepare_plus(em, *ctx, g.blocks[0], ancilla_units(n, ctx->max_check_weight()));
    detail::finish(g, b);
    return g;
}

inline Gadget make_zero_gadget(std::shared_ptr<const GadgetContext> ctx) {
    Gadget g = detail::level1_gadget(GadgetKind::Zero, ctx, 1);
    size_t n = ctx->code->n;
    CircuitBuilder b(n + ctx->max_check_weight() + 1);
    PhysicalEmitter em(b);
    emit_prepare_zero(em, *ctx, g.blocks[0], ancilla_units(n, ctx->max_check_weight()));
    detail::finish(g, b);
    return g;
}

inline Gadget make_staged_d_gadget(std::shared_ptr<const GadgetContext> ctx) {
    if (ctx->code->n != 7) throw ParameterError("staged D is defined for the 7-qubit code");
    Gadget g = detail::level1_gadget(GadgetKind::StagedD, ctx, 2);
    size_t n = ctx->code->n;
    CircuitBuilder b(2 * n + ctx->max_check_weight() + 1);
    PhysicalEmitter em(b);
    emit_staged_d(em, *ctx, g.blocks[0], g.blocks[1], ancilla_units(2 * n, ctx->max_check_weight()));
    detail::finish(g, b);
    g.circuit.data_coupling_allowed = true;
    return g;
}

/// Cat preparation and verification on w qubits (test qubit w).
inline Gadget make_cat_gadget(size_t w, size_t retry_cap = kDefaultRetryCap) {
    Gadget g;
    g.kind = GadgetKind::Cat;
    g.cat = range_units(0, w);
    CircuitBuilder b(w + 1);
    PhysicalEmitter em(b);
    emit_cat(em, g.cat, static_cast<uint32_t>(w), retry_cap);
    g.circuit = b.finish();
    return g;
}

/// Memory at the second level of concatenation: every data qubit is an
/// encoded block and every operation of the first-level memory gadget is
/// replaced by its encoded gadget.
inline Gadget make_level2_memory_gadget(std::shared_ptr<const GadgetContext> ctx, size_t waits = 1) {
    const auto& code = *ctx->code;
    size_t n = code.n;
    size_t cat = ctx->max_check_weight();
    size_t outer_units = n + cat + 1;
    std::vector<uint32_t> offsets;
    for (size_t u = 0; u < outer_units; ++u) offsets.push_back(static_cast<uint32_t>(u * n));
    AncillaUnits inner = ancilla_units(outer_units * n, cat);
    CircuitBuilder b(outer_units * n + cat + 1);
    Level2Emitter em(b, *ctx, offsets, inner);

    Gadget g;
    g.kind = GadgetKind::Memory;
    g.level = 2;
    g.ctx = ctx;
    std::vector<uint32_t> data_units = range_units(0, n);
    std::vector<uint32_t> flat;
    for (uint32_t u : data_units) {
        auto blk = em.block(u);
        flat.insert(flat.end(), blk.begin(), blk.end());
    }
    g.blocks.push_back(flat);
    emit_memory(em, *ctx, data_units, ancilla_units(n, cat), waits);
    g.circuit = b.finish();
    g.circuit.data_qubits = flat;
    g.concatenated = std::make_shared<ConcatenatedCode>(make_concatenated(code.base, code.punctured, code.puncture_position));
    g.concatenated_dual =
        std::make_shared<ConcatenatedCode>(make_concatenated(dual(code.base), code.dual_punctured, code.puncture_position));
    return g;
}

}  // namespace ftqc
