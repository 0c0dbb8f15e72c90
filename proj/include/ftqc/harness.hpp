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

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "ftqc/binary_word.hpp"
#include "ftqc/css_code.hpp"
#include "ftqc/errors.hpp"
#include "ftqc/exact_executor.hpp"
#include "ftqc/frame_executor.hpp"
#include "ftqc/gadgets.hpp"
#include "ftqc/linear_code.hpp"
#include "ftqc/sparse_state.hpp"

namespace ftqc {

inline constexpr double kFidelityTolerance = 1e-9;

/// Syndrome table over 64-bit masks, for codes of length at most 64.
struct MaskTable {
    std::vector<uint64_t> checks;
    std::vector<uint64_t> leaders;

    MaskTable() = default;
    explicit MaskTable(const SyndromeTable& t) {
        if (t.length() > 64) throw ParameterError("MaskTable: length above 64");
        for (const auto& c : t.checks()) checks.push_back(c.low_word());
        leaders.resize(t.num_syndromes());
        for (uint32_t s = 0; s < leaders.size(); ++s) leaders[s] = t.correction(s).low_word();
    }

    uint32_t index(uint64_t w) const {
        uint32_t s = 0;
        for (size_t i = 0; i < checks.size(); ++i) s |= uint32_t(std::popcount(checks[i] & w) & 1) << i;
        return s;
    }
    uint64_t decode(uint64_t w) const { return w ^ leaders[index(w)]; }
};

/// Input, ideal output and kept qubits of an exact gadget run.
///
/// Encoded data blocks are maximally entangled with unencoded reference
/// qubits placed after the circuit's qubits, so a single fidelity detects
/// both logical bit and phase errors.
struct ExactSetup {
    SparseState input;
    /// Ideal output on `keep` (restricted numbering: blocks, then references).
    SparseState ideal;
    std::vector<size_t> keep;
    size_t blocks = 0;
};

inline ExactSetup exact_setup(const Gadget& g) {
    const size_t nc = g.circuit.n_qubits;
    ExactSetup s;
    if (g.level != 1) throw ParameterError("exact_setup: only first-level gadgets fit the exact simulator");
    if (g.kind == GadgetKind::Cat) {
        s.input = SparseState(nc);
        s.keep.assign(g.cat.begin(), g.cat.end());
        std::vector<SparseState::Entry> e{{0, 1 / std::sqrt(2.0)}, {(uint64_t{1} << g.cat.size()) - 1, 1 / std::sqrt(2.0)}};
        s.ideal = SparseState::from_entries(g.cat.size(), e);
        return s;
    }
    const auto& code = *g.ctx->code;
    const size_t n = code.n;
    s.blocks = g.blocks.size();
    for (const auto& blk : g.blocks) s.keep.insert(s.keep.end(), blk.begin(), blk.end());
    if (g.kind == GadgetKind::Plus || g.kind == GadgetKind::Zero) {
        s.input = SparseState(nc);
        double h = 1 / std::sqrt(2.0);
        s.ideal = g.kind == GadgetKind::Plus ? encode(code, h, h) : encode(code, 1, 0);
        return s;
    }
    // One reference per block; logical index bits: blocks first, then refs.
    size_t b = s.blocks;
    EncodedLayout in;
    in.total_qubits = nc + b;
    EncodedLayout out;
    out.total_qubits = b * n + b;
    for (size_t j = 0; j < b; ++j) {
        in.block_offsets.push_back(g.blocks[j][0]);
        out.block_offsets.push_back(j * n);
        in.raw_qubits.push_back(nc + j);
        out.raw_qubits.push_back(b * n + j);
        s.keep.push_back(nc + j);
    }
    std::vector<Complex> amps(size_t{1} << (2 * b), 0.0), ideal_amps(amps.size(), 0.0);
    double a = 1 / std::sqrt(static_cast<double>(size_t{1} << b));
    for (size_t v = 0; v < (size_t{1} << b); ++v) {
        size_t idx = v | (v << b);
        amps[idx] = a;
        ideal_amps[idx] = a;
        if (g.kind == GadgetKind::StagedD && v == 3) ideal_amps[idx] = a * Complex(0, 1);
    }
    s.input = encode_layout(code, in, amps);
    s.ideal = encode_layout(code, out, ideal_amps);
    return s;
}

/// Fidelity after an ideal full recovery of every block: the weight of the
/// output on the ideal state, summed over all syndrome outcomes after the
/// table corrections (bit flips from the z_checks, sign flips from the x_checks).
///
/// `psi` and `ideal` use the restricted numbering of `ExactSetup`.
inline double ideal_recovery_fidelity(const PuncturedCssCode& code, size_t blocks, SparseState psi, SparseState ideal) {
    const size_t n = code.n;
    const MaskTable bit(code.bit_flip_table);
    const MaskTable sign(code.sign_flip_table);
    const uint64_t block_mask = (uint64_t{1} << n) - 1;

    std::unordered_map<uint64_t, Complex> ideal_amp;
    for (const auto& [k, a] : ideal.entries()) ideal_amp[k] = a;

    // Sign-flip leaders of every combination of block syndromes.
    std::vector<uint64_t> z_leaders{0};
    for (size_t j = 0; j < blocks; ++j) {
        std::vector<uint64_t> next;
        for (uint64_t zl : z_leaders) {
            for (uint32_t t = 0; t < sign.leaders.size(); ++t) {
                if (t != 0 && sign.leaders[t] == 0) continue;
                next.push_back(zl | (sign.leaders[t] << (j * n)));
            }
        }
        z_leaders = std::move(next);
    }

    // v_s(k) = conj(ideal(k ^ x_s)) psi(k), grouped by bit-flip syndrome s.
    std::unordered_map<uint64_t, std::vector<std::pair<uint64_t, Complex>>> groups;
    for (const auto& [k, amp] : psi.entries()) {
        uint64_t s = 0, x = 0;
        for (size_t j = 0; j < blocks; ++j) {
            uint64_t w = (k >> (j * n)) & block_mask;
            uint32_t idx = bit.index(w);
            s |= uint64_t{idx} << (j * bit.checks.size());
            x |= bit.leaders[idx] << (j * n);
        }
        uint64_t target = k ^ x;
        auto it = ideal_amp.find(target);
        if (it == ideal_amp.end()) continue;
        groups[s].push_back({target, std::conj(it->second) * amp});
    }
    double f = 0;
    for (const auto& [s, v] : groups) {
        for (uint64_t z : z_leaders) {
            Complex acc = 0;
            for (const auto& [j, c] : v) acc += (std::popcount(z & j) & 1) ? -c : c;
            f += std::norm(acc);
        }
    }
    return f;
}

struct ExactVerdict {
    bool detected = false;
    bool logical_failure = false;
    double fidelity = 1.0;
    size_t retries = 0;
};

/// Verdict on the final state of an exact run of `g`.
inline ExactVerdict exact_verdict(const Gadget& g, const ExactSetup& setup, const SparseState& final_state) {
    ExactVerdict v;
    SparseState out = final_state.restrict_to(setup.keep);
    if (g.kind == GadgetKind::Cat) {
        const size_t w = g.cat.size();
        for (const auto& [k, a] : out.entries()) {
            size_t x = static_cast<size_t>(std::popcount(k));
            if (std::min(x, w - x) > 1) v.logical_failure = true;
        }
        v.fidelity = fidelity(out, setup.ideal);
        return v;
    }
    v.fidelity = ideal_recovery_fidelity(*g.ctx->code, setup.blocks, std::move(out), setup.ideal);
    v.logical_failure = v.fidelity < 1.0 - kFidelityTolerance;
    return v;
}

/// Runs `g` once on the exact simulator with forced faults.
inline ExactVerdict run_exact(const Gadget& g, std::span<const ForcedFault> faults, std::mt19937_64& rng) {
    ExactSetup setup = exact_setup(g);
    SparseState state = setup.input;
    ExactExecutor ex(g.circuit, state, rng);
    ex.set_faults(faults);
    ex.run();
    ExactVerdict v = exact_verdict(g, setup, state);
    v.detected = ex.detected();
    v.retries = ex.retries();
    return v;
}

/// Lane mask of logical failures of a frame batch after running `g`.
class FrameJudge {
   public:
    explicit FrameJudge(const Gadget& g) : g_(g) {
        if (g.kind == GadgetKind::StagedD) throw UnsupportedGateError("FrameJudge: staged D is not Clifford");
        if (g.kind == GadgetKind::Cat) return;
        const auto& code = *g.ctx->code;
        bit_ = MaskTable(code.bit_flip_table);
        sign_ = MaskTable(code.sign_flip_table);
        lx_ = code.logical_x_mask();
        lz_ = code.logical_z_mask();
        check_x_ = g.kind != GadgetKind::Plus;
        check_z_ = g.kind != GadgetKind::Zero;
    }

    uint64_t failures(const FrameBatch& f) const {
        if (g_.kind == GadgetKind::Cat) return cat_failures(f);
        if (g_.level == 2) return level2_failures(f);
        uint64_t fail = 0;
        for (const auto& blk : g_.blocks) {
            uint64_t any_x = 0, any_z = 0;
            for (uint32_t q : blk) {
                any_x |= f.x[q];
                any_z |= f.z[q];
            }
            if (!check_x_) any_x = 0;
            if (!check_z_) any_z = 0;
            for (uint64_t m = any_x | any_z; m; m &= m - 1) {
                size_t lane = static_cast<size_t>(std::countr_zero(m));
                uint64_t x = 0, z = 0;
                for (size_t i = 0; i < blk.size(); ++i) {
                    x |= ((f.x[blk[i]] >> lane) & 1) << i;
                    z |= ((f.z[blk[i]] >> lane) & 1) << i;
                }
                bool bad = false;
                if (check_x_ && (std::popcount(bit_.decode(x) & lz_) & 1)) bad = true;
                if (check_z_ && (std::popcount(sign_.decode(z) & lx_) & 1)) bad = true;
                if (bad) fail |= uint64_t{1} << lane;
            }
        }
        return fail;
    }

   private:
    uint64_t cat_failures(const FrameBatch& f) const {
        const size_t w = g_.cat.size();
        uint64_t fail = 0;
        for (size_t lane = 0; lane < kLanes; ++lane) {
            size_t x = 0;
            for (uint32_t q : g_.cat) x += (f.x[q] >> lane) & 1;
            if (std::min(x, w - x) > 1) fail |= uint64_t{1} << lane;
        }
        return fail;
    }

    uint64_t level2_failures(const FrameBatch& f) const {
        const auto& blk = g_.blocks[0];
        uint64_t any = 0;
        for (uint32_t q : blk) any |= f.x[q] | f.z[q];
        uint64_t fail = 0;
        for (uint64_t m = any; m; m &= m - 1) {
            size_t lane = static_cast<size_t>(std::countr_zero(m));
            BinaryWord x = f.lane_word(f.x, blk, lane);
            BinaryWord z = f.lane_word(f.z, blk, lane);
            bool bad = (hierarchical_decode(*g_.concatenated, x).weight() & 1) ||
                       (hierarchical_decode(*g_.concatenated_dual, z).weight() & 1);
            if (bad) fail |= uint64_t{1} << lane;
        }
        return fail;
    }

    const Gadget& g_;
    MaskTable bit_, sign_;
    uint64_t lx_ = 0, lz_ = 0;
    bool check_x_ = true, check_z_ = true;
};

struct FrameVerdicts {
    uint64_t detected = 0;
    uint64_t logical_failure = 0;
};

/// Runs `g` on 64 frames with a fault source.
template <typename Faults>
FrameVerdicts run_frames(const Gadget& g, const FrameJudge& judge, Faults& faults, uint64_t lanes = kAllLanes) {
    FrameBatch batch(g.circuit.n_qubits, g.circuit.num_records);
    FrameExecutor<Faults> ex(g.circuit, batch, faults);
    ex.run(lanes);
    return {batch.detected & lanes, judge.failures(batch) & lanes};
}

}  // namespace ftqc
