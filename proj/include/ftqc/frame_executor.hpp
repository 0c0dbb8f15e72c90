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
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "ftqc/binary_word.hpp"
#include "ftqc/circuit.hpp"
#include "ftqc/errors.hpp"
#include "ftqc/gates.hpp"

namespace ftqc {

inline constexpr size_t kLanes = 64;
inline constexpr uint64_t kAllLanes = ~uint64_t{0};

/// Pauli frame of one trial over `x_mask.length()` qubits. Signs are not tracked.
struct PauliFrame {
    BinaryWord x_mask;
    BinaryWord z_mask;

    PauliFrame() = default;
    explicit PauliFrame(size_t n) : x_mask(n), z_mask(n) {}
};

/// Conjugates the frame through a Clifford gate. D and E map Paulis outside
/// the Pauli group and are rejected.
inline PauliFrame propagate(PauliFrame f, GateTag g, size_t q0, size_t q1 = 0) {
    switch (g) {
        case GateTag::I:
        case GateTag::X:
        case GateTag::Y:
        case GateTag::Z: return f;
        case GateTag::A: {
            bool x = f.x_mask.get(q0), z = f.z_mask.get(q0);
            f.x_mask.set(q0, z);
            f.z_mask.set(q0, x);
            return f;
        }
        case GateTag::B:
        case GateTag::C:
            if (f.x_mask.get(q0)) f.z_mask.flip(q0);
            return f;
        case GateTag::N:
            if (f.x_mask.get(q0)) f.x_mask.flip(q1);
            if (f.z_mask.get(q1)) f.z_mask.flip(q0);
            return f;
        case GateTag::CZ: {
            bool x0 = f.x_mask.get(q0), x1 = f.x_mask.get(q1);
            if (x0) f.z_mask.flip(q1);
            if (x1) f.z_mask.flip(q0);
            return f;
        }
        default:
            throw UnsupportedGateError("propagate: gate " + std::string(gate_name(g)) + " is not Clifford");
    }
}

/// Frames of 64 trials: word q of `x` holds the X component of qubit q in each lane.
struct FrameBatch {
    std::vector<uint64_t> x;
    std::vector<uint64_t> z;
    std::vector<uint64_t> records;
    uint64_t detected = 0;

    FrameBatch() = default;
    FrameBatch(size_t n_qubits, size_t n_records) : x(n_qubits, 0), z(n_qubits, 0), records(n_records, 0) {}

    /// Lane word of a qubit subset as a BinaryWord.
    BinaryWord lane_word(const std::vector<uint64_t>& plane, const std::vector<uint32_t>& qubits, size_t lane) const {
        BinaryWord w(qubits.size());
        for (size_t i = 0; i < qubits.size(); ++i) {
            if ((plane[qubits[i]] >> lane) & 1) w.set(i, true);
        }
        return w;
    }
};

/// No faults.
struct NoFaults {
    void at(const Location&, uint64_t, bool, FrameBatch&) {}
};

inline void apply_lane_fault(const Location& loc, uint8_t option, uint64_t lane_bit, FrameBatch& f) {
    if (loc.kind == LocationKind::Measure) {
        f.records[loc.record] ^= lane_bit;
        return;
    }
    auto [p0, p1] = fault_paulis(loc.kind, option);
    if (pauli_has_x(p0)) f.x[loc.q0] ^= lane_bit;
    if (pauli_has_z(p0)) f.z[loc.q0] ^= lane_bit;
    if (loc.kind == LocationKind::Gate2Q) {
        if (pauli_has_x(p1)) f.x[loc.q1] ^= lane_bit;
        if (pauli_has_z(p1)) f.z[loc.q1] ^= lane_bit;
    }
}

/// Per-lane forced faults, applied on the first execution of their location.
struct LaneFault {
    uint32_t location = 0;
    uint8_t lane = 0;
    uint8_t option = 1;
};

class ForcedLaneFaults {
   public:
    ForcedLaneFaults() = default;
    explicit ForcedLaneFaults(std::vector<LaneFault> faults) : faults_(std::move(faults)) {
        std::stable_sort(faults_.begin(), faults_.end(),
                         [](const LaneFault& a, const LaneFault& b) { return a.location < b.location; });
    }

    void at(const Location& loc, uint64_t mask, bool first_pass, FrameBatch& f) {
        if (!first_pass) return;
        while (cursor_ < faults_.size() && faults_[cursor_].location < loc.index) ++cursor_;
        while (cursor_ < faults_.size() && faults_[cursor_].location == loc.index) {
            uint64_t bit = uint64_t{1} << faults_[cursor_].lane;
            if (mask & bit) apply_lane_fault(loc, faults_[cursor_].option, bit, f);
            ++cursor_;
        }
    }

   private:
    std::vector<LaneFault> faults_;
    size_t cursor_ = 0;
};

/// Independent faults with the probability of each location kind. Each
/// execution of a location offers one slot per lane; gaps between faulty
/// slots are drawn from the geometric distribution.
class SampledFaults {
   public:
    SampledFaults(const std::array<double, kNumLocationKinds>& p, uint64_t seed) : rng_(seed) {
        for (size_t k = 0; k < kNumLocationKinds; ++k) {
            p_[k] = p[k];
            if (p[k] < 0 || p[k] > 1) throw ParameterError("SampledFaults: probability outside [0, 1]");
            log_q_[k] = p[k] > 0 && p[k] < 1 ? std::log1p(-p[k]) : 0.0;
            next_[k] = draw_gap(k);
        }
    }

    void at(const Location& loc, uint64_t mask, bool /*first_pass*/, FrameBatch& f) {
        size_t k = static_cast<size_t>(loc.kind);
        if (p_[k] <= 0) return;
        if (next_[k] >= kLanes) {
            next_[k] -= kLanes;
            return;
        }
        uint8_t options = num_fault_options(loc.kind);
        while (next_[k] < kLanes) {
            uint64_t bit = uint64_t{1} << next_[k];
            if (mask & bit) {
                uint8_t option = options == 1 ? 1 : static_cast<uint8_t>(1 + rng_() % options);
                apply_lane_fault(loc, option, bit, f);
            }
            next_[k] += 1 + draw_gap(k);
        }
        next_[k] -= kLanes;
    }

   private:
    uint64_t draw_gap(size_t k) {
        if (p_[k] >= 1) return 0;
        if (p_[k] <= 0) return UINT64_MAX / 2;
        double u = (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53;
        double g = std::floor(std::log(u) / log_q_[k]);
        return g > 1e18 ? uint64_t{1} << 60 : static_cast<uint64_t>(g);
    }

    std::mt19937_64 rng_;
    std::array<double, kNumLocationKinds> p_{};
    std::array<double, kNumLocationKinds> log_q_{};
    std::array<uint64_t, kNumLocationKinds> next_{};
};

/// Runs an FtCircuit on 64 Pauli frames at once. Reference measurement
/// outcomes are taken as 0, so records hold outcome flips.
template <typename Faults>
class FrameExecutor {
   public:
    FrameExecutor(const FtCircuit& c, FrameBatch& f, Faults& faults) : c_(c), f_(f), faults_(faults) {
        if (f.x.size() < c.n_qubits || f.records.size() < c.num_records) {
            throw ParameterError("FrameExecutor: batch smaller than circuit");
        }
    }

    void run(uint64_t mask = kAllLanes) { run_range(0, c_.steps.size(), mask, true); }

    void run_range(size_t begin, size_t end, uint64_t mask, bool first_pass) {
        for (size_t i = begin; i < end;) i = exec(i, mask, first_pass);
    }

   private:
    size_t exec(size_t i, uint64_t mask, bool first_pass) {
        const Step& st = c_.steps[i];
        if (const auto* op = std::get_if<OpStep>(&st)) {
            const Location& loc = c_.locations[op->location];
            apply_location(loc, mask);
            faults_.at(loc, mask, first_pass, f_);
            return i + 1;
        }
        if (const auto* rs = std::get_if<RetryStep>(&st)) {
            run_range(i + 1, rs->body_end, mask, first_pass);
            uint64_t rejected = f_.records[rs->reject_record] & mask;
            size_t attempts = 1;
            while (rejected && attempts < rs->max_attempts) {
                f_.detected |= rejected;
                run_range(i + 1, rs->body_end, rejected, false);
                rejected &= f_.records[rs->reject_record];
                ++attempts;
            }
            f_.detected |= rejected;
            return rs->body_end;
        }
        if (const auto* cs = std::get_if<CorrectStep>(&st)) {
            apply_rule(c_.rules[cs->rule], mask);
            return i + 1;
        }
        apply_decode(c_.decode_rules[std::get<DecodeStep>(st).rule], mask);
        return i + 1;
    }

    void apply_location(const Location& loc, uint64_t m) {
        auto& x = f_.x;
        auto& z = f_.z;
        switch (loc.kind) {
            case LocationKind::Prep:
                x[loc.q0] &= ~m;
                z[loc.q0] &= ~m;
                return;
            case LocationKind::Gate1Q:
                switch (loc.gate) {
                    case GateTag::A: {
                        uint64_t d = (x[loc.q0] ^ z[loc.q0]) & m;
                        x[loc.q0] ^= d;
                        z[loc.q0] ^= d;
                        return;
                    }
                    case GateTag::B:
                    case GateTag::C: z[loc.q0] ^= x[loc.q0] & m; return;
                    case GateTag::I:
                    case GateTag::X:
                    case GateTag::Y:
                    case GateTag::Z: return;
                    default: break;
                }
                throw UnsupportedGateError("FrameExecutor: gate " + std::string(gate_name(loc.gate)));
            case LocationKind::Gate2Q:
                switch (loc.gate) {
                    case GateTag::N:
                        x[loc.q1] ^= x[loc.q0] & m;
                        z[loc.q0] ^= z[loc.q1] & m;
                        return;
                    case GateTag::CZ:
                        z[loc.q1] ^= x[loc.q0] & m;
                        z[loc.q0] ^= x[loc.q1] & m;
                        return;
                    default: break;
                }
                throw UnsupportedGateError("FrameExecutor: gate " + std::string(gate_name(loc.gate)) +
                                           " does not map Paulis to Paulis");
            case LocationKind::Measure:
                f_.records[loc.record] = (f_.records[loc.record] & ~m) | (x[loc.q0] & m);
                return;
            case LocationKind::Wait: return;
        }
    }

    uint64_t parity_word(const std::vector<uint32_t>& recs) const {
        uint64_t w = 0;
        for (uint32_t r : recs) w ^= f_.records[r];
        return w;
    }

    void apply_rule(const CorrectionRule& rule, uint64_t mask) {
        size_t rounds = rule.num_rounds();
        // syn[r][p][c]: lane word of check c of part p in round r.
        std::vector<std::vector<std::vector<uint64_t>>> syn(rounds);
        uint64_t any = 0;
        for (size_t r = 0; r < rounds; ++r) {
            syn[r].resize(rule.parts.size());
            for (size_t p = 0; p < rule.parts.size(); ++p) {
                for (const auto& recs : rule.parts[p].rounds[r]) {
                    uint64_t w = parity_word(recs) & mask;
                    syn[r][p].push_back(w);
                    any |= w;
                }
            }
        }
        if (!any) {
            if (rule.null_record >= 0) f_.records[static_cast<size_t>(rule.null_record)] &= ~mask;
            return;
        }
        auto differ = [&](size_t a, size_t b) {
            uint64_t d = 0;
            for (size_t p = 0; p < rule.parts.size(); ++p) {
                for (size_t c = 0; c < syn[a][p].size(); ++c) d |= syn[a][p][c] ^ syn[b][p][c];
            }
            return d;
        };
        uint64_t use_first = mask, use_second = 0, none = 0;
        if (rounds > 1) {
            uint64_t d12 = differ(0, 1);
            uint64_t d23 = rounds > 2 ? differ(1, 2) : kAllLanes;
            use_first = mask & ~d12;
            use_second = mask & d12 & ~d23;
            none = mask & d12 & d23;
            f_.detected |= d12 & mask;
        }
        if (rule.null_record >= 0) {
            auto& rec = f_.records[static_cast<size_t>(rule.null_record)];
            rec = (rec & ~mask) | none;
        }
        for (size_t p = 0; p < rule.parts.size(); ++p) {
            const auto& part = rule.parts[p];
            size_t checks = syn[0][p].size();
            uint64_t nonzero = 0;
            for (size_t c = 0; c < checks; ++c) {
                nonzero |= (syn[0][p][c] & use_first) | (rounds > 1 ? syn[1][p][c] & use_second : 0);
            }
            if (!part.reference_random) f_.detected |= nonzero;
            auto& plane = part.apply_x ? f_.x : f_.z;
            while (nonzero) {
                size_t lane = static_cast<size_t>(std::countr_zero(nonzero));
                nonzero &= nonzero - 1;
                uint64_t bit = uint64_t{1} << lane;
                size_t r = (use_first & bit) ? 0 : 1;
                uint32_t s = 0;
                for (size_t c = 0; c < checks; ++c) s |= uint32_t((syn[r][p][c] >> lane) & 1) << c;
                const BinaryWord leader = part.table->correction(s);
                for (size_t pos : leader.support()) {
                    for (uint32_t q : part.supports[pos]) plane[q] ^= bit;
                }
            }
        }
    }

    void apply_decode(const DecodeRule& rule, uint64_t mask) {
        uint64_t any = 0;
        for (uint32_t r : rule.records) any |= f_.records[r];
        any &= mask;
        uint64_t out = 0;
        if (any) {
            while (any) {
                size_t lane = static_cast<size_t>(std::countr_zero(any));
                any &= any - 1;
                BinaryWord raw(rule.records.size());
                for (size_t i = 0; i < rule.records.size(); ++i) raw.set(i, (f_.records[rule.records[i]] >> lane) & 1);
                if (rule.table->index(raw) != 0) f_.detected |= uint64_t{1} << lane;
                if (decode(*rule.table, raw).weight() & 1) out |= uint64_t{1} << lane;
            }
        }
        auto& rec = f_.records[rule.output_record];
        rec = (rec & ~mask) | out;
    }

    const FtCircuit& c_;
    FrameBatch& f_;
    Faults& faults_;
};

}  // namespace ftqc
