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
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "ftqc/circuit.hpp"
#include "ftqc/errors.hpp"
#include "ftqc/gates.hpp"
#include "ftqc/sparse_state.hpp"

namespace ftqc {

/// A fault placed after the first execution of a location.
struct ForcedFault {
    uint32_t location = 0;
    uint8_t option = 1;

    friend bool operator==(const ForcedFault&, const ForcedFault&) = default;
};

/// Outcome of a correction rule: the agreed syndrome per part, or nothing.
inline std::optional<std::vector<uint32_t>> agree_syndromes(const std::vector<std::vector<uint32_t>>& per_round) {
    if (per_round.size() == 1) return per_round[0];
    if (per_round[0] == per_round[1]) return per_round[0];
    if (per_round.size() > 2 && per_round[1] == per_round[2]) return per_round[1];
    return std::nullopt;
}

/// Runs an FtCircuit on a SparseState. The state may have more qubits than
/// the circuit (reference qubits are never touched).
///
/// Preparing a qubit that is not definite first measures it, which discards
/// it. Forced faults are applied only the first time their location runs.
class ExactExecutor {
   public:
    using Rng = std::mt19937_64;

    ExactExecutor(const FtCircuit& c, SparseState& state, Rng& rng) : c_(c), s_(state), rng_(rng) {
        if (state.num_qubits() < c.n_qubits) throw ParameterError("ExactExecutor: state smaller than circuit");
        records_.assign(c.num_records, 0);
    }

    /// Faults must be sorted by location.
    void set_faults(std::span<const ForcedFault> faults) {
        faults_.assign(faults.begin(), faults.end());
        std::sort(faults_.begin(), faults_.end(), [](const auto& a, const auto& b) { return a.location < b.location; });
        cursor_ = 0;
    }

    std::vector<uint8_t>& records() { return records_; }
    bool detected() const { return detected_; }
    size_t retries() const { return retries_; }
    size_t nulls() const { return nulls_; }

    void set_records(std::vector<uint8_t> r) { records_ = std::move(r); }

    /// Runs the top-level steps [begin, end). `after_step(i)` is called after
    /// each top-level step i; returning true stops the run.
    void run(size_t begin = 0, size_t end = SIZE_MAX, const std::function<bool(size_t)>& after_step = {}) {
        end = std::min(end, c_.steps.size());
        for (size_t i = begin; i < end;) {
            size_t next = exec(i, true);
            if (after_step && after_step(next - 1)) return;
            i = next;
        }
    }

    /// Runs steps [begin, end) of a retry body.
    void run_body(size_t begin, size_t end, bool first_pass) {
        for (size_t i = begin; i < end;) i = exec(i, first_pass);
    }

   private:
    size_t exec(size_t i, bool first_pass) {
        const Step& st = c_.steps[i];
        if (const auto* op = std::get_if<OpStep>(&st)) {
            const Location& loc = c_.locations[op->location];
            apply_location(loc);
            if (first_pass) apply_faults(loc);
            return i + 1;
        }
        if (const auto* rs = std::get_if<RetryStep>(&st)) {
            run_body(i + 1, rs->body_end, first_pass);
            size_t attempts = 1;
            while (records_[rs->reject_record] && attempts < rs->max_attempts) {
                detected_ = true;
                ++retries_;
                run_body(i + 1, rs->body_end, false);
                ++attempts;
            }
            if (records_[rs->reject_record]) detected_ = true;
            return rs->body_end;
        }
        if (const auto* cs = std::get_if<CorrectStep>(&st)) {
            apply_rule(c_.rules[cs->rule]);
            return i + 1;
        }
        const auto& ds = std::get<DecodeStep>(st);
        apply_decode(c_.decode_rules[ds.rule]);
        return i + 1;
    }

    void apply_location(const Location& loc) {
        switch (loc.kind) {
            case LocationKind::Prep: {
                if (s_.is_measured(loc.q0)) {
                    s_.reset(loc.q0);
                } else {
                    double p1 = s_.probability_one(loc.q0);
                    if (p1 > s_.tolerance() && p1 < 1.0 - s_.tolerance()) s_.measure(loc.q0, std::nullopt, rng_);
                    s_.reset(loc.q0);
                }
                return;
            }
            case LocationKind::Gate1Q: s_.apply_1q(gates::one_qubit(loc.gate), loc.q0); return;
            case LocationKind::Gate2Q:
                if (loc.gate == GateTag::N) {
                    s_.apply_cnot(loc.q0, loc.q1);
                } else {
                    s_.apply_2q_diag(gates::diagonal(loc.gate), loc.q0, loc.q1);
                }
                return;
            case LocationKind::Measure:
                records_[loc.record] = s_.measure(loc.q0, std::nullopt, rng_).outcome;
                return;
            case LocationKind::Wait: return;
        }
    }

    void apply_faults(const Location& loc) {
        while (cursor_ < faults_.size() && faults_[cursor_].location < loc.index) ++cursor_;
        while (cursor_ < faults_.size() && faults_[cursor_].location == loc.index) {
            apply_fault(loc, faults_[cursor_].option);
            ++cursor_;
        }
    }

    void apply_fault(const Location& loc, uint8_t option) {
        if (loc.kind == LocationKind::Measure) {
            records_[loc.record] ^= 1;
            return;
        }
        auto [p0, p1] = fault_paulis(loc.kind, option);
        uint64_t x = 0, z = 0;
        if (pauli_has_x(p0)) x |= uint64_t{1} << loc.q0;
        if (pauli_has_z(p0)) z |= uint64_t{1} << loc.q0;
        if (pauli_has_x(p1)) x |= uint64_t{1} << loc.q1;
        if (pauli_has_z(p1)) z |= uint64_t{1} << loc.q1;
        s_.apply_pauli(x, z);
    }

    uint32_t parity_index(const std::vector<std::vector<uint32_t>>& checks) const {
        uint32_t s = 0;
        for (size_t c = 0; c < checks.size(); ++c) {
            uint8_t bit = 0;
            for (uint32_t r : checks[c]) bit ^= records_[r];
            s |= uint32_t{bit} << c;
        }
        return s;
    }

    void apply_rule(const CorrectionRule& rule) {
        size_t rounds = rule.num_rounds();
        std::vector<std::vector<uint32_t>> per_round(rounds, std::vector<uint32_t>(rule.parts.size()));
        for (size_t r = 0; r < rounds; ++r) {
            for (size_t p = 0; p < rule.parts.size(); ++p) per_round[r][p] = parity_index(rule.parts[p].rounds[r]);
        }
        auto agreed = agree_syndromes(per_round);
        if (!agreed || (rounds > 1 && per_round[0] != per_round[1])) detected_ = true;
        if (rule.null_record >= 0) records_[static_cast<size_t>(rule.null_record)] = agreed ? 0 : 1;
        if (!agreed) {
            ++nulls_;
            return;
        }
        for (size_t p = 0; p < rule.parts.size(); ++p) {
            const auto& part = rule.parts[p];
            uint32_t s = (*agreed)[p];
            if (s == 0) continue;
            if (!part.reference_random) detected_ = true;
            BinaryWord leader = part.table->correction(s);
            uint64_t mask = 0;
            for (size_t pos : leader.support()) {
                for (uint32_t q : part.supports[pos]) mask ^= uint64_t{1} << q;
            }
            if (part.apply_x) {
                s_.apply_pauli(mask, 0);
            } else {
                s_.apply_pauli(0, mask);
            }
        }
    }

    void apply_decode(const DecodeRule& rule) {
        BinaryWord raw(rule.records.size());
        for (size_t i = 0; i < rule.records.size(); ++i) raw.set(i, records_[rule.records[i]]);
        if (rule.table->index(raw) != 0) detected_ = true;
        records_[rule.output_record] = decode(*rule.table, raw).weight() & 1;
    }

    const FtCircuit& c_;
    SparseState& s_;
    Rng& rng_;
    std::vector<uint8_t> records_;
    std::vector<ForcedFault> faults_;
    size_t cursor_ = 0;
    bool detected_ = false;
    size_t retries_ = 0;
    size_t nulls_ = 0;
};

}  // namespace ftqc
