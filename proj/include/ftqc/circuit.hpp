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
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "ftqc/binary_word.hpp"
#include "ftqc/errors.hpp"
#include "ftqc/gates.hpp"
#include "ftqc/linear_code.hpp"

namespace ftqc {

enum class LocationKind : uint8_t { Prep, Gate1Q, Gate2Q, Measure, Wait };

inline constexpr size_t kNumLocationKinds = 5;

inline std::string_view location_kind_name(LocationKind k) {
    switch (k) {
        case LocationKind::Prep: return "prep";
        case LocationKind::Gate1Q: return "gate1q";
        case LocationKind::Gate2Q: return "gate2q";
        case LocationKind::Measure: return "measure";
        case LocationKind::Wait: return "wait";
    }
    return "?";
}

/// One operation of a circuit, errors being inserted after it. Prep makes
/// |0>, Measure reads the classical basis into `record`. For N, q0 is the
/// control.
struct Location {
    uint32_t index = 0;
    LocationKind kind = LocationKind::Wait;
    GateTag gate = GateTag::I;
    uint32_t q0 = 0;
    uint32_t q1 = 0;
    uint32_t record = 0;
};

/// Number of distinct nontrivial faults at a location: X after a prep, an
/// outcome flip after a measurement, X/Y/Z after one-qubit gates and waits,
/// the 15 nontrivial two-qubit Paulis after two-qubit gates.
inline uint8_t num_fault_options(LocationKind k) {
    switch (k) {
        case LocationKind::Prep:
        case LocationKind::Measure: return 1;
        case LocationKind::Gate1Q:
        case LocationKind::Wait: return 3;
        case LocationKind::Gate2Q: return 15;
    }
    return 0;
}

/// Pauli code for one qubit: 0 = I, 1 = X, 2 = Y, 3 = Z.
inline bool pauli_has_x(uint8_t p) { return p == 1 || p == 2; }
inline bool pauli_has_z(uint8_t p) { return p == 2 || p == 3; }

/// Fault option -> Pauli codes on (q0, q1). Options are 1-based. Two-qubit
/// option o encodes q0 Pauli o % 4 and q1 Pauli o / 4.
inline std::pair<uint8_t, uint8_t> fault_paulis(LocationKind k, uint8_t option) {
    switch (k) {
        case LocationKind::Prep: return {1, 0};
        case LocationKind::Measure: return {0, 0};
        case LocationKind::Gate1Q:
        case LocationKind::Wait: return {option, 0};
        case LocationKind::Gate2Q: return {static_cast<uint8_t>(option % 4), static_cast<uint8_t>(option / 4)};
    }
    return {0, 0};
}

inline std::string fault_label(LocationKind k, uint8_t option) {
    static const char kNames[] = {'I', 'X', 'Y', 'Z'};
    if (k == LocationKind::Measure) return "flip";
    auto [a, b] = fault_paulis(k, option);
    std::string s(1, kNames[a]);
    if (k == LocationKind::Gate2Q) s += kNames[b];
    return s;
}

/// One detection/correction half of a correction rule.
///
/// `rounds[r][c]` lists the records whose XOR is the parity of check c of
/// `table` in round r. A nonzero syndrome selects the table leader; each set
/// position i of the leader applies X (or Z) to all of `supports[i]`.
struct CorrectionPart {
    std::shared_ptr<const SyndromeTable> table;
    std::vector<std::vector<std::vector<uint32_t>>> rounds;
    std::vector<std::vector<uint32_t>> supports;
    bool apply_x = true;
    bool reference_random = false;
};

/// Syndrome agreement and correction.
///
/// With three rounds: use rounds 1 and 2 if they agree, else rounds 2 and 3
/// if they agree, else do nothing. Agreement compares the full syndrome over
/// all parts. With one round the syndrome is used directly. `null_record`, if
/// set, receives 1 when nothing was done.
struct CorrectionRule {
    std::vector<CorrectionPart> parts;
    int64_t null_record = -1;

    size_t num_rounds() const { return parts.empty() ? 0 : parts[0].rounds.size(); }
};

/// Logical readout from a block of measurement records: decode the raw word
/// with `table` and write the weight parity of the decoded word.
struct DecodeRule {
    std::vector<uint32_t> records;
    std::shared_ptr<const SyndromeTable> table;
    uint32_t output_record = 0;
};

struct OpStep {
    uint32_t location = 0;
};

/// Runs the steps up to `body_end` (exclusive), then reruns them while
/// `reject_record` reads 1, at most `max_attempts` times in total.
struct RetryStep {
    size_t body_end = 0;
    uint32_t reject_record = 0;
    size_t max_attempts = 100;
};

struct CorrectStep {
    uint32_t rule = 0;
};

struct DecodeStep {
    uint32_t rule = 0;
};

using Step = std::variant<OpStep, RetryStep, CorrectStep, DecodeStep>;

/// Hardwired circuit with classical control.
struct FtCircuit {
    size_t n_qubits = 0;
    size_t num_records = 0;
    std::vector<Location> locations;
    std::vector<Step> steps;
    std::vector<CorrectionRule> rules;
    std::vector<DecodeRule> decode_rules;
    /// Qubits holding encoded data; two-qubit gates never join two of them
    /// unless `data_coupling_allowed` (transversal gates between blocks).
    std::vector<uint32_t> data_qubits;
    bool data_coupling_allowed = false;

    size_t count(LocationKind k) const {
        size_t c = 0;
        for (const auto& l : locations) c += l.kind == k;
        return c;
    }

    /// Sum over locations of the number of fault options.
    size_t num_single_faults() const {
        size_t c = 0;
        for (const auto& l : locations) c += num_fault_options(l.kind);
        return c;
    }
};

/// Appends locations and steps, keeping indices in time order.
class CircuitBuilder {
   public:
    explicit CircuitBuilder(size_t n_qubits) { c_.n_qubits = n_qubits; }

    FtCircuit& circuit() { return c_; }
    FtCircuit finish() { return std::move(c_); }

    uint32_t new_record() { return static_cast<uint32_t>(c_.num_records++); }

    void ensure_qubits(size_t n) {
        if (n > c_.n_qubits) c_.n_qubits = n;
    }

    void prep(uint32_t q) { add(LocationKind::Prep, GateTag::I, q, 0); }
    void gate1(GateTag g, uint32_t q) { add(LocationKind::Gate1Q, g, q, 0); }
    void gate2(GateTag g, uint32_t a, uint32_t b) {
        if (a == b) throw ParameterError("gate2: identical qubits");
        add(LocationKind::Gate2Q, g, a, b);
    }
    void wait(uint32_t q) { add(LocationKind::Wait, GateTag::I, q, 0); }
    uint32_t measure(uint32_t q) {
        uint32_t r = new_record();
        add(LocationKind::Measure, GateTag::I, q, 0, r);
        return r;
    }

    size_t begin_retry() {
        c_.steps.push_back(RetryStep{});
        return c_.steps.size() - 1;
    }
    void end_retry(size_t handle, uint32_t reject_record, size_t max_attempts = 100) {
        auto& r = std::get<RetryStep>(c_.steps[handle]);
        r.body_end = c_.steps.size();
        r.reject_record = reject_record;
        r.max_attempts = max_attempts;
    }

    void correct(CorrectionRule rule) {
        c_.rules.push_back(std::move(rule));
        c_.steps.push_back(CorrectStep{static_cast<uint32_t>(c_.rules.size() - 1)});
    }

    uint32_t decode(std::vector<uint32_t> records, std::shared_ptr<const SyndromeTable> table) {
        uint32_t out = new_record();
        c_.decode_rules.push_back({std::move(records), std::move(table), out});
        c_.steps.push_back(DecodeStep{static_cast<uint32_t>(c_.decode_rules.size() - 1)});
        return out;
    }

   private:
    void add(LocationKind k, GateTag g, uint32_t q0, uint32_t q1, uint32_t record = 0) {
        ensure_qubits(std::max(q0, q1) + size_t{1});
        Location l;
        l.index = static_cast<uint32_t>(c_.locations.size());
        l.kind = k;
        l.gate = g;
        l.q0 = q0;
        l.q1 = q1;
        l.record = record;
        c_.locations.push_back(l);
        c_.steps.push_back(OpStep{l.index});
    }

    FtCircuit c_;
};

/// True when no two-qubit gate joins two data qubits.
inline bool data_never_coupled(const FtCircuit& c) {
    std::vector<bool> is_data(c.n_qubits, false);
    for (uint32_t q : c.data_qubits) is_data[q] = true;
    for (const auto& l : c.locations) {
        if (l.kind == LocationKind::Gate2Q && is_data[l.q0] && is_data[l.q1]) return false;
    }
    return true;
}

}  // namespace ftqc
