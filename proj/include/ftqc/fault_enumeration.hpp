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
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ftqc/circuit.hpp"
#include "ftqc/errors.hpp"
#include "ftqc/exact_executor.hpp"
#include "ftqc/frame_executor.hpp"
#include "ftqc/gadgets.hpp"
#include "ftqc/harness.hpp"
#include "ftqc/parallel.hpp"

namespace ftqc {

enum class Backend { Exact, Frame };

inline std::string_view backend_name(Backend b) { return b == Backend::Exact ? "exact" : "frame"; }

/// Every single fault of a circuit, in location order.
inline std::vector<ForcedFault> single_faults(const FtCircuit& c) {
    std::vector<ForcedFault> out;
    for (const auto& l : c.locations) {
        for (uint8_t o = 1; o <= num_fault_options(l.kind); ++o) out.push_back({l.index, o});
    }
    return out;
}

struct FaultRecord {
    std::vector<ForcedFault> faults;
    bool detected = false;
    bool logical_failure = false;
};

struct FaultReport {
    size_t order = 1;
    Backend backend = Backend::Exact;
    size_t combinations = 0;
    size_t detected = 0;
    size_t failures = 0;
    /// Sum over failing combinations of prod 1 / (options at each location):
    /// the leading coefficient of the failure rate when every location fails
    /// with probability p.
    double alpha_pairs = 0.0;
    /// All records (order 1) or only the failures (order 2, unless kept).
    std::vector<FaultRecord> records;
};

/// Exact runs of one gadget that restart from fault-free checkpoints.
///
/// The fault-free run is stored before every top-level retry and after every
/// correction. A faulty run starts at the checkpoint preceding its first
/// fault and stops at the first correction after its last fault whose
/// data-plus-reference state matches the fault-free one.
class ExactFaultRunner {
   public:
    ExactFaultRunner(const Gadget& g, uint64_t seed = 1) : g_(g), setup_(exact_setup(g)), seed_(seed) {
        const auto& steps = g.circuit.steps;
        top_of_location_.assign(g.circuit.locations.size(), 0);
        for (size_t i = 0; i < steps.size();) {
            size_t end = i + 1;
            if (const auto* rs = std::get_if<RetryStep>(&steps[i])) end = rs->body_end;
            for (size_t j = i; j < end; ++j) {
                if (const auto* op = std::get_if<OpStep>(&steps[j])) top_of_location_[op->location] = i;
            }
            i = end;
        }
        std::mt19937_64 rng(seed);
        SparseState state = setup_.input;
        ExactExecutor ex(g.circuit, state, rng);
        add_checkpoint(0, state, ex.records());
        ex.run(0, SIZE_MAX, [&](size_t i) {
            size_t next = i + 1;
            bool after_correct = std::holds_alternative<CorrectStep>(steps[i]);
            bool before_retry = next < steps.size() && std::holds_alternative<RetryStep>(steps[next]);
            if (after_correct || before_retry) add_checkpoint(next, state, ex.records());
            if (after_correct) reference_[next] = state.restrict_to(setup_.keep);
            return false;
        });
        ExactVerdict v = exact_verdict(g, setup_, state);
        if (v.logical_failure || ex.detected()) {
            throw ParameterError("ExactFaultRunner: fault-free run of " + std::string(gadget_kind_name(g.kind)) +
                                 " is not clean");
        }
    }

    /// Verdict for a set of faults; `stream` selects the random stream.
    ExactVerdict run(std::span<const ForcedFault> faults, uint64_t stream) const {
        if (faults.empty()) {
            std::mt19937_64 rng(stream_seed(seed_, stream));
            return run_exact(g_, faults, rng);
        }
        size_t first = SIZE_MAX, last = 0;
        for (const auto& f : faults) {
            first = std::min(first, top_of_location_.at(f.location));
            last = std::max(last, top_of_location_.at(f.location));
        }
        auto cp = std::prev(checkpoints_.upper_bound(first));
        SparseState state = cp->second.state;
        std::mt19937_64 rng(stream_seed(seed_, stream));
        ExactExecutor ex(g_.circuit, state, rng);
        ex.set_records(cp->second.records);
        ex.set_faults(faults);
        bool converged = false;
        const auto& steps = g_.circuit.steps;
        ex.run(cp->first, SIZE_MAX, [&](size_t i) {
            if (i < last || !std::holds_alternative<CorrectStep>(steps[i])) return false;
            auto it = reference_.find(i + 1);
            if (it == reference_.end()) return false;
            SparseState now = state.restrict_to(setup_.keep);
            converged = matches(now, it->second);
            return converged;
        });
        ExactVerdict v;
        if (!converged) v = exact_verdict(g_, setup_, state);
        v.detected = ex.detected();
        v.retries = ex.retries();
        return v;
    }

    const Gadget& gadget() const { return g_; }

   private:
    struct Checkpoint {
        SparseState state;
        std::vector<uint8_t> records;
    };

    void add_checkpoint(size_t step, const SparseState& s, const std::vector<uint8_t>& r) {
        checkpoints_[step] = Checkpoint{s, r};
    }

    bool matches(const SparseState& now, const SparseState& ref) const {
        if (fidelity(now, ref) >= 1.0 - kFidelityTolerance) return true;
        if (g_.kind != GadgetKind::StagedD) return false;
        // Sign flips commute with the remaining D stages and bit-flip recoveries.
        size_t data = setup_.keep.size() - setup_.blocks;
        for (size_t q = 0; q < data; ++q) {
            SparseState z = now;
            z.apply_pauli(0, uint64_t{1} << q);
            if (fidelity(z, ref) >= 1.0 - kFidelityTolerance) return true;
        }
        return false;
    }

    const Gadget& g_;
    ExactSetup setup_;
    uint64_t seed_;
    std::vector<size_t> top_of_location_;
    std::map<size_t, Checkpoint> checkpoints_;
    std::map<size_t, SparseState> reference_;
};

/// Runs many fault sets through the frame simulator, 64 per batch.
class FrameFaultRunner {
   public:
    explicit FrameFaultRunner(const Gadget& g) : g_(g), judge_(g) {}

    /// One verdict pair per fault set.
    std::vector<FrameVerdicts> run(const std::vector<std::vector<ForcedFault>>& sets, size_t workers = 1) const {
        size_t batches = (sets.size() + kLanes - 1) / kLanes;
        std::vector<FrameVerdicts> out(batches);
        parallel_for(batches, workers, [&](size_t b) {
            std::vector<LaneFault> lf;
            size_t begin = b * kLanes;
            size_t end = std::min(sets.size(), begin + kLanes);
            for (size_t i = begin; i < end; ++i) {
                for (const auto& f : sets[i]) lf.push_back({f.location, static_cast<uint8_t>(i - begin), f.option});
            }
            ForcedLaneFaults faults(std::move(lf));
            uint64_t lanes = end - begin == kLanes ? kAllLanes : (uint64_t{1} << (end - begin)) - 1;
            out[b] = run_frames(g_, judge_, faults, lanes);
        });
        return out;
    }

    const FrameJudge& judge() const { return judge_; }

   private:
    const Gadget& g_;
    FrameJudge judge_;
};

struct EnumerationOptions {
    size_t order = 1;
    Backend backend = Backend::Exact;
    /// Keep every record, not only failures.
    bool keep_all = false;
    size_t workers = 1;
    uint64_t seed = 1;
};

namespace detail {

inline double combination_weight(const FtCircuit& c, const std::vector<ForcedFault>& faults) {
    double w = 1.0;
    for (const auto& f : faults) w /= num_fault_options(c.locations[f.location].kind);
    return w;
}

inline void tally(FaultReport& rep, const FtCircuit& c, std::vector<ForcedFault> faults, bool detected, bool failure,
                  bool keep) {
    ++rep.combinations;
    rep.detected += detected;
    if (failure) {
        ++rep.failures;
        rep.alpha_pairs += combination_weight(c, faults);
    }
    if (keep || failure) rep.records.push_back({std::move(faults), detected, failure});
}

}  // namespace detail

/// All fault combinations of the given order at distinct locations.
/// Order 1 keeps every record by default. Exact order 2 is only practical for
/// small circuits; see `sample_pairs` for a sampled alternative.
inline FaultReport enumerate_faults(const Gadget& g, EnumerationOptions opt = {}) {
    if (opt.order != 1 && opt.order != 2) throw ParameterError("enumerate_faults: order must be 1 or 2");
    const FtCircuit& c = g.circuit;
    std::vector<ForcedFault> singles = single_faults(c);
    FaultReport rep;
    rep.order = opt.order;
    rep.backend = opt.backend;
    bool keep = opt.keep_all || opt.order == 1;

    std::vector<std::vector<ForcedFault>> sets;
    if (opt.order == 1) {
        for (const auto& f : singles) sets.push_back({f});
    }

    auto flush = [&](std::vector<std::vector<ForcedFault>>& batch) {
        if (batch.empty()) return;
        if (opt.backend == Backend::Frame) {
            FrameFaultRunner runner(g);
            auto v = runner.run(batch, opt.workers);
            for (size_t i = 0; i < batch.size(); ++i) {
                uint64_t bit = uint64_t{1} << (i % kLanes);
                const auto& fv = v[i / kLanes];
                detail::tally(rep, c, std::move(batch[i]), fv.detected & bit, fv.logical_failure & bit, keep);
            }
        } else {
            ExactFaultRunner runner(g, opt.seed);
            std::vector<ExactVerdict> v(batch.size());
            parallel_for(batch.size(), opt.workers, [&](size_t i) { v[i] = runner.run(batch[i], rep.combinations + i); });
            for (size_t i = 0; i < batch.size(); ++i) {
                detail::tally(rep, c, std::move(batch[i]), v[i].detected, v[i].logical_failure, keep);
            }
        }
        batch.clear();
    };

    if (opt.order == 1) {
        flush(sets);
        return rep;
    }
    const size_t chunk = opt.backend == Backend::Frame ? kLanes * 4096 : 4096;
    for (size_t i = 0; i < singles.size(); ++i) {
        for (size_t j = i + 1; j < singles.size(); ++j) {
            if (singles[j].location == singles[i].location) continue;
            sets.push_back({singles[i], singles[j]});
            if (sets.size() == chunk) flush(sets);
        }
    }
    flush(sets);
    return rep;
}

/// `count` random pairs of single faults at distinct locations.
inline std::vector<std::vector<ForcedFault>> sample_pairs(const FtCircuit& c, size_t count, uint64_t seed) {
    std::vector<ForcedFault> singles = single_faults(c);
    std::vector<std::vector<ForcedFault>> out;
    if (c.locations.size() < 2) return out;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<size_t> pick(0, singles.size() - 1);
    while (out.size() < count) {
        ForcedFault a = singles[pick(rng)], b = singles[pick(rng)];
        if (a.location == b.location) continue;
        if (b.location < a.location) std::swap(a, b);
        out.push_back({a, b});
    }
    return out;
}

struct CrossValidation {
    size_t compared = 0;
    size_t verdict_mismatches = 0;
    size_t detection_mismatches = 0;
    std::vector<std::vector<ForcedFault>> mismatched;
};

/// Compares exact and frame verdicts on the same fault sets.
inline CrossValidation cross_validate(const Gadget& g, const std::vector<std::vector<ForcedFault>>& sets,
                                      size_t workers = 1, uint64_t seed = 1) {
    ExactFaultRunner exact(g, seed);
    FrameFaultRunner frame(g);
    auto fv = frame.run(sets, workers);
    std::vector<ExactVerdict> ev(sets.size());
    parallel_for(sets.size(), workers, [&](size_t i) { ev[i] = exact.run(sets[i], i); });
    CrossValidation cv;
    for (size_t i = 0; i < sets.size(); ++i) {
        uint64_t bit = uint64_t{1} << (i % kLanes);
        bool ff = fv[i / kLanes].logical_failure & bit;
        bool fd = fv[i / kLanes].detected & bit;
        ++cv.compared;
        bool bad = false;
        if (ff != ev[i].logical_failure) {
            ++cv.verdict_mismatches;
            bad = true;
        }
        if (fd != ev[i].detected) {
            ++cv.detection_mismatches;
            bad = true;
        }
        if (bad && cv.mismatched.size() < 16) cv.mismatched.push_back(sets[i]);
    }
    return cv;
}

/// CSV with header `location_index,kind,pauli,detected,logical_failure`.
/// Fields of multi-fault records are joined with '+'.
inline void write_fault_csv(std::ostream& os, const FtCircuit& c, const FaultReport& rep) {
    os << "location_index,kind,pauli,detected,logical_failure\n";
    for (const auto& r : rep.records) {
        std::string loc, kind, pauli;
        for (size_t i = 0; i < r.faults.size(); ++i) {
            const auto& l = c.locations[r.faults[i].location];
            if (i) {
                loc += '+';
                kind += '+';
                pauli += '+';
            }
            loc += std::to_string(l.index);
            kind += location_kind_name(l.kind);
            pauli += fault_label(l.kind, r.faults[i].option);
        }
        os << loc << ',' << kind << ',' << pauli << ',' << int(r.detected) << ',' << int(r.logical_failure) << '\n';
    }
}

}  // namespace ftqc
