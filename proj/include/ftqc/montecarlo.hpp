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
#include <string>
#include <vector>

#include "ftqc/circuit.hpp"
#include "ftqc/errors.hpp"
#include "ftqc/frame_executor.hpp"
#include "ftqc/gadgets.hpp"
#include "ftqc/harness.hpp"
#include "ftqc/parallel.hpp"

namespace ftqc {

/// Per-location fault probabilities. Two-qubit gates draw one of the 15
/// nontrivial Paulis, one-qubit gates and waits one of X, Y, Z.
struct ErrorModel {
    double p_gate1 = 0.0;
    double p_gate2 = 0.0;
    double p_prep = 0.0;
    double p_meas = 0.0;
    double p_wait = 0.0;

    static ErrorModel uniform(double p) { return {p, p, p, p, p}; }

    void validate() const {
        for (double p : {p_gate1, p_gate2, p_prep, p_meas, p_wait}) {
            if (!(p >= 0.0 && p <= 0.25)) throw ParameterError("ErrorModel: probability outside [0, 0.25]");
        }
    }

    std::array<double, kNumLocationKinds> by_kind() const {
        std::array<double, kNumLocationKinds> a{};
        a[static_cast<size_t>(LocationKind::Prep)] = p_prep;
        a[static_cast<size_t>(LocationKind::Gate1Q)] = p_gate1;
        a[static_cast<size_t>(LocationKind::Gate2Q)] = p_gate2;
        a[static_cast<size_t>(LocationKind::Measure)] = p_meas;
        a[static_cast<size_t>(LocationKind::Wait)] = p_wait;
        return a;
    }
};

struct RateEstimate {
    uint64_t failures = 0;
    uint64_t trials = 0;
    double rate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

/// Wilson score interval at normal quantile z.
inline RateEstimate wilson(uint64_t failures, uint64_t trials, double z = 1.96) {
    if (failures > trials) throw ParameterError("wilson: failures exceed trials");
    RateEstimate r;
    r.failures = failures;
    r.trials = trials;
    if (trials == 0) {
        r.ci_high = 1.0;
        return r;
    }
    double n = static_cast<double>(trials);
    double ph = static_cast<double>(failures) / n;
    double z2 = z * z;
    double den = 1 + z2 / n;
    double center = (ph + z2 / (2 * n)) / den;
    double half = z * std::sqrt(ph * (1 - ph) / n + z2 / (4 * n * n)) / den;
    r.rate = ph;
    r.ci_low = std::max(0.0, std::min(ph, center - half));
    r.ci_high = std::min(1.0, std::max(ph, center + half));
    return r;
}

/// Seed of batch `batch` of a run with seed `seed`. Trial t is lane t % 64 of
/// batch t / 64, so (seed, t) fixes the trial.
inline uint64_t batch_seed(uint64_t seed, uint64_t batch) { return stream_seed(seed, batch); }

/// Failure mask of one 64-trial batch of a Clifford gadget.
inline uint64_t run_gadget_batch(const Gadget& g, const FrameJudge& judge, const ErrorModel& model, uint64_t seed,
                                 uint64_t batch, uint64_t lanes = kAllLanes) {
    SampledFaults faults(model.by_kind(), batch_seed(seed, batch));
    return run_frames(g, judge, faults, lanes).logical_failure;
}

/// A single trial: lane `trial % 64` of its batch.
inline bool run_gadget_trial(const Gadget& g, const ErrorModel& model, uint64_t seed, uint64_t trial) {
    model.validate();
    FrameJudge judge(g);
    uint64_t mask = run_gadget_batch(g, judge, model, seed, trial / kLanes);
    return (mask >> (trial % kLanes)) & 1;
}

struct SamplingPlan {
    /// Stop once this many failures were seen (0 = run max_trials).
    uint64_t target_failures = 100;
    uint64_t min_trials = kLanes;
    uint64_t max_trials = uint64_t{1} << 20;
    /// Batches per wave; stopping is decided between waves only.
    size_t wave_batches = 256;
    size_t workers = 1;
};

/// Runs waves of 64-trial batches until the plan stops. Counts depend only
/// on the seed and the plan, never on the number of workers.
template <typename BatchFn>
RateEstimate sample_batches(BatchFn&& batch_failures, const SamplingPlan& plan) {
    uint64_t failures = 0, trials = 0, batch = 0;
    while (trials < plan.max_trials) {
        uint64_t remaining = plan.max_trials - trials;
        uint64_t wave = std::min<uint64_t>(plan.wave_batches, (remaining + kLanes - 1) / kLanes);
        std::vector<uint64_t> counts(wave);
        std::vector<uint64_t> sizes(wave);
        for (uint64_t b = 0; b < wave; ++b) sizes[b] = std::min<uint64_t>(kLanes, remaining - b * kLanes);
        parallel_for(wave, plan.workers, [&](size_t b) {
            uint64_t lanes = sizes[b] == kLanes ? kAllLanes : (uint64_t{1} << sizes[b]) - 1;
            counts[b] = std::popcount(batch_failures(batch + b, lanes) & lanes);
        });
        for (uint64_t b = 0; b < wave; ++b) {
            failures += counts[b];
            trials += sizes[b];
        }
        batch += wave;
        if (plan.target_failures > 0 && failures >= plan.target_failures && trials >= plan.min_trials) break;
    }
    return wilson(failures, trials);
}

/// Logical failure rate of a Clifford gadget.
inline RateEstimate estimate_rate(const Gadget& g, const ErrorModel& model, uint64_t seed, const SamplingPlan& plan) {
    model.validate();
    FrameJudge judge(g);
    return sample_batches(
        [&](uint64_t batch, uint64_t lanes) { return run_gadget_batch(g, judge, model, seed, batch, lanes); }, plan);
}

/// Fixed number of trials.
inline RateEstimate estimate_rate(const Gadget& g, const ErrorModel& model, uint64_t trials, uint64_t seed,
                                  size_t workers = 1) {
    SamplingPlan plan;
    plan.target_failures = 0;
    plan.max_trials = trials;
    plan.workers = workers;
    return estimate_rate(g, model, seed, plan);
}

/// `per_decade` geometric points from lo to hi inclusive.
inline std::vector<double> geometric_grid(double lo, double hi, size_t per_decade) {
    if (!(lo > 0 && hi >= lo) || per_decade == 0) throw ParameterError("geometric_grid: bad range");
    std::vector<double> out;
    double step = 1.0 / static_cast<double>(per_decade);
    double a = std::log10(lo), b = std::log10(hi);
    size_t count = static_cast<size_t>(std::floor((b - a) / step + 1e-9)) + 1;
    for (size_t i = 0; i < count; ++i) out.push_back(std::pow(10.0, a + step * static_cast<double>(i)));
    if (out.back() < hi * (1 - 1e-9)) out.push_back(hi);
    return out;
}

struct SweepPoint {
    size_t level = 1;
    double p = 0.0;
    RateEstimate estimate;
    uint64_t seed = 0;
};

/// Rate at every p of the grid, with every location at probability p. Each
/// point gets its own seed derived from `seed` and its index.
inline std::vector<SweepPoint> sweep(const Gadget& g, const std::vector<double>& ps, uint64_t seed,
                                     const SamplingPlan& plan) {
    std::vector<SweepPoint> out;
    for (size_t i = 0; i < ps.size(); ++i) {
        uint64_t s = stream_seed(seed, 1000003ull * g.level + i);
        out.push_back({g.level, ps[i], estimate_rate(g, ErrorModel::uniform(ps[i]), s, plan), s});
    }
    return out;
}

}  // namespace ftqc
