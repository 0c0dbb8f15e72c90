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
#include <memory>
#include <string>
#include <vector>

#include "ftqc/errors.hpp"
#include "ftqc/frame_executor.hpp"
#include "ftqc/gadgets.hpp"
#include "ftqc/harness.hpp"
#include "ftqc/montecarlo.hpp"

namespace ftqc {

inline constexpr size_t kCcpQubitBudget = 343;

/// CCP_r(h): encode into the code, then r intervals separated by r - 1
/// recoveries, then decode. An interval applies CCP_r(h - 1) to every qubit
/// of the block; CCP_r(0) is `n_steps` idle steps of a bare qubit. Encoding
/// and decoding are ideal.
struct CcpConfig {
    std::shared_ptr<const GadgetContext> ctx;
    size_t r = 1;
    size_t h = 1;
    size_t n_steps = 1;

    void validate() const {
        if (!ctx) throw ParameterError("CcpConfig: no code");
        if (r < 1) throw ParameterError("CcpConfig: r must be at least 1");
        double q = std::pow(static_cast<double>(ctx->code->n), static_cast<double>(h));
        if (q > static_cast<double>(kCcpQubitBudget)) {
            throw BudgetExceededError("CcpConfig: l^h = " + std::to_string(static_cast<uint64_t>(q)) +
                                      " exceeds the budget of " + std::to_string(kCcpQubitBudget));
        }
    }
};

/// Lane-parallel CCP on Pauli frames of one logical qubit.
class CcpRunner {
   public:
    explicit CcpRunner(CcpConfig cfg) : cfg_((cfg.validate(), std::move(cfg))), recover_(make_recover_gadget(cfg_.ctx)) {
        const auto& code = *cfg_.ctx->code;
        bit_ = MaskTable(code.bit_flip_table);
        sign_ = MaskTable(code.sign_flip_table);
        lx_ = code.logical_x_mask();
        lz_ = code.logical_z_mask();
        wait_.kind = LocationKind::Wait;
    }

    /// Failure mask of 64 trials.
    uint64_t run_batch(const ErrorModel& model, uint64_t seed, uint64_t batch, uint64_t lanes = kAllLanes) const {
        SampledFaults faults(model.by_kind(), batch_seed(seed, batch));
        Frame f = run(cfg_.h, Frame{}, faults, lanes);
        return (f.x | f.z) & lanes;
    }

   private:
    struct Frame {
        uint64_t x = 0;
        uint64_t z = 0;
    };

    Frame run(size_t h, Frame in, SampledFaults& faults, uint64_t lanes) const {
        if (h == 0) {
            FrameBatch one(1, 1);
            one.x[0] = in.x;
            one.z[0] = in.z;
            for (size_t s = 0; s < cfg_.n_steps; ++s) faults.at(wait_, lanes, true, one);
            return {one.x[0], one.z[0]};
        }
        const size_t n = cfg_.ctx->code->n;
        std::vector<Frame> block(n);
        for (size_t i = 0; i < n; ++i) {
            if ((lx_ >> i) & 1) block[i].x = in.x;
            if ((lz_ >> i) & 1) block[i].z = in.z;
        }
        for (size_t k = 0; k < cfg_.r; ++k) {
            for (size_t i = 0; i < n; ++i) block[i] = run(h - 1, block[i], faults, lanes);
            if (k + 1 < cfg_.r) {
                FrameBatch b(recover_.circuit.n_qubits, recover_.circuit.num_records);
                for (size_t i = 0; i < n; ++i) {
                    b.x[i] = block[i].x;
                    b.z[i] = block[i].z;
                }
                FrameExecutor<SampledFaults> ex(recover_.circuit, b, faults);
                ex.run(lanes);
                for (size_t i = 0; i < n; ++i) block[i] = {b.x[i], b.z[i]};
            }
        }
        Frame out;
        uint64_t any = 0;
        for (const auto& f : block) any |= f.x | f.z;
        for (uint64_t m = any & lanes; m; m &= m - 1) {
            size_t lane = static_cast<size_t>(std::countr_zero(m));
            uint64_t x = 0, z = 0;
            for (size_t i = 0; i < n; ++i) {
                x |= ((block[i].x >> lane) & 1) << i;
                z |= ((block[i].z >> lane) & 1) << i;
            }
            if (std::popcount(bit_.decode(x) & lz_) & 1) out.x |= uint64_t{1} << lane;
            if (std::popcount(sign_.decode(z) & lx_) & 1) out.z |= uint64_t{1} << lane;
        }
        return out;
    }

    CcpConfig cfg_;
    Gadget recover_;
    MaskTable bit_, sign_;
    uint64_t lx_ = 0, lz_ = 0;
    Location wait_;
};

/// Failure rate of CCP_r(h): the decoded qubit differs from the input.
inline RateEstimate ccp_simulate(const CcpConfig& config, const ErrorModel& model, uint64_t trials, uint64_t seed,
                                 size_t workers = 1) {
    model.validate();
    CcpRunner runner(config);
    SamplingPlan plan;
    plan.target_failures = 0;
    plan.max_trials = trials;
    plan.workers = workers;
    return sample_batches([&](uint64_t batch, uint64_t lanes) { return runner.run_batch(model, seed, batch, lanes); },
                          plan);
}

}  // namespace ftqc
