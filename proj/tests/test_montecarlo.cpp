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

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "ftqc/ccp.hpp"
#include "ftqc/experiment_config.hpp"
#include "ftqc/fault_enumeration.hpp"
#include "ftqc/fit.hpp"
#include "ftqc/montecarlo.hpp"

namespace ftqc {
namespace {

std::shared_ptr<const GadgetContext> steane_ctx() {
    static auto ctx = make_context(build_steane());
    return ctx;
}

SparseState random_state(size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::vector<SparseState::Entry> e;
    for (uint64_t k = 0; k < (uint64_t{1} << n); ++k) e.push_back({k, Complex(g(rng), g(rng))});
    return SparseState::from_entries(n, e);
}

void apply_gate(SparseState& s, GateTag g, size_t q0, size_t q1) {
    if (g == GateTag::N) {
        s.apply_cnot(q0, q1);
    } else if (g == GateTag::CZ) {
        s.apply_2q_diag(gates::CZ(), q0, q1);
    } else {
        s.apply_1q(gates::one_qubit(g), q0);
    }
}

uint64_t mask(const BinaryWord& w) { return w.low_word(); }

// Pauli error E then gate U equals gate U then the propagated error, up to phase.
TEST(Propagate, MatchesSimulatorConjugation) {
    std::mt19937_64 rng(1);
    const GateTag gs[] = {GateTag::I, GateTag::A, GateTag::B, GateTag::C, GateTag::X,
                          GateTag::Y, GateTag::Z, GateTag::N, GateTag::CZ};
    for (GateTag g : gs) {
        for (uint64_t x = 0; x < 4; ++x) {
            for (uint64_t z = 0; z < 4; ++z) {
                PauliFrame f(2);
                f.x_mask = BinaryWord::from_uint(x, 2);
                f.z_mask = BinaryWord::from_uint(z, 2);
                PauliFrame out = propagate(f, g, 0, 1);
                SparseState psi = random_state(2, rng);
                SparseState a = psi;
                a.apply_pauli(x, z);
                apply_gate(a, g, 0, 1);
                SparseState b = psi;
                apply_gate(b, g, 0, 1);
                b.apply_pauli(mask(out.x_mask), mask(out.z_mask));
                EXPECT_NEAR(fidelity(a, b), 1.0, 1e-10) << gate_name(g) << " x=" << x << " z=" << z;
            }
        }
    }
}

TEST(Propagate, Examples) {
    PauliFrame f(2);
    f.x_mask.set(0, true);
    PauliFrame n = propagate(f, GateTag::N, 0, 1);
    EXPECT_EQ(n.x_mask.to_string(), "11");
    EXPECT_EQ(n.z_mask.to_string(), "00");

    PauliFrame z(1);
    z.z_mask.set(0, true);
    PauliFrame a = propagate(z, GateTag::A, 0);
    EXPECT_TRUE(a.x_mask.get(0));
    EXPECT_FALSE(a.z_mask.get(0));

    PauliFrame i = propagate(n, GateTag::I, 1);
    EXPECT_EQ(i.x_mask, n.x_mask);
    EXPECT_EQ(i.z_mask, n.z_mask);
}

TEST(Propagate, NonCliffordRejected) {
    PauliFrame f(2);
    EXPECT_THROW(propagate(f, GateTag::D, 0, 1), UnsupportedGateError);
    EXPECT_THROW(propagate(f, GateTag::E, 0, 1), UnsupportedGateError);
    EXPECT_THROW(FrameJudge(make_staged_d_gadget(steane_ctx())), UnsupportedGateError);
}

TEST(ErrorModel, Validation) {
    EXPECT_NO_THROW(ErrorModel::uniform(0.25).validate());
    EXPECT_THROW(ErrorModel::uniform(0.3).validate(), ParameterError);
    ErrorModel m;
    m.p_meas = -0.1;
    EXPECT_THROW(m.validate(), ParameterError);
}

TEST(RunGadgetTrial, ZeroNoiseNeverFails) {
    Gadget g = make_recover_gadget(steane_ctx());
    for (uint64_t t = 0; t < 200; ++t) EXPECT_FALSE(run_gadget_trial(g, ErrorModel{}, 7, t));
    RateEstimate r = estimate_rate(g, ErrorModel{}, 6400, 3);
    EXPECT_EQ(r.failures, 0u);
    EXPECT_EQ(r.trials, 6400u);
}

TEST(RunGadgetTrial, TrialIsFixedBySeedAndIndex) {
    Gadget g = make_memory_gadget(steane_ctx());
    ErrorModel m = ErrorModel::uniform(0.02);
    FrameJudge judge(g);
    uint64_t batch = run_gadget_batch(g, judge, m, 11, 5);
    for (uint64_t lane = 0; lane < kLanes; lane += 7) {
        EXPECT_EQ(run_gadget_trial(g, m, 11, 5 * kLanes + lane), bool((batch >> lane) & 1));
    }
}

TEST(FrameVsExact, AgreeOnAllSingleFaultsOfRecover) {
    Gadget g = make_recover_gadget(steane_ctx());
    std::vector<std::vector<ForcedFault>> sets;
    for (const ForcedFault& f : single_faults(g.circuit)) sets.push_back({f});
    CrossValidation cv = cross_validate(g, sets, 2);
    EXPECT_EQ(cv.compared, sets.size());
    EXPECT_EQ(cv.verdict_mismatches, 0u);
    EXPECT_EQ(cv.detection_mismatches, 0u);
}

TEST(FrameVsExact, AgreeOnSampledPairs) {
    for (const Gadget& g : {make_memory_gadget(steane_ctx()), make_zero_gadget(steane_ctx())}) {
        auto sets = sample_pairs(g.circuit, 300, 5);
        CrossValidation cv = cross_validate(g, sets, 2);
        EXPECT_EQ(cv.verdict_mismatches, 0u) << gadget_kind_name(g.kind);
    }
}

TEST(FrameVsExact, RecordedPairFailuresFailInBothPaths) {
    Gadget g = make_recover_gadget(steane_ctx());
    EnumerationOptions opt;
    opt.order = 2;
    opt.backend = Backend::Frame;
    opt.workers = 2;
    FaultReport rep = enumerate_faults(g, opt);
    ASSERT_GT(rep.records.size(), 0u);
    std::vector<std::vector<ForcedFault>> sets;
    for (size_t i = 0; i < rep.records.size() && sets.size() < 64; i += rep.records.size() / 64 + 1) {
        sets.push_back(rep.records[i].faults);
    }
    std::mt19937_64 rng(2);
    for (const auto& s : sets) EXPECT_TRUE(run_exact(g, s, rng).logical_failure);
    std::vector<LaneFault> lf;
    for (size_t lane = 0; lane < sets.size(); ++lane) {
        for (const auto& f : sets[lane]) lf.push_back({f.location, static_cast<uint8_t>(lane), f.option});
    }
    ForcedLaneFaults forced(lf);
    FrameJudge judge(g);
    uint64_t lanes = sets.size() == 64 ? kAllLanes : (uint64_t{1} << sets.size()) - 1;
    EXPECT_EQ(run_frames(g, judge, forced, lanes).logical_failure, lanes);
}

TEST(Wilson, IntervalContainsRate) {
    RateEstimate r = wilson(5, 100);
    EXPECT_DOUBLE_EQ(r.rate, 0.05);
    EXPECT_LT(r.ci_low, 0.05);
    EXPECT_GT(r.ci_high, 0.05);
    RateEstimate z = wilson(0, 100);
    EXPECT_EQ(z.ci_low, 0.0);
    EXPECT_GT(z.ci_high, 0.0);
    EXPECT_THROW(wilson(3, 2), ParameterError);
    // Closed form at 10/1000 with z = 1.96.
    RateEstimate w = wilson(10, 1000);
    EXPECT_NEAR(w.ci_low, 0.00544070, 1e-7);
    EXPECT_NEAR(w.ci_high, 0.01830967, 1e-7);
}

TEST(GeometricGrid, Endpoints) {
    auto g = geometric_grid(1e-4, 1e-1, 6);
    EXPECT_EQ(g.size(), 19u);
    EXPECT_NEAR(g.front(), 1e-4, 1e-16);
    EXPECT_NEAR(g.back(), 1e-1, 1e-12);
    for (size_t i = 1; i < g.size(); ++i) EXPECT_NEAR(g[i] / g[i - 1], std::pow(10.0, 1.0 / 6), 1e-9);
    EXPECT_THROW(geometric_grid(0, 1, 3), ParameterError);
}

TEST(EstimateRate, IndependentOfWorkerCount) {
    Gadget g = make_memory_gadget(steane_ctx());
    SamplingPlan plan;
    plan.target_failures = 50;
    plan.max_trials = 1 << 16;
    plan.wave_batches = 16;
    plan.workers = 1;
    RateEstimate a = estimate_rate(g, ErrorModel::uniform(3e-3), 21, plan);
    plan.workers = 4;
    RateEstimate b = estimate_rate(g, ErrorModel::uniform(3e-3), 21, plan);
    EXPECT_EQ(a.failures, b.failures);
    EXPECT_EQ(a.trials, b.trials);
    EXPECT_GE(a.failures, 50u);
}

TEST(Sweep, MonotoneWithinIntervals) {
    Gadget g = make_memory_gadget(steane_ctx());
    SamplingPlan plan;
    plan.target_failures = 80;
    plan.max_trials = 1 << 18;
    plan.workers = 4;
    auto pts = sweep(g, {2e-3, 4e-3, 8e-3, 1.6e-2}, 3, plan);
    for (size_t i = 1; i < pts.size(); ++i) {
        EXPECT_GE(pts[i].estimate.ci_high, pts[i - 1].estimate.ci_low) << pts[i].p;
        EXPECT_GT(pts[i].estimate.rate, pts[i - 1].estimate.rate * 0.5);
    }
    EXPECT_GT(pts.back().estimate.rate, pts.front().estimate.rate);
}

std::vector<std::pair<double, RateEstimate>> synthetic(std::function<double(double)> f) {
    std::vector<std::pair<double, RateEstimate>> pts;
    for (double p : {1e-4, 3e-4, 1e-3, 3e-3}) {
        RateEstimate r;
        r.failures = 1000;
        r.trials = static_cast<uint64_t>(1000 / f(p));
        r.rate = f(p);
        pts.push_back({p, r});
    }
    return pts;
}

TEST(FitAlpha, QuadraticSynthetic) {
    AlphaFit f = fit_alpha(synthetic([](double p) { return 100 * p * p; }));
    EXPECT_NEAR(f.alpha, 100, 1e-6);
    EXPECT_NEAR(f.slope, 2.0, 1e-9);
    EXPECT_NEAR(f.pseudo_threshold, 0.01, 1e-10);
    EXPECT_NEAR(f.free_crossing, 0.01, 1e-9);
    EXPECT_LT(f.residual, 1e-9);
    EXPECT_FALSE(f.no_gain);
    EXPECT_EQ(f.points, 4u);
    EXPECT_LT(f.alpha_ci_low, 100);
    EXPECT_GT(f.alpha_ci_high, 100);
}

TEST(FitAlpha, LinearIsNoGain) {
    AlphaFit f = fit_alpha(synthetic([](double p) { return p; }));
    EXPECT_NEAR(f.slope, 1.0, 1e-9);
    EXPECT_TRUE(f.no_gain);
    EXPECT_TRUE(std::isnan(f.free_crossing));
}

TEST(FitAlpha, InsufficientData) {
    auto pts = synthetic([](double p) { return 10 * p * p; });
    pts.pop_back();
    EXPECT_THROW(fit_alpha(pts), InsufficientDataError);
    auto zeros = synthetic([](double p) { return p; });
    zeros[0].second.failures = 0;
    EXPECT_THROW(fit_alpha(zeros), InsufficientDataError);
}

// Recursive recovery count: r - 1 recoveries at the top plus r intervals of l inner runs.
double recoveries_oracle(double l, double r, size_t h) {
    if (h == 0) return 0;
    return (r - 1) + r * l * recoveries_oracle(l, r, h - 1);
}

TEST(Overhead, Examples) {
    Overhead o = overhead(7, 3, 2, 2.0, 5.0);
    EXPECT_EQ(o.qubits, 49);
    EXPECT_EQ(o.recovery_layers, 8);
    EXPECT_EQ(o.recoveries, recoveries_oracle(7, 3, 2));
    EXPECT_EQ(o.operations, std::pow(2.0 * 49, 2));
    EXPECT_EQ(o.qubit_cost, 35 * 35);
    Overhead z = overhead(7, 3, 0);
    EXPECT_EQ(z.qubits, 1);
    EXPECT_EQ(z.recoveries, 0);
    EXPECT_EQ(z.recovery_layers, 0);
    for (size_t h = 0; h < 5; ++h) EXPECT_EQ(overhead(15, 4, h).recoveries, recoveries_oracle(15, 4, h));
    EXPECT_THROW(overhead(0, 1, 1), ParameterError);
}

TEST(Overhead, RequiredDepth) {
    EXPECT_EQ(required_h(1e6, 1.0, 0.1 / 1e-3, 1e-3), 3u);
    EXPECT_EQ(required_h(1e6, 1e-6, 100, 1e-3), 4u);
    EXPECT_EQ(required_h(5, 1, 0.1, 1), 0u);
    EXPECT_THROW(required_h(1e6, 1e-3, 1000, 1e-3), ThresholdError);
    EXPECT_THROW(required_h(1e6, 1e-3, 1e4, 1e-3), ThresholdError);
}

TEST(BoundCheck, Examples) {
    BoundCheck a = ccp_error_bound_check(0.1, 0.01, 9);
    EXPECT_TRUE(a.applicable);
    EXPECT_NEAR(a.bound, 0.1, 1e-15);
    EXPECT_FALSE(ccp_error_bound_check(0.1, 0.05, 5).applicable);
    BoundCheck r1 = ccp_error_bound_check(0.2, 0.1, 1);
    EXPECT_TRUE(r1.applicable);
    EXPECT_NEAR(r1.bound, 0.2, 1e-15);
    EXPECT_FALSE(ccp_error_bound_check(0.19, 0.1, 1).applicable);
    EXPECT_THROW(ccp_error_bound_check(0, 0.1, 1), ParameterError);
}

TEST(Ccp, ZeroNoiseNeverFails) {
    CcpConfig cfg{steane_ctx(), 3, 1, 2};
    RateEstimate r = ccp_simulate(cfg, ErrorModel{}, 6400, 1, 2);
    EXPECT_EQ(r.failures, 0u);
    EXPECT_EQ(r.trials, 6400u);
    CcpConfig deep{steane_ctx(), 2, 2, 1};
    EXPECT_EQ(ccp_simulate(deep, ErrorModel{}, 640, 1).failures, 0u);
}

TEST(Ccp, BareDepthZeroMatchesIdleRate) {
    // Depth 0 is n_steps waits on one qubit; any of X, Y, Z changes it.
    ErrorModel m;
    m.p_wait = 0.03;
    CcpConfig cfg{steane_ctx(), 1, 0, 1};
    RateEstimate r = ccp_simulate(cfg, m, 200000, 4, 2);
    EXPECT_NEAR(r.rate, 0.03, 4 * std::sqrt(0.03 / 200000));
}

TEST(Ccp, BudgetAndValidation) {
    EXPECT_NO_THROW(CcpRunner(CcpConfig{steane_ctx(), 1, 3, 1}));
    EXPECT_THROW(CcpRunner(CcpConfig{steane_ctx(), 1, 4, 1}), BudgetExceededError);
    EXPECT_THROW(CcpRunner(CcpConfig{make_context(build_rm15()), 1, 3, 1}), BudgetExceededError);
    EXPECT_THROW(CcpRunner(CcpConfig{steane_ctx(), 0, 1, 1}), ParameterError);
    EXPECT_THROW(CcpRunner(CcpConfig{nullptr, 1, 1, 1}), ParameterError);
}

TEST(Ccp, DeterministicAcrossWorkers) {
    CcpConfig cfg{steane_ctx(), 2, 1, 1};
    ErrorModel m = ErrorModel::uniform(5e-3);
    RateEstimate a = ccp_simulate(cfg, m, 64 * 300, 9, 1);
    RateEstimate b = ccp_simulate(cfg, m, 64 * 300, 9, 3);
    EXPECT_EQ(a.failures, b.failures);
    EXPECT_GT(a.failures, 0u);
}

TEST(Config, RoundTrip) {
    ExperimentConfig c;
    c.command = "ccp";
    c.code = "rm15";
    c.levels = {1, 2};
    c.p_grid = {1e-3, 2e-3};
    c.r = 4;
    c.h = 2;
    c.error_model.p_wait = 0.01;
    c.seed = 99;
    c.output = "out/x";
    ExperimentConfig back = parse_config(dump_config(c));
    EXPECT_EQ(back, c);
    EXPECT_EQ(parse_config("{}"), ExperimentConfig{});
}

TEST(Config, RejectsUnknownAndBadValues) {
    EXPECT_THROW(parse_config(R"({"cod": "steane"})"), ParameterError);
    EXPECT_THROW(parse_config(R"({"error_model": {"p_gate3": 0.1}})"), ParameterError);
    EXPECT_THROW(parse_config(R"({"code": "golay"})"), ParameterError);
    EXPECT_THROW(parse_config(R"({"levels": [3]})"), ParameterError);
    EXPECT_THROW(parse_config(R"({"p_grid": [0.5]})"), ParameterError);
    EXPECT_THROW(parse_config(R"({"seed": "x"})"), ParameterError);
    EXPECT_THROW(parse_config("{"), ParameterError);
    EXPECT_THROW(load_config("/nonexistent/config.json"), ParameterError);
}

TEST(Config, GridAndPlan) {
    ExperimentConfig c;
    c.p_min = 1e-3;
    c.p_max = 1e-2;
    c.per_decade = 2;
    EXPECT_EQ(c.grid().size(), 3u);
    c.p_grid = {0.01};
    EXPECT_EQ(c.grid(), std::vector<double>{0.01});
    c.target_failures = 7;
    c.workers = 3;
    EXPECT_EQ(c.plan().target_failures, 7u);
    EXPECT_EQ(c.plan().workers, 3u);
}

}  // namespace
}  // namespace ftqc
