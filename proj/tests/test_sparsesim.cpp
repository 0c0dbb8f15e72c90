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
#include <complex>
#include <random>
#include <vector>

#include "ftqc/sparse_state.hpp"

namespace ftqc {
namespace {

using Dense = std::vector<Complex>;
const double kRt = 1.0 / std::sqrt(2.0);
const Complex kI(0, 1);

// Dense oracle: amplitude of key k at index k, qubit q is bit q.
Dense dense_of(SparseState s) {
    Dense v(size_t{1} << s.num_qubits(), 0.0);
    for (const auto& [k, a] : s.entries()) v[k] = a;
    return v;
}

void dense_1q(Dense& v, const std::array<Complex, 4>& m, size_t q) {
    size_t bit = size_t{1} << q;
    for (size_t k = 0; k < v.size(); ++k) {
        if (k & bit) continue;
        Complex a0 = v[k], a1 = v[k | bit];
        v[k] = m[0] * a0 + m[1] * a1;
        v[k | bit] = m[2] * a0 + m[3] * a1;
    }
}

void dense_diag(Dense& v, const std::array<Complex, 4>& ph, size_t q1, size_t q2) {
    for (size_t k = 0; k < v.size(); ++k) v[k] *= ph[2 * ((k >> q1) & 1) + ((k >> q2) & 1)];
}

void dense_cnot(Dense& v, size_t c, size_t t) {
    Dense out(v.size());
    for (size_t k = 0; k < v.size(); ++k) out[((k >> c) & 1) ? k ^ (size_t{1} << t) : k] = v[k];
    v = out;
}

double max_diff(const Dense& a, const Dense& b) {
    double d = 0;
    for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

SparseState random_state(size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::vector<SparseState::Entry> e;
    for (uint64_t k = 0; k < (uint64_t{1} << n); ++k) e.push_back({k, Complex(g(rng), g(rng))});
    return SparseState::from_entries(n, e);
}

TEST(Gate1Q, UnitarityCheckedAtConstruction) {
    EXPECT_THROW(Gate1Q({1, 1, 0, 1}, GateTag::Custom), ParameterError);
    EXPECT_THROW(Gate2QDiag({1, 1, 1, 2}, GateTag::Custom), ParameterError);
    for (auto t : {GateTag::I, GateTag::A, GateTag::B, GateTag::C, GateTag::X, GateTag::Y, GateTag::Z}) {
        EXPECT_NO_THROW(Gate1Q(gates::one_qubit(t).m, t));
    }
}

TEST(Gates, ParseNames) {
    EXPECT_EQ(parse_gate("D"), GateTag::D);
    EXPECT_EQ(parse_gate("N"), GateTag::N);
    EXPECT_FALSE(parse_gate("Q").has_value());
    EXPECT_TRUE(is_two_qubit(GateTag::E));
    EXPECT_FALSE(is_two_qubit(GateTag::B));
}

TEST(Apply1Q, HadamardOnZero) {
    SparseState s = apply_1q(SparseState(1), gates::A(), 0);
    EXPECT_NEAR(std::abs(s.amplitude(0) - kRt), 0, 1e-12);
    EXPECT_NEAR(std::abs(s.amplitude(1) - kRt), 0, 1e-12);
}

TEST(Apply1Q, PhaseOnOne) {
    SparseState s = apply_1q(SparseState::basis(1, 1), gates::B(), 0);
    EXPECT_EQ(s.size(), 1u);
    EXPECT_NEAR(std::abs(s.amplitude(1) - kI), 0, 1e-12);
    SparseState c = apply_1q(SparseState::basis(1, 1), gates::C(), 0);
    EXPECT_NEAR(std::abs(c.amplitude(1) + kI), 0, 1e-12);
}

TEST(Apply1Q, HadamardInvolution) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 10; ++t) {
        SparseState psi = random_state(3, rng);
        SparseState s = psi;
        size_t q = t % 3;
        s.apply_1q(gates::A(), q);
        s.apply_1q(gates::A(), q);
        EXPECT_NEAR(fidelity(s, psi), 1.0, 1e-12);
    }
}

TEST(Apply1Q, IndexOutOfRange) {
    SparseState s(2);
    EXPECT_THROW(s.apply_1q(gates::A(), 2), ParameterError);
    EXPECT_THROW(s.apply_cnot(0, 5), ParameterError);
    EXPECT_THROW(s.apply_2q_diag(gates::D(), 1, 1), ParameterError);
}

TEST(Apply1Q, MatchesDenseOracle) {
    std::mt19937_64 rng(3);
    SparseState s = random_state(4, rng);
    Dense v = dense_of(s);
    const GateTag tags[] = {GateTag::A, GateTag::B, GateTag::C, GateTag::X, GateTag::Y, GateTag::Z};
    for (int step = 0; step < 200; ++step) {
        size_t q = rng() % 4;
        size_t q2 = (q + 1 + rng() % 3) % 4;
        switch (rng() % 4) {
            case 0:
            case 1: {
                const Gate1Q& g = gates::one_qubit(tags[rng() % 6]);
                s.apply_1q(g, q);
                dense_1q(v, g.m, q);
                break;
            }
            case 2: {
                const Gate2QDiag& g = (rng() & 1) ? gates::D() : gates::E();
                s.apply_2q_diag(g, q, q2);
                dense_diag(v, g.phases, q, q2);
                break;
            }
            default:
                s.apply_cnot(q, q2);
                dense_cnot(v, q, q2);
        }
    }
    EXPECT_LT(max_diff(dense_of(s), v), 1e-10);
}

TEST(Apply2QDiag, PhasesOnEleven) {
    SparseState d = apply_2q_diag(SparseState::basis(2, 3), gates::D(), 0, 1);
    EXPECT_NEAR(std::abs(d.amplitude(3) - kI), 0, 1e-12);
    SparseState e = apply_2q_diag(SparseState::basis(2, 3), gates::E(), 0, 1);
    EXPECT_NEAR(std::abs(e.amplitude(3) + kI), 0, 1e-12);
    for (uint64_t k : {0u, 1u, 2u}) {
        SparseState b = apply_2q_diag(SparseState::basis(2, k), gates::D(), 0, 1);
        EXPECT_NEAR(std::abs(b.amplitude(k) - 1.0), 0, 1e-12);
    }
}

TEST(Apply2QDiag, DThenEIsIdentity) {
    std::mt19937_64 rng(5);
    SparseState psi = random_state(3, rng);
    SparseState s = apply_2q_diag(apply_2q_diag(psi, gates::D(), 0, 2), gates::E(), 0, 2);
    EXPECT_LT(max_diff(dense_of(s), dense_of(psi)), 1e-12);
}

TEST(Apply2QDiag, DSquaredIsControlledSign) {
    // (|10> + |11>)/sqrt2 with the string order q0 q1: keys 1 and 3.
    SparseState s = SparseState::from_entries(2, {{1, 1.0}, {3, 1.0}});
    s.apply_2q_diag(gates::D(), 0, 1);
    s.apply_2q_diag(gates::D(), 0, 1);
    EXPECT_NEAR(std::abs(s.amplitude(1) - kRt), 0, 1e-12);
    EXPECT_NEAR(std::abs(s.amplitude(3) + kRt), 0, 1e-12);
}

TEST(ApplyCnot, FlipsTargetWhenControlSet) {
    SparseState s = apply_cnot(SparseState::basis(BinaryWord::from_string("10")), 0, 1);
    EXPECT_EQ(s.unpack(s.entries()[0].first).to_string(), "11");
    SparseState t = apply_cnot(SparseState::basis(BinaryWord::from_string("01")), 0, 1);
    EXPECT_EQ(t.unpack(t.entries()[0].first).to_string(), "01");
}

TEST(ApplyCnot, ZeroControlLeavesStateUnchanged) {
    std::mt19937_64 rng(9);
    SparseState psi = random_state(3, rng);
    SparseState s = psi;
    s.measure_forced(0, false);
    SparseState before = s;
    s.reset(0);
    before.reset(0);
    s.apply_cnot(0, 1);
    s.apply_cnot(0, 2);
    EXPECT_NEAR(fidelity(s, before), 1.0, 1e-12);
}

TEST(ApplyCnot, HadamardConjugatedDSquared) {
    for (uint64_t k = 0; k < 4; ++k) {
        SparseState s = SparseState::basis(2, k);
        s.apply_1q(gates::A(), 1);
        s.apply_2q_diag(gates::D(), 0, 1);
        s.apply_2q_diag(gates::D(), 0, 1);
        s.apply_1q(gates::A().adjoint(), 1);
        SparseState n = apply_cnot(SparseState::basis(2, k), 0, 1);
        EXPECT_LT(max_diff(dense_of(s), dense_of(n)), 1e-12) << k;
    }
}

TEST(ApplyPauli, Examples) {
    std::mt19937_64 rng(2);
    SparseState psi = random_state(3, rng);
    SparseState id = apply_pauli(psi, BinaryWord(3), BinaryWord(3));
    EXPECT_LT(max_diff(dense_of(id), dense_of(psi)), 1e-15);

    SparseState x = apply_pauli(SparseState(3), BinaryWord::from_string("100"), BinaryWord(3));
    EXPECT_EQ(x.unpack(x.entries()[0].first).to_string(), "100");
}

TEST(ApplyPauli, XAndZAnticommute) {
    SparseState one = SparseState::basis(1, 1);
    SparseState zx = one;
    zx.apply_1q(gates::Z(), 0);
    zx.apply_1q(gates::X(), 0);
    SparseState xz = one;
    xz.apply_1q(gates::X(), 0);
    xz.apply_1q(gates::Z(), 0);
    EXPECT_NEAR(std::abs(zx.amplitude(0) + xz.amplitude(0)), 0, 1e-15);
    EXPECT_NEAR(std::abs(zx.amplitude(0)), 1, 1e-15);
    // apply_pauli applies X first, then Z.
    SparseState p = apply_pauli(one, BinaryWord::from_string("1"), BinaryWord::from_string("1"));
    EXPECT_NEAR(std::abs(p.amplitude(0) - xz.amplitude(0)), 0, 1e-15);
}

TEST(ApplyPauli, MaskLengthMismatchThrows) {
    SparseState s(3);
    EXPECT_THROW(s.apply_pauli(BinaryWord(2), BinaryWord(3)), ParameterError);
}

TEST(Measure, PlusGivesEitherOutcomeWithHalf) {
    std::mt19937_64 rng(4);
    int ones = 0;
    for (int t = 0; t < 400; ++t) {
        SparseState plus = apply_1q(SparseState(1), gates::A(), 0);
        MeasureOutcome m = measure(plus, 0, std::nullopt, rng);
        EXPECT_NEAR(m.probability, 0.5, 1e-12);
        EXPECT_EQ(m.post_state.size(), 1u);
        EXPECT_EQ(m.post_state.entries()[0].first, uint64_t(m.outcome));
        ones += m.outcome;
    }
    EXPECT_GT(ones, 140);
    EXPECT_LT(ones, 260);
}

TEST(Measure, ForcingZeroProbabilityThrows) {
    std::mt19937_64 rng(4);
    EXPECT_THROW(measure(SparseState(1), 0, true, rng), ZeroProbabilityBranchError);
}

TEST(Measure, CatCollapses) {
    std::mt19937_64 rng(6);
    for (bool b : {false, true}) {
        SparseState cat = SparseState::from_entries(3, {{0, 1.0}, {7, 1.0}});
        MeasureOutcome m = measure(cat, 2, b, rng);
        EXPECT_NEAR(m.probability, 0.5, 1e-12);
        EXPECT_EQ(m.post_state.size(), 1u);
        EXPECT_EQ(m.post_state.entries()[0].first, b ? 7u : 0u);
    }
}

TEST(Measure, MeasuredQubitIsClassicalUntilReset) {
    std::mt19937_64 rng(6);
    SparseState s = apply_1q(SparseState(2), gates::A(), 0);
    s.measure(0, std::nullopt, rng);
    EXPECT_TRUE(s.is_measured(0));
    EXPECT_THROW(s.apply_1q(gates::A(), 0), ParameterError);
    EXPECT_THROW(s.apply_cnot(0, 1), ParameterError);
    EXPECT_THROW(s.apply_pauli(1, 0), ParameterError);
    s.reset(0);
    EXPECT_FALSE(s.is_measured(0));
    EXPECT_EQ(s.entries()[0].first, 0u);
    EXPECT_NO_THROW(s.apply_cnot(0, 1));
}

TEST(Measure, BranchProbabilitiesSumToOne) {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 20; ++t) {
        SparseState psi = random_state(4, rng);
        size_t q = t % 4;
        double p0 = 0, p1 = 0;
        try {
            p0 = SparseState(psi).measure_forced(q, false).probability;
        } catch (const ZeroProbabilityBranchError&) {
        }
        try {
            p1 = SparseState(psi).measure_forced(q, true).probability;
        } catch (const ZeroProbabilityBranchError&) {
        }
        EXPECT_NEAR(p0 + p1, 1.0, 1e-12);
        // Dense oracle: probability of bit q being 1.
        Dense v = dense_of(psi);
        double ref = 0;
        for (size_t k = 0; k < v.size(); ++k) {
            if ((k >> q) & 1) ref += std::norm(v[k]);
        }
        EXPECT_NEAR(p1, ref, 1e-12);
    }
}

TEST(Fidelity, Examples) {
    std::mt19937_64 rng(7);
    SparseState psi = random_state(3, rng);
    EXPECT_NEAR(fidelity(psi, psi), 1.0, 1e-12);
    EXPECT_NEAR(fidelity(SparseState::basis(1, 0), SparseState::basis(1, 1)), 0.0, 1e-15);
    EXPECT_NEAR(fidelity(SparseState(1), apply_1q(SparseState(1), gates::A(), 0)), 0.5, 1e-12);
    EXPECT_THROW(fidelity(SparseState(1), SparseState(2)), ParameterError);
}

TEST(Fidelity, SymmetricAndBounded) {
    std::mt19937_64 rng(10);
    for (int t = 0; t < 20; ++t) {
        SparseState a = random_state(3, rng), b = random_state(3, rng);
        double f = fidelity(a, b);
        EXPECT_NEAR(f, fidelity(b, a), 1e-14);
        EXPECT_GE(f, 0.0);
        EXPECT_LE(f, 1.0 + 1e-12);
    }
}

TEST(Property, NormPreservedOverManyRandomGates) {
    std::mt19937_64 rng(12);
    SparseState s = random_state(5, rng);
    const GateTag tags[] = {GateTag::A, GateTag::B, GateTag::C, GateTag::X, GateTag::Z};
    for (int step = 0; step < 10000; ++step) {
        size_t q = rng() % 5, q2 = (q + 1 + rng() % 4) % 5;
        switch (rng() % 3) {
            case 0:
                s.apply_1q(gates::one_qubit(tags[rng() % 5]), q);
                break;
            case 1:
                s.apply_2q_diag((rng() & 1) ? gates::D() : gates::E(), q, q2);
                break;
            default:
                s.apply_cnot(q, q2);
        }
    }
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-10);
}

TEST(Property, SparsityBoundForNonHadamardGates) {
    std::mt19937_64 rng(13);
    SparseState s = SparseState::from_entries(6, {{0, 1.0}, {5, kI}, {42, -1.0}});
    const GateTag tags[] = {GateTag::B, GateTag::C, GateTag::X, GateTag::Z};
    for (int step = 0; step < 2000; ++step) {
        size_t before = s.size();
        size_t q = rng() % 6, q2 = (q + 1 + rng() % 5) % 6;
        switch (rng() % 4) {
            case 0:
                s.apply_1q(gates::one_qubit(tags[rng() % 4]), q);
                break;
            case 1:
                s.apply_2q_diag((rng() & 1) ? gates::D() : gates::E(), q, q2);
                break;
            case 2:
                s.apply_cnot(q, q2);
                break;
            default:
                s.apply_1q(gates::A(), q);
                ASSERT_LE(s.size(), 2 * before);
                continue;
        }
        ASSERT_LE(s.size(), before);
    }
}

TEST(SparseState, DumpIsSortedByBitString) {
    SparseState s = SparseState::from_entries(3, {{1, 1.0}, {6, Complex(0, -1)}});
    EXPECT_EQ(s.dump(),
              "011  0.000000000000  -0.707106781187\n"
              "100  0.707106781187  0.000000000000\n");
}

TEST(SparseState, FromEntriesMergesAndRejectsZero) {
    SparseState s = SparseState::from_entries(2, {{1, 1.0}, {1, 1.0}, {2, 2.0}});
    EXPECT_EQ(s.size(), 2u);
    EXPECT_NEAR(std::abs(s.amplitude(1) - kRt), 0, 1e-12);
    EXPECT_THROW(SparseState::from_entries(2, {{1, 1.0}, {1, -1.0}}), ParameterError);
    EXPECT_THROW(SparseState(65), ParameterError);
}

TEST(SparseState, ProjectPauliAndExpectation) {
    SparseState bell = SparseState::from_entries(2, {{0, 1.0}, {3, 1.0}});
    EXPECT_NEAR(pauli_expectation(bell, 0, 3), 1.0, 1e-12);
    EXPECT_NEAR(pauli_expectation(bell, 3, 0), 1.0, 1e-12);
    SparseState s(2);
    s.apply_1q(gates::A(), 0);
    s.apply_1q(gates::A(), 1);
    EXPECT_NEAR(project_pauli(s, 0, 3, false), 0.5, 1e-12);
    EXPECT_NEAR(fidelity(s, bell), 1.0, 1e-12);
}

TEST(SparseState, RestrictDropsDefiniteQubits) {
    SparseState s = SparseState::from_entries(3, {{0, 1.0}, {1, 1.0}});
    SparseState r = s.restrict_to({0});
    EXPECT_EQ(r.num_qubits(), 1u);
    EXPECT_NEAR(fidelity(r, apply_1q(SparseState(1), gates::A(), 0)), 1.0, 1e-12);
    EXPECT_THROW(SparseState::from_entries(2, {{0, 1.0}, {3, 1.0}}).restrict_to({0}), ParameterError);
}

}  // namespace
}  // namespace ftqc
