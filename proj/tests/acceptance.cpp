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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ftqc/ftqc.hpp"

namespace {

using namespace ftqc;

using Matrix = std::vector<std::vector<Complex>>;

size_t workers() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string fmt(double v, int digits = 6) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

// ---------------------------------------------------------------- codes oracle

/// Codewords of RM(1, m) as bitmasks over the 2^m points, built from the
/// affine functions directly.
std::vector<uint32_t> rm1_words(int m) {
    uint32_t n = 1u << m;
    std::vector<uint32_t> gens{(n == 32 ? 0xffffffffu : (1u << n) - 1)};
    for (int i = 0; i < m; ++i) {
        uint32_t g = 0;
        for (uint32_t x = 0; x < n; ++x) {
            if ((x >> i) & 1) g |= 1u << x;
        }
        gens.push_back(g);
    }
    std::vector<uint32_t> words;
    for (uint32_t c = 0; c < (1u << gens.size()); ++c) {
        uint32_t w = 0;
        for (size_t j = 0; j < gens.size(); ++j) {
            if ((c >> j) & 1) w ^= gens[j];
        }
        words.push_back(w);
    }
    return words;
}

std::map<int, int> weights_of(const std::vector<uint32_t>& words) {
    std::map<int, int> d;
    for (uint32_t w : words) ++d[std::popcount(w)];
    return d;
}

std::string dist_text(const std::map<int, int>& d) {
    std::string s = "{";
    for (const auto& [w, c] : d) s += (s.size() > 1 ? ", " : "") + std::to_string(w) + ":" + std::to_string(c);
    return s + "}";
}

Outcome code_lemmas() {
    std::vector<uint32_t> rm13 = rm1_words(3), rm14 = rm1_words(4);
    auto d14 = weights_of(rm14);
    bool ok = d14 == std::map<int, int>{{0, 1}, {8, 30}, {16, 1}};

    int dual_d = 1 << 20;
    for (uint32_t v = 1; v < (1u << 16); ++v) {
        bool orth = std::all_of(rm14.begin(), rm14.end(), [&](uint32_t w) { return std::popcount(v & w) % 2 == 0; });
        if (orth) dual_d = std::min(dual_d, std::popcount(v));
    }
    ok = ok && dual_d == 4;

    bool div4 = true, self_dual = true;
    for (uint32_t a : rm13) {
        div4 = div4 && std::popcount(a) % 4 == 0;
        for (uint32_t b : rm13) self_dual = self_dual && std::popcount(a & b) % 2 == 0;
    }
    // Dimension 4 of length 8 plus self-orthogonality gives self-duality.
    ok = ok && div4 && self_dual && rm13.size() == 16;

    bool punct = true;
    for (uint32_t w : rm14) {
        int r = std::popcount(w >> 1) % 8;
        punct = punct && (r == 0 || r == 7);
    }
    ok = ok && punct;

    auto lib = weight_distribution(rm_code(1, 4));
    bool agree = lib == std::map<size_t, size_t>{{0, 1}, {8, 30}, {16, 1}} &&
                 min_distance(dual(rm_code(1, 4))) == 4 && dual(rm_code(1, 3)).same_row_space(rm_code(1, 3));
    ok = ok && agree;
    return {ok, "rm(1,4) " + dist_text(d14) + ", dual d = " + std::to_string(dual_d) + ", rm(1,3) div4 " +
                    (div4 ? "yes" : "no") + ", self-dual " + (self_dual ? "yes" : "no") +
                    ", punctured weights in {0,7} mod 8 " + (punct ? "yes" : "no") + ", library agrees " +
                    (agree ? "yes" : "no")};
}

Outcome overlap_lemma() {
    std::vector<uint32_t> punct;
    for (uint32_t w : rm1_words(4)) punct.push_back(w >> 1);
    size_t pairs = 0, bad = 0, oddodd_three = 0;
    for (uint32_t x : punct) {
        for (uint32_t y : punct) {
            ++pairs;
            int o = std::popcount(x & y) % 4;
            bool both_odd = std::popcount(x) % 2 == 1 && std::popcount(y) % 2 == 1;
            if (!(o == 0 || o == 3) || (o == 3) != both_odd) ++bad;
            if (o == 3) ++oddodd_three;
        }
    }
    OverlapReport lib = overlap_lemma_check(even_split(puncture(rm_code(1, 4), 0)));
    bool ok = pairs == 1024 && bad == 0 && oddodd_three > 0 && lib.pass && lib.pairs_checked == 1024;
    return {ok, std::to_string(pairs) + " pairs, " + std::to_string(bad) + " counterexamples, " +
                    std::to_string(oddodd_three) + " odd/odd pairs with overlap 3 mod 4, library " +
                    (lib.pass ? "agrees" : "disagrees")};
}

// ---------------------------------------------------------------- gates

Outcome gate_tables() {
    bool ok = true;
    std::string detail;
    for (const PuncturedCssCode& code : {build_steane(), build_rm15()}) {
        GateTableReport r = verify_gate_table(code);
        double worst = 1.0;
        size_t states = 0;
        for (const auto& e : r.entries) {
            worst = std::min(worst, e.min_fidelity);
            states += e.states_tested;
        }
        ok = ok && r.pass && worst >= 1 - 1e-10;
        detail += code.name + ": " + std::to_string(r.entries.size()) + " entries, " + std::to_string(states) +
                  " state checks, min fidelity " + fmt(worst, 15) + "; ";
    }
    PuncturedCssCode rm15 = build_rm15();
    bool d_is_e = logical_action(rm15, GateTag::D) == GateTag::E;
    SparseState one = encode(rm15, 0, 1);
    SparseState out = transversal_apply(rm15, GateTag::D, {one, one});
    Complex ov = SparseState::tensor(one, one).inner(out);
    bool phase = std::abs(ov - Complex(0, -1)) <= 1e-10;
    ok = ok && d_is_e && phase;
    detail += "rm15 D -> logical E, |<11|D|11> + i| = " + fmt(std::abs(ov - Complex(0, -1)), 3);
    return {ok, detail};
}

/// Dense k-qubit operators with qubit 0 as the most significant bit.
Matrix identity(size_t k) {
    size_t dim = size_t{1} << k;
    Matrix m(dim, std::vector<Complex>(dim, 0.0));
    for (size_t i = 0; i < dim; ++i) m[i][i] = 1;
    return m;
}

Matrix mul(const Matrix& a, const Matrix& b) {
    size_t dim = a.size();
    Matrix m(dim, std::vector<Complex>(dim, 0.0));
    for (size_t i = 0; i < dim; ++i) {
        for (size_t l = 0; l < dim; ++l) {
            if (a[i][l] == Complex(0)) continue;
            for (size_t j = 0; j < dim; ++j) m[i][j] += a[i][l] * b[l][j];
        }
    }
    return m;
}

bool bit(size_t idx, size_t k, size_t q) { return (idx >> (k - 1 - q)) & 1; }

Matrix hadamard_on(size_t k, size_t q) {
    const double s = 1.0 / std::sqrt(2.0);
    Matrix m(size_t{1} << k, std::vector<Complex>(size_t{1} << k, 0.0));
    for (size_t i = 0; i < m.size(); ++i) {
        size_t flip = i ^ (size_t{1} << (k - 1 - q));
        m[i][i] = bit(i, k, q) ? -s : s;
        m[i][flip] = s;
    }
    return m;
}

Matrix phase_on(size_t k, size_t a, size_t b, Complex ph) {
    Matrix m = identity(k);
    for (size_t i = 0; i < m.size(); ++i) {
        if (bit(i, k, a) && bit(i, k, b)) m[i][i] = ph;
    }
    return m;
}

Matrix cnot_on(size_t k, size_t c, size_t t) {
    Matrix m(size_t{1} << k, std::vector<Complex>(size_t{1} << k, 0.0));
    for (size_t i = 0; i < m.size(); ++i) m[bit(i, k, c) ? i ^ (size_t{1} << (k - 1 - t)) : i][i] = 1;
    return m;
}

/// Product of gates applied left to right.
Matrix circuit(size_t k, const std::vector<Matrix>& gates_in_order) {
    Matrix m = identity(k);
    for (const auto& g : gates_in_order) m = mul(g, m);
    return m;
}

Outcome gate_identities() {
    const Complex i(0, 1);
    double worst = 0;
    auto check = [&](const Matrix& a, const Matrix& b) { worst = std::max(worst, max_matrix_error(a, b)); };

    Matrix cz = phase_on(2, 0, 1, -1);
    Matrix d2 = circuit(2, {phase_on(2, 0, 1, i), phase_on(2, 0, 1, i)});
    check(d2, cz);
    check(circuit_matrix(2,
                         [](SparseState& s) {
                             s.apply_2q_diag(gates::D(), 0, 1);
                             s.apply_2q_diag(gates::D(), 0, 1);
                         }),
          cz);

    Matrix n = cnot_on(2, 0, 1);
    check(circuit(2, {hadamard_on(2, 1), d2, hadamard_on(2, 1)}), n);
    check(circuit_matrix(2,
                         [](SparseState& s) {
                             s.apply_1q(gates::A(), 1);
                             s.apply_2q_diag(gates::D(), 0, 1);
                             s.apply_2q_diag(gates::D(), 0, 1);
                             s.apply_1q(gates::A(), 1);
                         }),
          n);

    Matrix ccz = identity(3);
    ccz[7][7] = -1;
    Matrix ccz_dense = circuit(3, {phase_on(3, 1, 2, -i), cnot_on(3, 0, 1), phase_on(3, 1, 2, i), cnot_on(3, 0, 1),
                                   phase_on(3, 0, 2, -i)});
    check(ccz_dense, ccz);
    check(circuit_matrix(3, [](SparseState& s) { apply_ccz(s, 0, 1, 2); }), ccz);

    Matrix toffoli = identity(3);
    toffoli[6][6] = toffoli[7][7] = 0;
    toffoli[6][7] = toffoli[7][6] = 1;
    check(circuit(3, {hadamard_on(3, 2), ccz_dense, hadamard_on(3, 2)}), toffoli);
    check(circuit_matrix(3, [](SparseState& s) { apply_toffoli(s, 0, 1, 2); }), toffoli);

    IdentityReport lib = gate_identities_check();
    bool ok = worst <= 1e-12 && lib.pass;
    return {ok, "D^2 = CZ, A D^2 A = N, two-controlled Z from 2 N + 2 E + 1 D, Toffoli: max error " + fmt(worst, 3)};
}

Outcome a_protocol() {
    std::mt19937_64 rng(2026);
    std::normal_distribution<double> g;
    double raw = 1.0;
    for (int t = 0; t < 20; ++t) {
        Complex a(g(rng), g(rng)), b(g(rng), g(rng));
        double nrm = std::sqrt(std::norm(a) + std::norm(b));
        SparseState psi = SparseState::from_entries(1, {{0, a / nrm}, {1, b / nrm}});
        SparseState want = apply_1q(psi, gates::A(), 0);
        for (bool minus : {false, true}) {
            SparseState s = psi;
            AProtocolRecord rec = a_gate_protocol_raw(s, 0, minus, rng);
            raw = std::min(raw, rec.minus == minus ? fidelity(s.restrict_to({0}), want) : 0.0);
        }
    }
    std::string detail = "unencoded min fidelity " + fmt(raw, 15);
    bool ok = raw >= 1 - 1e-10;
    for (const PuncturedCssCode& code : {build_steane(), build_rm15()}) {
        double enc = 1.0;
        std::vector<size_t> keep(code.n);
        for (size_t q = 0; q < code.n; ++q) keep[q] = q;
        for (const auto& amps : logical_test_states(1)) {
            const double s = 1.0 / std::sqrt(2.0);
            SparseState want = encode(code, s * (amps[0] + amps[1]), s * (amps[0] - amps[1]));
            for (bool minus : {false, true}) {
                SparseState st = encode(code, amps[0], amps[1]);
                AProtocolRecord rec = a_gate_protocol(code, st, 0, minus, rng);
                enc = std::min(enc, rec.minus == minus ? fidelity(st.restrict_to(keep), want) : 0.0);
            }
        }
        ok = ok && enc >= 1 - 1e-10;
        detail += ", " + code.name + " " + fmt(enc, 15);
    }
    return {ok, detail};
}

// ---------------------------------------------------------------- fault tolerance

Outcome single_fault_certification() {
    auto steane = make_context(build_steane());
    EnumerationOptions opt;
    opt.workers = workers();
    std::vector<std::pair<std::string, Gadget>> gadgets{{"recover", make_recover_gadget(steane)},
                                                        {"cat(4)", make_cat_gadget(4)},
                                                        {"cat(8)", make_cat_gadget(8)},
                                                        {"plus", make_plus_gadget(steane)},
                                                        {"staged-d", make_staged_d_gadget(steane)}};
    bool ok = true;
    std::string detail;
    for (const auto& [name, g] : gadgets) {
        FaultReport rep = enumerate_faults(g, opt);
        ok = ok && rep.failures == 0 && rep.combinations > 0;
        detail += (detail.empty() ? "" : ", ") + name + " " + std::to_string(rep.failures) + "/" +
                  std::to_string(rep.combinations);
    }
    return {ok, "failures/faults: " + detail + " (cat verdict: X weight above 1 counts as failure)"};
}

Outcome cross_validation() {
    auto steane = make_context(build_steane());
    std::vector<std::pair<std::string, Gadget>> gadgets{{"recover", make_recover_gadget(steane)},
                                                        {"memory", make_memory_gadget(steane)},
                                                        {"plus", make_plus_gadget(steane)},
                                                        {"zero", make_zero_gadget(steane)},
                                                        {"cat(4)", make_cat_gadget(4)}};
    bool ok = true;
    size_t compared = 0, mismatches = 0;
    for (const auto& [name, g] : gadgets) {
        std::vector<std::vector<ForcedFault>> sets;
        for (const ForcedFault& f : single_faults(g.circuit)) sets.push_back({f});
        auto pairs = sample_pairs(g.circuit, 2000, 17);
        sets.insert(sets.end(), pairs.begin(), pairs.end());
        CrossValidation cv = cross_validate(g, sets, workers());
        compared += cv.compared;
        mismatches += cv.verdict_mismatches;
    }
    ok = mismatches == 0 && compared > 0;
    return {ok, std::to_string(compared) + " fault sets (all single faults plus 2000 sampled pairs per gadget), " +
                    std::to_string(mismatches) + " verdict mismatches"};
}

// ---------------------------------------------------------------- Monte Carlo

struct Calibration {
    AlphaFit fit;
    bool valid = false;
};

Outcome quadratic_suppression(Calibration& cal) {
    auto ctx = make_context(build_steane());
    Gadget g = make_memory_gadget(ctx);
    SamplingPlan plan;
    plan.target_failures = 20000;
    plan.max_trials = uint64_t{1} << 27;
    plan.workers = workers();
    auto pts = sweep(g, geometric_grid(1e-3, 1e-2, 6), 1, plan);
    AlphaFit f = fit_alpha(pts);
    cal = {f, true};

    double p_lo = f.pseudo_threshold / 3, p_hi = f.pseudo_threshold * 3;
    SamplingPlan probe = plan;
    probe.target_failures = 400;
    RateEstimate lo = estimate_rate(g, ErrorModel::uniform(p_lo), stream_seed(1, 77), probe);
    RateEstimate hi = estimate_rate(g, ErrorModel::uniform(p_hi), stream_seed(1, 78), probe);
    bool below = lo.ci_high < p_lo, above = hi.ci_low > p_hi;

    bool slope_ok = f.slope >= 1.8 && f.slope <= 2.2;
    bool ok = slope_ok && !f.no_gain && below && above;
    return {ok, "slope " + fmt(f.slope, 4) + " +- " + fmt(f.slope_stderr, 2) + " (need [1.8, 2.2]), alpha " +
                    fmt(f.alpha) + " [" + fmt(f.alpha_ci_low) + ", " + fmt(f.alpha_ci_high) + "], p* " +
                    fmt(f.pseudo_threshold) + " [" + fmt(f.pseudo_threshold_ci_low) + ", " +
                    fmt(f.pseudo_threshold_ci_high) + "], rate(p*/3) " + fmt(lo.rate) + " " + (below ? "<" : ">=") +
                    " " + fmt(p_lo) + ", rate(3p*) " + fmt(hi.rate) + " " + (above ? ">" : "<=") + " " +
                    fmt(p_hi)};
}

Outcome concatenation_consistency(const Calibration& cal) {
    if (!cal.valid) return {false, "no level-1 calibration"};
    double alpha = cal.fit.alpha;
    double p = 0.3 / alpha;
    auto ctx = make_context(build_steane());
    SamplingPlan plan;
    plan.target_failures = 5000;
    plan.max_trials = uint64_t{1} << 27;
    plan.workers = workers();
    RateEstimate l1 = estimate_rate(make_memory_gadget(ctx), ErrorModel::uniform(p), stream_seed(2, 1), plan);
    RateEstimate l2 = estimate_rate(make_level2_memory_gadget(ctx), ErrorModel::uniform(p), 3000000,
                                    stream_seed(2, 2), workers());
    double predicted = alpha * l1.rate * l1.rate;
    double ratio = predicted > 0 ? l2.rate / predicted : 0.0;
    bool ok = l2.failures > 0 && ratio >= 1.0 / 3 && ratio <= 3.0;
    return {ok, "p " + fmt(p) + " (alpha p = 0.3), level-1 " + fmt(l1.rate) + ", level-2 " + fmt(l2.rate) + " [" +
                    fmt(l2.ci_low) + ", " + fmt(l2.ci_high) + "] from " + std::to_string(l2.trials) +
                    " trials, alpha (level-1)^2 " + fmt(predicted) + ", ratio " + fmt(ratio, 4) +
                    " (need [1/3, 3])"};
}

Outcome ccp_bound() {
    auto ctx = make_context(build_steane());
    const size_t r = 4, trials = 200000;
    ErrorModel m{1e-4, 1e-4, 1e-4, 1e-4, 0.01};
    RateEstimate rate = ccp_simulate({ctx, r, 1, 1}, m, trials, 10, workers());
    RateEstimate e_c = estimate_rate(make_memory_gadget(ctx, 1), m, trials, stream_seed(10, 1), workers());
    RateEstimate e_d = ccp_simulate({ctx, 1, 0, r}, m, trials, stream_seed(10, 2), workers());
    if (e_c.failures == 0 || e_d.failures == 0) return {false, "no failures observed for e_c or e_d"};
    BoundCheck b = ccp_error_bound_check(e_d.rate, e_c.rate, r);
    bool ok = b.applicable && rate.ci_low <= b.bound;
    return {ok, "r 4, h 1, p 1e-4, p_wait 0.01: e_c " + fmt(e_c.rate) + ", e_d " + fmt(e_d.rate) + ", e_d/e_c " +
                    fmt(e_d.rate / e_c.rate, 4) + " (r+1 = 5), final " + fmt(rate.rate) + " [" + fmt(rate.ci_low) +
                    ", " + fmt(rate.ci_high) + "], bound " + fmt(b.bound)};
}

// ---------------------------------------------------------------- overhead

Outcome overhead_formulas() {
    struct Case {
        size_t l, r, h;
        double qubits, layers, recoveries;
    };
    // Hand-computed: R(h) = (r - 1) + r l R(h - 1), R(0) = 0.
    const Case cases[] = {{7, 2, 2, 49, 3, 15}, {15, 3, 2, 225, 8, 92}, {7, 4, 1, 7, 3, 3}};
    bool ok = true;
    for (const auto& c : cases) {
        Overhead o = overhead(c.l, c.r, c.h);
        ok = ok && o.qubits == c.qubits && o.recovery_layers == c.layers && o.recoveries == c.recoveries;
    }
    ok = ok && overhead(7, 1, 2, 2.0, 1.0).operations == 9604.0;

    struct HCase {
        double n, eps, alpha, p;
        size_t h;
    };
    // ceil(log2(6)) = 3, ceil(log2(12)) = 4, ceil(log2(log2(1000))) = 4.
    const HCase hs[] = {{1e6, 1.0, 1000, 1e-4, 3}, {1e6, 1e-6, 1000, 1e-4, 4}, {1e3, 1.0, 5000, 1e-4, 4}};
    std::string got;
    for (const auto& c : hs) {
        size_t h = required_h(c.n, c.eps, c.alpha, c.p);
        ok = ok && h == c.h;
        got += (got.empty() ? "" : " ") + std::to_string(h);
    }
    return {ok, "qubits 49/225/7, recovery layers 3/8/3, recoveries 15/92/3, required_h " + got + " (want 3 4 4)"};
}

}  // namespace

int main() {
    Calibration cal;
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"code lemmas", code_lemmas},
        {"overlap lemma", overlap_lemma},
        {"gate-table certification", gate_tables},
        {"gate identities", gate_identities},
        {"A protocol", a_protocol},
        {"single-fault certification", single_fault_certification},
        {"frame/exact cross-validation", cross_validation},
        {"quadratic suppression", [&] { return quadratic_suppression(cal); }},
        {"concatenation consistency", [&] { return concatenation_consistency(cal); }},
        {"CCP bound", ccp_bound},
        {"overhead formulas", overhead_formulas},
    };
    size_t failed = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failed;
        std::printf("%s  %2zu %s  %s  (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
