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
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ftqc/binary_word.hpp"
#include "ftqc/errors.hpp"
#include "ftqc/gates.hpp"

namespace ftqc {

inline constexpr double kDefaultStateTolerance = 1e-12;

struct MeasureResult {
    bool outcome = false;
    double probability = 0.0;
};

/// Sparse state vector over up to 64 qubits.
///
/// Basis words are packed into 64-bit keys, qubit q being bit q. Entries are
/// kept as a (key, amplitude) list, sorted on demand. Measured qubits become
/// classical: any gate on them throws until `reset` is called.
class SparseState {
   public:
    static constexpr size_t kMaxQubits = 64;
    using Entry = std::pair<uint64_t, Complex>;

    SparseState() = default;

    /// |0...0> on n qubits.
    explicit SparseState(size_t n, double tolerance = kDefaultStateTolerance) : n_(n), tol_(tolerance) {
        check_size(n);
        entries_.push_back({0, 1.0});
    }

    static SparseState basis(size_t n, uint64_t key) {
        SparseState s(n);
        s.entries_[0].first = key & s.mask();
        return s;
    }

    static SparseState basis(const BinaryWord& w) { return basis(w.length(), pack(w)); }

    /// Normalized superposition of the given entries; duplicate keys add.
    static SparseState from_entries(size_t n, std::vector<Entry> entries) {
        SparseState s(n);
        s.entries_ = std::move(entries);
        s.sorted_ = false;
        s.canonicalize();
        if (s.entries_.empty()) throw ParameterError("SparseState::from_entries: zero vector");
        s.normalize();
        return s;
    }

    /// Uniform superposition over `words`.
    static SparseState uniform(size_t n, const std::vector<BinaryWord>& words) {
        std::vector<Entry> e;
        for (const BinaryWord& w : words) e.push_back({pack(w), 1.0});
        return from_entries(n, std::move(e));
    }

    static uint64_t pack(const BinaryWord& w) {
        check_size(w.length());
        return w.low_word();
    }
    BinaryWord unpack(uint64_t key) const { return BinaryWord::from_uint(key, n_); }

    size_t num_qubits() const { return n_; }
    size_t size() const { return entries_.size(); }
    double tolerance() const { return tol_; }
    uint64_t measured_mask() const { return measured_; }
    bool is_measured(size_t q) const { return (measured_ >> q) & 1; }

    const std::vector<Entry>& entries() {
        sort();
        return entries_;
    }

    Complex amplitude(uint64_t key) {
        sort();
        auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                                   [](const Entry& e, uint64_t k) { return e.first < k; });
        return (it != entries_.end() && it->first == key) ? it->second : Complex(0);
    }

    double norm_squared() const {
        double t = 0;
        for (const auto& e : entries_) t += std::norm(e.second);
        return t;
    }

    void normalize() {
        double nrm = std::sqrt(norm_squared());
        if (nrm <= 0) throw ParameterError("SparseState::normalize: zero vector");
        for (auto& e : entries_) e.second /= nrm;
    }

    void apply_1q(const Gate1Q& g, size_t q) {
        check_live(q);
        uint64_t bit = uint64_t{1} << q;
        if (g.is_diagonal()) {
            for (auto& e : entries_) e.second *= (e.first & bit) ? g.m[3] : g.m[0];
            return;
        }
        if (g.is_antidiagonal()) {
            for (auto& e : entries_) {
                e.second *= (e.first & bit) ? g.m[1] : g.m[2];
                e.first ^= bit;
            }
            sorted_ = false;
            return;
        }
        std::vector<Entry> next;
        next.reserve(2 * entries_.size());
        for (const auto& e : entries_) {
            uint64_t k0 = e.first & ~bit;
            uint64_t k1 = e.first | bit;
            bool one = e.first & bit;
            next.push_back({k0, e.second * (one ? g.m[1] : g.m[0])});
            next.push_back({k1, e.second * (one ? g.m[3] : g.m[2])});
        }
        entries_ = std::move(next);
        sorted_ = false;
        canonicalize();
        normalize();
    }

    void apply_1q(GateTag t, size_t q) { apply_1q(gates::one_qubit(t), q); }

    /// Phase chosen by the bits of (q1, q2).
    void apply_2q_diag(const Gate2QDiag& g, size_t q1, size_t q2) {
        check_pair(q1, q2);
        for (auto& e : entries_) {
            size_t idx = 2 * ((e.first >> q1) & 1) + ((e.first >> q2) & 1);
            e.second *= g.phases[idx];
        }
    }

    void apply_cnot(size_t control, size_t target) {
        check_pair(control, target);
        for (auto& e : entries_) {
            if ((e.first >> control) & 1) e.first ^= uint64_t{1} << target;
        }
        sorted_ = false;
    }

    /// Z^z X^x: X on the x positions first, then Z on the z positions.
    void apply_pauli(uint64_t x_mask, uint64_t z_mask) {
        check_live_mask(x_mask | z_mask);
        for (auto& e : entries_) {
            e.first ^= x_mask;
            if (std::popcount(e.first & z_mask) & 1) e.second = -e.second;
        }
        if (x_mask) sorted_ = false;
    }

    void apply_pauli(const BinaryWord& x_mask, const BinaryWord& z_mask) {
        if (x_mask.length() != n_ || z_mask.length() != n_) throw ParameterError("apply_pauli: mask length mismatch");
        apply_pauli(pack(x_mask), pack(z_mask));
    }

    /// Probability that qubit q reads 1.
    double probability_one(size_t q) const {
        double p = 0;
        for (const auto& e : entries_) {
            if ((e.first >> q) & 1) p += std::norm(e.second);
        }
        return p;
    }

    /// Projects qubit q onto `outcome` and renormalizes.
    double project(size_t q, bool outcome) {
        check_index(q);
        double p1 = probability_one(q);
        double p = outcome ? p1 : 1.0 - p1;
        if (p <= tol_) {
            throw ZeroProbabilityBranchError("measure: branch " + std::to_string(outcome) + " on qubit " +
                                             std::to_string(q) + " has probability " + std::to_string(p));
        }
        std::erase_if(entries_, [&](const Entry& e) { return bool((e.first >> q) & 1) != outcome; });
        normalize();
        measured_ |= uint64_t{1} << q;
        return p;
    }

    /// Born-rule measurement of qubit q, or projection onto `forced`.
    template <typename Rng>
    MeasureResult measure(size_t q, std::optional<bool> forced, Rng& rng) {
        check_index(q);
        bool outcome;
        if (forced) {
            outcome = *forced;
        } else {
            double p1 = probability_one(q);
            outcome = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p1;
        }
        double p = project(q, outcome);
        return {outcome, p};
    }

    MeasureResult measure_forced(size_t q, bool outcome) {
        double p = project(q, outcome);
        return {outcome, p};
    }

    /// Returns a measured or otherwise definite qubit to |0> and makes it live again.
    void reset(size_t q) {
        check_index(q);
        uint64_t bit = uint64_t{1} << q;
        if (entries_.empty()) return;
        bool value = entries_[0].first & bit;
        for (const auto& e : entries_) {
            if (bool(e.first & bit) != value) {
                throw ParameterError("reset: qubit " + std::to_string(q) + " is not in a definite state");
            }
        }
        if (value) {
            for (auto& e : entries_) e.first ^= bit;
            sorted_ = false;
        }
        measured_ &= ~bit;
    }

    /// Value of a qubit known to be definite.
    bool definite_value(size_t q) const {
        bool value = (entries_[0].first >> q) & 1;
        for (const auto& e : entries_) {
            if (bool((e.first >> q) & 1) != value) {
                throw ParameterError("definite_value: qubit " + std::to_string(q) + " is in superposition");
            }
        }
        return value;
    }

    /// Drops tiny amplitudes, merges duplicate keys and renormalizes.
    void prune() {
        canonicalize();
        normalize();
    }

    /// this += c * other (no renormalization).
    void add(const SparseState& other, Complex c) {
        if (other.n_ != n_) throw ParameterError("SparseState::add: size mismatch");
        for (const auto& e : other.entries_) entries_.push_back({e.first, c * e.second});
        sorted_ = false;
        canonicalize();
    }

    void scale(Complex c) {
        for (auto& e : entries_) e.second *= c;
    }

    /// <this|other>.
    Complex inner(SparseState& other) {
        if (other.n_ != n_) throw ParameterError("inner: size mismatch");
        sort();
        other.sort();
        Complex acc = 0;
        size_t i = 0, j = 0;
        while (i < entries_.size() && j < other.entries_.size()) {
            if (entries_[i].first < other.entries_[j].first) {
                ++i;
            } else if (entries_[i].first > other.entries_[j].first) {
                ++j;
            } else {
                acc += std::conj(entries_[i].second) * other.entries_[j].second;
                ++i;
                ++j;
            }
        }
        return acc;
    }

    /// One line per basis word: `bits  re  im`, sorted by the bit string.
    std::string dump() {
        sort();
        std::vector<std::pair<std::string, Complex>> rows;
        for (const auto& e : entries_) rows.push_back({unpack(e.first).to_string(), e.second});
        std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        std::string out;
        char buf[96];
        for (const auto& [bits, amp] : rows) {
            std::snprintf(buf, sizeof(buf), "  %.12f  %.12f\n", clean(amp.real()), clean(amp.imag()));
            out += bits;
            out += buf;
        }
        return out;
    }

    /// State on the qubits `keep` (in that order) after dropping the rest.
    /// Dropped qubits must be definite.
    SparseState restrict_to(const std::vector<size_t>& keep) const {
        uint64_t kept_mask = 0;
        for (size_t q : keep) {
            check_index(q);
            kept_mask |= uint64_t{1} << q;
        }
        uint64_t dropped = mask() & ~kept_mask;
        if (!entries_.empty()) {
            uint64_t ref = entries_[0].first & dropped;
            for (const auto& e : entries_) {
                if ((e.first & dropped) != ref) {
                    throw ParameterError("restrict_to: a dropped qubit is not definite");
                }
            }
        }
        std::vector<Entry> out;
        out.reserve(entries_.size());
        for (const auto& e : entries_) {
            uint64_t k = 0;
            for (size_t i = 0; i < keep.size(); ++i) k |= ((e.first >> keep[i]) & 1) << i;
            out.push_back({k, e.second});
        }
        SparseState s(keep.size(), tol_);
        s.entries_ = std::move(out);
        s.sorted_ = false;
        for (size_t i = 0; i < keep.size(); ++i) {
            if (is_measured(keep[i])) s.measured_ |= uint64_t{1} << i;
        }
        return s;
    }

    /// a (qubits 0..a.n-1) tensor b (the following qubits).
    static SparseState tensor(const SparseState& a, const SparseState& b) {
        SparseState s(a.n_ + b.n_, a.tol_);
        s.entries_.clear();
        s.entries_.reserve(a.entries_.size() * b.entries_.size());
        for (const auto& ea : a.entries_) {
            for (const auto& eb : b.entries_) s.entries_.push_back({ea.first | (eb.first << a.n_), ea.second * eb.second});
        }
        s.sorted_ = false;
        s.measured_ = a.measured_ | (b.measured_ << a.n_);
        return s;
    }

    /// Adds `extra` qubits in |0> after the existing ones.
    void extend(size_t extra) {
        check_size(n_ + extra);
        n_ += extra;
    }

    void sort() {
        if (sorted_) return;
        std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
        sorted_ = true;
    }

   private:
    static void check_size(size_t n) {
        if (n == 0 || n > kMaxQubits) {
            throw ParameterError("SparseState: qubit count " + std::to_string(n) + " outside [1, 64]");
        }
    }
    static double clean(double v) { return std::abs(v) < 5e-13 ? 0.0 : v; }

    uint64_t mask() const { return n_ == 64 ? ~uint64_t{0} : (uint64_t{1} << n_) - 1; }

    void check_index(size_t q) const {
        if (q >= n_) throw ParameterError("qubit index " + std::to_string(q) + " out of range");
    }
    void check_live(size_t q) const {
        check_index(q);
        if (is_measured(q)) throw ParameterError("qubit " + std::to_string(q) + " was measured and not reset");
    }
    void check_live_mask(uint64_t m) const {
        if (m & ~mask()) throw ParameterError("Pauli mask out of range");
        if (m & measured_) throw ParameterError("Pauli on a measured qubit");
    }
    void check_pair(size_t a, size_t b) const {
        check_live(a);
        check_live(b);
        if (a == b) throw ParameterError("two-qubit gate on identical qubits");
    }

    void canonicalize() {
        sort();
        std::vector<Entry> merged;
        merged.reserve(entries_.size());
        for (const auto& e : entries_) {
            if (!merged.empty() && merged.back().first == e.first) {
                merged.back().second += e.second;
            } else {
                merged.push_back(e);
            }
        }
        std::erase_if(merged, [&](const Entry& e) { return std::abs(e.second) < tol_; });
        entries_ = std::move(merged);
    }

    size_t n_ = 0;
    double tol_ = kDefaultStateTolerance;
    std::vector<Entry> entries_;
    bool sorted_ = true;
    uint64_t measured_ = 0;
};

inline SparseState apply_1q(SparseState s, const Gate1Q& g, size_t q) {
    s.apply_1q(g, q);
    return s;
}

inline SparseState apply_2q_diag(SparseState s, const Gate2QDiag& g, size_t q1, size_t q2) {
    s.apply_2q_diag(g, q1, q2);
    return s;
}

inline SparseState apply_cnot(SparseState s, size_t control, size_t target) {
    s.apply_cnot(control, target);
    return s;
}

inline SparseState apply_pauli(SparseState s, const BinaryWord& x_mask, const BinaryWord& z_mask) {
    s.apply_pauli(x_mask, z_mask);
    return s;
}

struct MeasureOutcome {
    bool outcome = false;
    double probability = 0.0;
    SparseState post_state;
};

template <typename Rng>
MeasureOutcome measure(SparseState s, size_t q, std::optional<bool> forced, Rng& rng) {
    MeasureResult r = s.measure(q, forced, rng);
    return {r.outcome, r.probability, std::move(s)};
}

/// <psi| P |psi> for the Hermitian Pauli i^{|x.z|} Z^z X^x.
inline double pauli_expectation(const SparseState& psi, uint64_t x_mask, uint64_t z_mask) {
    SparseState a = psi;
    SparseState b = psi;
    b.apply_pauli(x_mask, z_mask);
    Complex phase = std::pow(Complex(0, 1), std::popcount(x_mask & z_mask) % 4);
    return (phase * a.inner(b)).real();
}

/// Projects onto the `sign` eigenspace of the Hermitian Pauli i^{|x.z|} Z^z X^x
/// and renormalizes. Returns the branch probability.
inline double project_pauli(SparseState& psi, uint64_t x_mask, uint64_t z_mask, bool negative) {
    double expect = pauli_expectation(psi, x_mask, z_mask);
    double p = negative ? (1.0 - expect) / 2.0 : (1.0 + expect) / 2.0;
    if (p <= psi.tolerance()) {
        throw ZeroProbabilityBranchError("project_pauli: branch probability " + std::to_string(p));
    }
    SparseState moved = psi;
    moved.apply_pauli(x_mask, z_mask);
    Complex phase = std::pow(Complex(0, 1), std::popcount(x_mask & z_mask) % 4);
    psi.add(moved, negative ? -phase : phase);
    psi.normalize();
    return p;
}

/// |<a|b>|^2.
inline double fidelity(SparseState a, SparseState b) {
    if (a.num_qubits() != b.num_qubits()) throw ParameterError("fidelity: size mismatch");
    return std::norm(a.inner(b));
}

}  // namespace ftqc
