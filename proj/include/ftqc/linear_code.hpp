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
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ftqc/binary_word.hpp"
#include "ftqc/errors.hpp"

namespace ftqc {

/// Largest dimension accepted by exhaustive codeword counting.
inline constexpr size_t kMaxEnumerationDimension = 24;
/// Largest dimension for which codewords are materialized into a list.
inline constexpr size_t kMaxListDimension = 20;

namespace gf2 {

/// Fully reduced row echelon form.
///
/// Row i has its leading one at `pivots[i]`, pivots are increasing, and every
/// other row is zero in each pivot column.
struct Echelon {
    std::vector<BinaryWord> rows;
    std::vector<size_t> pivots;
};

inline Echelon rref(std::vector<BinaryWord> rows, size_t n) {
    Echelon out;
    size_t rank = 0;
    for (size_t col = 0; col < n && rank < rows.size(); ++col) {
        size_t sel = rank;
        while (sel < rows.size() && !rows[sel].get(col)) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[rank], rows[sel]);
        for (size_t i = 0; i < rows.size(); ++i) {
            if (i != rank && rows[i].get(col)) rows[i] ^= rows[rank];
        }
        out.pivots.push_back(col);
        ++rank;
    }
    rows.resize(rank);
    out.rows = std::move(rows);
    return out;
}

inline size_t rank(const std::vector<BinaryWord>& rows, size_t n) { return rref(rows, n).rows.size(); }

/// Reduces `v` against an echelon form. The result is zero exactly when `v`
/// lies in the row space, and is otherwise the smallest element (in
/// BinaryWord order) of the coset v + rowspace.
inline BinaryWord reduce(const Echelon& e, BinaryWord v) {
    for (size_t i = 0; i < e.rows.size(); ++i) {
        if (v.get(e.pivots[i])) v ^= e.rows[i];
    }
    return v;
}

/// Basis of {v : <v, row> = 0 for every row}.
inline std::vector<BinaryWord> null_space(const std::vector<BinaryWord>& rows, size_t n) {
    Echelon e = rref(rows, n);
    std::vector<bool> is_pivot(n, false);
    for (size_t p : e.pivots) is_pivot[p] = true;
    std::vector<BinaryWord> basis;
    for (size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        BinaryWord v(n);
        v.set(f, true);
        for (size_t i = 0; i < e.rows.size(); ++i) {
            if (e.rows[i].get(f)) v.set(e.pivots[i], true);
        }
        basis.push_back(v);
    }
    return basis;
}

/// Keeps the rows that are independent of the rows before them.
inline std::vector<BinaryWord> independent_subset(const std::vector<BinaryWord>& rows, size_t n) {
    std::vector<BinaryWord> kept;
    Echelon e;
    for (const BinaryWord& r : rows) {
        BinaryWord red = reduce(e, r);
        if (red.is_zero()) continue;
        kept.push_back(r);
        std::vector<BinaryWord> basis = e.rows;
        basis.push_back(red);
        e = rref(std::move(basis), n);
    }
    return kept;
}

}  // namespace gf2

/// Binary linear code given by a generator matrix; the check matrix is derived.
class LinearCode {
   public:
    LinearCode() = default;

    /// Code spanned by `rows`. Dependent rows are dropped, the rest are kept
    /// in their given order as the generator.
    LinearCode(size_t n, const std::vector<BinaryWord>& rows) : n_(n) {
        for (const BinaryWord& r : rows) {
            if (r.length() != n) {
                throw ParameterError("LinearCode: row length " + std::to_string(r.length()) +
                                     " does not match code length " + std::to_string(n));
            }
        }
        generator_ = gf2::independent_subset(rows, n);
        echelon_ = gf2::rref(generator_, n);
        check_ = gf2::null_space(generator_, n);
    }

    size_t length() const { return n_; }
    size_t dimension() const { return generator_.size(); }
    const std::vector<BinaryWord>& generator() const { return generator_; }
    const std::vector<BinaryWord>& check() const { return check_; }
    const gf2::Echelon& echelon() const { return echelon_; }

    bool contains(const BinaryWord& w) const {
        if (w.length() != n_) return false;
        return gf2::reduce(echelon_, w).is_zero();
    }

    /// Sum of the generator rows selected by the bits of `message`.
    BinaryWord encode(uint64_t message) const {
        BinaryWord w(n_);
        for (size_t i = 0; i < generator_.size() && message; ++i, message >>= 1) {
            if (message & 1) w ^= generator_[i];
        }
        return w;
    }

    bool same_row_space(const LinearCode& other) const {
        return n_ == other.n_ && echelon_.rows == other.echelon_.rows;
    }

    /// All 2^k codewords, in Gray-code order starting from zero.
    std::vector<BinaryWord> codewords() const {
        if (dimension() > kMaxListDimension) {
            throw EnumerationLimitError("codewords: dimension " + std::to_string(dimension()) + " exceeds " +
                                        std::to_string(kMaxListDimension));
        }
        std::vector<BinaryWord> out;
        out.reserve(size_t{1} << dimension());
        for_each_codeword([&](const BinaryWord& w) { out.push_back(w); });
        return out;
    }

    /// Calls `f` on every codeword (Gray-code walk). Dimension must be at
    /// most kMaxEnumerationDimension.
    template <typename F>
    void for_each_codeword(F&& f) const {
        size_t k = dimension();
        if (k > kMaxEnumerationDimension) {
            throw EnumerationLimitError("codeword enumeration: dimension " + std::to_string(k) + " exceeds " +
                                        std::to_string(kMaxEnumerationDimension));
        }
        BinaryWord w(n_);
        f(w);
        uint64_t total = uint64_t{1} << k;
        for (uint64_t i = 1; i < total; ++i) {
            w ^= generator_[static_cast<size_t>(std::countr_zero(i))];
            f(w);
        }
    }

   private:
    size_t n_ = 0;
    std::vector<BinaryWord> generator_;
    gf2::Echelon echelon_;
    std::vector<BinaryWord> check_;
};

/// Even-weight subcode of a code together with one odd-weight codeword.
struct CosetPair {
    LinearCode even_part;
    BinaryWord odd_representative;
    LinearCode parent;

    bool is_odd(const BinaryWord& w) const { return !even_part.contains(w); }
};

/// Reed-Muller code RM(r, m). Position j is the point of F_2^m whose
/// coordinate t is bit t of j. Rows are monomials ordered by degree, then by
/// variable set.
inline LinearCode rm_code(int r, int m) {
    if (m < 0 || m > 6 || r < 0 || r > m) {
        throw ParameterError("rm_code: need 0 <= r <= m <= 6, got r=" + std::to_string(r) + " m=" + std::to_string(m));
    }
    size_t n = size_t{1} << m;
    std::vector<uint32_t> monomials;
    for (uint32_t s = 0; s < (1u << m); ++s) {
        if (std::popcount(s) <= r) monomials.push_back(s);
    }
    std::stable_sort(monomials.begin(), monomials.end(),
                     [](uint32_t a, uint32_t b) { return std::popcount(a) < std::popcount(b); });
    std::vector<BinaryWord> rows;
    for (uint32_t s : monomials) {
        BinaryWord row(n);
        for (size_t j = 0; j < n; ++j) {
            if ((static_cast<uint32_t>(j) & s) == s) row.set(j, true);
        }
        rows.push_back(row);
    }
    return LinearCode(n, rows);
}

/// Repetition code of length n.
inline LinearCode repetition_code(size_t n) { return LinearCode(n, {BinaryWord::ones(n)}); }

/// The whole space F_2^n.
inline LinearCode full_code(size_t n) {
    std::vector<BinaryWord> rows;
    for (size_t i = 0; i < n; ++i) rows.push_back(BinaryWord::unit(n, i));
    return LinearCode(n, rows);
}

inline LinearCode dual(const LinearCode& code) { return LinearCode(code.length(), code.check()); }

inline LinearCode puncture(const LinearCode& code, size_t position = 0) {
    if (position >= code.length()) {
        throw ParameterError("puncture: position " + std::to_string(position) + " out of range for length " +
                             std::to_string(code.length()));
    }
    std::vector<BinaryWord> rows;
    for (const BinaryWord& g : code.generator()) rows.push_back(g.erased(position));
    return LinearCode(code.length() - 1, rows);
}

/// Splits a code into its even subcode and the odd coset. The representative
/// is the smallest odd codeword in BinaryWord order.
inline CosetPair even_split(const LinearCode& code) {
    const auto& gen = code.generator();
    auto odd_it = std::find_if(gen.begin(), gen.end(), [](const BinaryWord& g) { return g.weight() & 1; });
    if (odd_it == gen.end()) {
        throw NoOddCosetError("even_split: code has no odd-weight codeword");
    }
    const BinaryWord g0 = *odd_it;
    std::vector<BinaryWord> even_rows;
    for (auto it = gen.begin(); it != gen.end(); ++it) {
        if (it == odd_it) continue;
        even_rows.push_back((it->weight() & 1) ? (*it ^ g0) : *it);
    }
    CosetPair out;
    out.even_part = LinearCode(code.length(), even_rows);
    out.odd_representative = gf2::reduce(out.even_part.echelon(), g0);
    out.parent = code;
    return out;
}

/// Number of codewords of each weight.
inline std::map<size_t, size_t> weight_distribution(const LinearCode& code) {
    std::vector<size_t> counts(code.length() + 1, 0);
    code.for_each_codeword([&](const BinaryWord& w) { ++counts[w.weight()]; });
    std::map<size_t, size_t> out;
    for (size_t i = 0; i < counts.size(); ++i) {
        if (counts[i]) out[i] = counts[i];
    }
    return out;
}

/// Smallest nonzero codeword weight. A zero-dimensional code reports its length.
inline size_t min_distance(const LinearCode& code) {
    if (code.dimension() == 0) return code.length();
    size_t best = code.length();
    bool first = true;
    code.for_each_codeword([&](const BinaryWord& w) {
        if (first) {
            first = false;
            return;
        }
        best = std::min(best, w.weight());
    });
    return best;
}

struct OverlapViolation {
    BinaryWord x;
    BinaryWord y;
    size_t overlap = 0;
};

struct OverlapReport {
    bool pass = true;
    size_t pairs_checked = 0;
    size_t even_even_pairs = 0;
    size_t even_odd_pairs = 0;
    size_t odd_odd_pairs = 0;
    std::vector<OverlapViolation> counterexamples;
};

/// Checks every ordered pair of parent codewords: the overlap is 0 mod 4,
/// or 3 mod 4 when both words are in the odd coset.
inline OverlapReport overlap_lemma_check(const CosetPair& cosets, size_t max_counterexamples = 16) {
    if (cosets.parent.dimension() > 16) {
        throw EnumerationLimitError("overlap_lemma_check: parent dimension " +
                                    std::to_string(cosets.parent.dimension()) + " exceeds 16");
    }
    std::vector<BinaryWord> words = cosets.parent.codewords();
    std::vector<bool> odd(words.size());
    for (size_t i = 0; i < words.size(); ++i) odd[i] = cosets.is_odd(words[i]);

    OverlapReport report;
    for (size_t i = 0; i < words.size(); ++i) {
        for (size_t j = 0; j < words.size(); ++j) {
            ++report.pairs_checked;
            size_t ov = overlap(words[i], words[j]);
            size_t r = ov % 4;
            bool both_odd = odd[i] && odd[j];
            if (both_odd) {
                ++report.odd_odd_pairs;
            } else if (odd[i] || odd[j]) {
                ++report.even_odd_pairs;
            } else {
                ++report.even_even_pairs;
            }
            bool ok = r == 0 || (r == 3 && both_odd);
            if (!ok) {
                report.pass = false;
                if (report.counterexamples.size() < max_counterexamples) {
                    report.counterexamples.push_back({words[i], words[j], ov});
                }
            }
        }
    }
    return report;
}

/// Parities of `word` against each row of `checks`.
inline BinaryWord syndrome(const std::vector<BinaryWord>& checks, const BinaryWord& word) {
    BinaryWord s(checks.size());
    for (size_t i = 0; i < checks.size(); ++i) {
        if (dot(checks[i], word)) s.set(i, true);
    }
    return s;
}

inline BinaryWord syndrome(const LinearCode& code, const BinaryWord& word) {
    if (word.length() != code.length()) {
        throw ParameterError("syndrome: word length " + std::to_string(word.length()) + " vs code length " +
                             std::to_string(code.length()));
    }
    return syndrome(code.check(), word);
}

/// Minimum-weight coset leaders for every syndrome of an explicit check list.
///
/// Syndromes are packed into an integer, check i giving bit i. Leaders are
/// found by enumerating error patterns in order of increasing weight, so each
/// stored leader has minimum weight in its coset.
class SyndromeTable {
   public:
    static constexpr size_t kMaxChecks = 16;

    SyndromeTable() = default;

    SyndromeTable(size_t n, std::vector<BinaryWord> checks) : n_(n), checks_(std::move(checks)) {
        if (checks_.size() > kMaxChecks) {
            throw EnumerationLimitError("SyndromeTable: " + std::to_string(checks_.size()) + " checks exceeds " +
                                        std::to_string(kMaxChecks));
        }
        for (const BinaryWord& c : checks_) {
            if (c.length() != n) throw ParameterError("SyndromeTable: check length mismatch");
        }
        size_t reachable = size_t{1} << gf2::rank(checks_, n);
        leaders_.assign(size_t{1} << checks_.size(), std::nullopt);
        leaders_[0] = BinaryWord(n);
        size_t filled = 1;
        std::vector<size_t> positions;
        for (size_t w = 1; w <= n && filled < reachable; ++w) {
            positions.resize(w);
            for (size_t i = 0; i < w; ++i) positions[i] = i;
            while (true) {
                BinaryWord e(n);
                for (size_t p : positions) e.set(p, true);
                uint32_t s = index(e);
                if (!leaders_[s]) {
                    leaders_[s] = e;
                    if (++filled == reachable) break;
                }
                size_t i = w;
                while (i > 0 && positions[i - 1] == n - w + i - 1) --i;
                if (i == 0) break;
                ++positions[i - 1];
                for (size_t j = i; j < w; ++j) positions[j] = positions[j - 1] + 1;
            }
        }
    }

    /// Table for the check matrix of `code`.
    static SyndromeTable for_code(const LinearCode& code) { return SyndromeTable(code.length(), code.check()); }

    size_t length() const { return n_; }
    const std::vector<BinaryWord>& checks() const { return checks_; }
    size_t num_syndromes() const { return leaders_.size(); }

    uint32_t index(const BinaryWord& word) const {
        uint32_t s = 0;
        for (size_t i = 0; i < checks_.size(); ++i) {
            if (dot(checks_[i], word)) s |= uint32_t{1} << i;
        }
        return s;
    }

    /// Leader for a packed syndrome, or nullopt when no error produces it.
    const std::optional<BinaryWord>& leader(uint32_t s) const { return leaders_.at(s); }

    /// Leader for a packed syndrome; zero when the syndrome is unreachable.
    BinaryWord correction(uint32_t s) const {
        const auto& l = leaders_.at(s);
        return l ? *l : BinaryWord(n_);
    }

   private:
    size_t n_ = 0;
    std::vector<BinaryWord> checks_;
    std::vector<std::optional<BinaryWord>> leaders_;
};

/// word + leader(syndrome(word)).
inline BinaryWord decode(const SyndromeTable& table, const BinaryWord& word) {
    return word ^ table.correction(table.index(word));
}

/// Basis of a code made of lowest-weight codewords, chosen greedily in
/// increasing (weight, BinaryWord order).
inline std::vector<BinaryWord> min_weight_basis(const LinearCode& code) {
    std::vector<BinaryWord> words = code.codewords();
    std::sort(words.begin(), words.end(), [](const BinaryWord& a, const BinaryWord& b) {
        size_t wa = a.weight(), wb = b.weight();
        return wa != wb ? wa < wb : a < b;
    });
    std::vector<BinaryWord> nonzero;
    for (const BinaryWord& w : words) {
        if (!w.is_zero()) nonzero.push_back(w);
    }
    return gf2::independent_subset(nonzero, code.length());
}

}  // namespace ftqc
