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

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "ftqc/binary_word.hpp"
#include "ftqc/errors.hpp"
#include "ftqc/linear_code.hpp"

namespace ftqc {

/// Two-level code: every bit of `base` except `keep_position` is replaced by
/// a block of `inner.parent` (even part for 0, odd coset for 1).
///
/// Layout of `code`: position 0 is the kept bit, followed by one block per
/// remaining base position in increasing order. `punctured` drops the kept
/// bit, so its blocks start at 0.
struct ConcatenatedCode {
    LinearCode base;
    CosetPair inner;
    size_t keep_position = 0;
    LinearCode code;
    LinearCode punctured;
    LinearCode outer;
    SyndromeTable inner_table;
    SyndromeTable outer_table;

    size_t block_length() const { return inner.parent.length(); }
    size_t num_blocks() const { return base.length() - 1; }
};

inline LinearCode concat_classical(const LinearCode& base, const CosetPair& inner, size_t keep_position = 0) {
    if (keep_position >= base.length()) {
        throw ParameterError("concat_classical: keep_position out of range");
    }
    size_t l = inner.parent.length();
    size_t blocks = base.length() - 1;
    size_t n = 1 + blocks * l;
    if (n > BinaryWord::kMaxBits) {
        throw ParameterError("concat_classical: length " + std::to_string(n) + " exceeds " +
                             std::to_string(BinaryWord::kMaxBits));
    }
    std::vector<BinaryWord> rows;
    for (const BinaryWord& b : base.generator()) {
        BinaryWord w(n);
        w.set(0, b.get(keep_position));
        size_t blk = 0;
        for (size_t i = 0; i < base.length(); ++i) {
            if (i == keep_position) continue;
            if (b.get(i)) w.assign(1 + blk * l, inner.odd_representative);
            ++blk;
        }
        rows.push_back(w);
    }
    for (size_t blk = 0; blk < blocks; ++blk) {
        for (const BinaryWord& g : inner.even_part.generator()) {
            BinaryWord w(n);
            w.assign(1 + blk * l, g);
            rows.push_back(w);
        }
    }
    return LinearCode(n, rows);
}

inline ConcatenatedCode make_concatenated(const LinearCode& base, const CosetPair& inner, size_t keep_position = 0) {
    ConcatenatedCode c;
    c.base = base;
    c.inner = inner;
    c.keep_position = keep_position;
    c.code = concat_classical(base, inner, keep_position);
    c.punctured = puncture(c.code, 0);
    c.outer = puncture(base, keep_position);
    c.inner_table = SyndromeTable::for_code(inner.parent);
    c.outer_table = SyndromeTable::for_code(c.outer);
    return c;
}

/// Whether a block word lies in the odd coset of the inner code.
inline bool inner_coset_bit(const ConcatenatedCode& c, const BinaryWord& block) { return c.inner.is_odd(block); }

/// Decodes a word of `c.punctured`: each block with the inner table, then the
/// word of block cosets with the outer table. Blocks whose coset is flipped by
/// the outer step are replaced by the nearest word of the other coset.
inline BinaryWord hierarchical_decode(const ConcatenatedCode& c, const BinaryWord& word) {
    size_t l = c.block_length();
    size_t blocks = c.num_blocks();
    if (word.length() != blocks * l) {
        throw ParameterError("hierarchical_decode: word length " + std::to_string(word.length()) + " expected " +
                             std::to_string(blocks * l));
    }
    std::vector<BinaryWord> raw(blocks), fixed(blocks);
    BinaryWord outer_word(blocks);
    for (size_t b = 0; b < blocks; ++b) {
        raw[b] = word.slice(b * l, l);
        fixed[b] = decode(c.inner_table, raw[b]);
        outer_word.set(b, inner_coset_bit(c, fixed[b]));
    }
    BinaryWord outer_fixed = decode(c.outer_table, outer_word);
    std::vector<BinaryWord> inner_words;
    for (size_t b = 0; b < blocks; ++b) {
        if (outer_fixed.get(b) == outer_word.get(b)) continue;
        if (inner_words.empty()) inner_words = c.inner.parent.codewords();
        bool want_odd = outer_fixed.get(b);
        size_t best = std::numeric_limits<size_t>::max();
        for (const BinaryWord& cw : inner_words) {
            if (c.inner.is_odd(cw) != want_odd) continue;
            size_t d = (cw ^ raw[b]).weight();
            if (d < best) {
                best = d;
                fixed[b] = cw;
            }
        }
    }
    BinaryWord out(word.length());
    for (size_t b = 0; b < blocks; ++b) out.assign(b * l, fixed[b]);
    return out;
}

}  // namespace ftqc
