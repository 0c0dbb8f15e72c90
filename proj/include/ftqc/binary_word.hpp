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

#include <array>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "ftqc/errors.hpp"

namespace ftqc {

/// Fixed-length vector over GF(2), bit-packed into four machine words.
///
/// Position 0 is the first character of the string form and the most
/// significant position for ordering: `a < b` compares the words as bit
/// strings read left to right. Lengths above `kMaxBits` are rejected.
class BinaryWord {
   public:
    static constexpr size_t kWords = 4;
    static constexpr size_t kMaxBits = 64 * kWords;

    BinaryWord() = default;

    explicit BinaryWord(size_t length) : length_(static_cast<uint16_t>(checked_length(length))) {}

    /// Low `length` bits of `bits`; bit i of the integer is position i.
    static BinaryWord from_uint(uint64_t bits, size_t length) {
        BinaryWord w(length);
        if (length < 64) {
            bits &= (uint64_t{1} << length) - 1;
        }
        w.words_[0] = bits;
        return w;
    }

    /// Parses a string of '0'/'1' characters. Underscores are ignored.
    static BinaryWord from_string(std::string_view text) {
        size_t n = 0;
        for (char c : text) {
            if (c == '0' || c == '1') {
                ++n;
            } else if (c != '_') {
                throw ParameterError("BinaryWord::from_string: unexpected character '" + std::string(1, c) + "'");
            }
        }
        BinaryWord w(n);
        size_t i = 0;
        for (char c : text) {
            if (c == '_') continue;
            if (c == '1') w.set(i, true);
            ++i;
        }
        return w;
    }

    static BinaryWord unit(size_t length, size_t position) {
        BinaryWord w(length);
        w.set(position, true);
        return w;
    }

    static BinaryWord ones(size_t length) {
        BinaryWord w(length);
        for (size_t i = 0; i < length; ++i) w.set(i, true);
        return w;
    }

    size_t length() const { return length_; }

    bool get(size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    bool operator[](size_t i) const { return get(i); }

    void set(size_t i, bool value) {
        uint64_t mask = uint64_t{1} << (i & 63);
        if (value) {
            words_[i >> 6] |= mask;
        } else {
            words_[i >> 6] &= ~mask;
        }
    }

    void flip(size_t i) { words_[i >> 6] ^= uint64_t{1} << (i & 63); }

    size_t weight() const {
        size_t total = 0;
        for (uint64_t w : words_) total += static_cast<size_t>(std::popcount(w));
        return total;
    }

    bool is_zero() const {
        for (uint64_t w : words_) {
            if (w) return false;
        }
        return true;
    }

    /// Index of the first set position, or length() when zero.
    size_t first_set() const {
        for (size_t k = 0; k < kWords; ++k) {
            if (words_[k]) return 64 * k + static_cast<size_t>(std::countr_zero(words_[k]));
        }
        return length_;
    }

    /// Positions of set bits in increasing order.
    std::vector<size_t> support() const {
        std::vector<size_t> out;
        out.reserve(weight());
        for (size_t k = 0; k < kWords; ++k) {
            uint64_t w = words_[k];
            while (w) {
                out.push_back(64 * k + static_cast<size_t>(std::countr_zero(w)));
                w &= w - 1;
            }
        }
        return out;
    }

    /// Low 64 positions as an integer (position i -> bit i).
    uint64_t low_word() const { return words_[0]; }
    const std::array<uint64_t, kWords>& words() const { return words_; }

    BinaryWord& operator^=(const BinaryWord& other) {
        check_same_length(other);
        for (size_t k = 0; k < kWords; ++k) words_[k] ^= other.words_[k];
        return *this;
    }

    BinaryWord& operator&=(const BinaryWord& other) {
        check_same_length(other);
        for (size_t k = 0; k < kWords; ++k) words_[k] &= other.words_[k];
        return *this;
    }

    BinaryWord& operator|=(const BinaryWord& other) {
        check_same_length(other);
        for (size_t k = 0; k < kWords; ++k) words_[k] |= other.words_[k];
        return *this;
    }

    friend BinaryWord operator^(BinaryWord a, const BinaryWord& b) { return a ^= b; }
    friend BinaryWord operator&(BinaryWord a, const BinaryWord& b) { return a &= b; }
    friend BinaryWord operator|(BinaryWord a, const BinaryWord& b) { return a |= b; }

    friend bool operator==(const BinaryWord& a, const BinaryWord& b) {
        return a.length_ == b.length_ && a.words_ == b.words_;
    }

    /// Bit-string order: shorter words first, then the first differing
    /// position decides (0 before 1).
    friend std::strong_ordering operator<=>(const BinaryWord& a, const BinaryWord& b) {
        if (a.length_ != b.length_) return a.length_ <=> b.length_;
        for (size_t k = 0; k < kWords; ++k) {
            uint64_t diff = a.words_[k] ^ b.words_[k];
            if (diff) {
                uint64_t lowest = diff & (~diff + 1);
                return (a.words_[k] & lowest) ? std::strong_ordering::greater : std::strong_ordering::less;
            }
        }
        return std::strong_ordering::equal;
    }

    /// Copy with position `i` removed.
    BinaryWord erased(size_t i) const {
        BinaryWord out(length_ - 1);
        size_t j = 0;
        for (size_t k = 0; k < length_; ++k) {
            if (k == i) continue;
            if (get(k)) out.set(j, true);
            ++j;
        }
        return out;
    }

    /// Positions [begin, begin + count).
    BinaryWord slice(size_t begin, size_t count) const {
        BinaryWord out(count);
        for (size_t k = 0; k < count; ++k) {
            if (get(begin + k)) out.set(k, true);
        }
        return out;
    }

    /// Writes `w` into positions [begin, begin + w.length()).
    void assign(size_t begin, const BinaryWord& w) {
        for (size_t k = 0; k < w.length(); ++k) set(begin + k, w.get(k));
    }

    std::string to_string() const {
        std::string s(length_, '0');
        for (size_t i = 0; i < length_; ++i) {
            if (get(i)) s[i] = '1';
        }
        return s;
    }

    size_t hash() const {
        uint64_t h = 0x9E3779B97F4A7C15ULL ^ length_;
        for (uint64_t w : words_) {
            h ^= w + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<size_t>(h);
    }

   private:
    static size_t checked_length(size_t length) {
        if (length > kMaxBits) {
            throw ParameterError("BinaryWord length " + std::to_string(length) + " exceeds " +
                                 std::to_string(kMaxBits));
        }
        return length;
    }

    void check_same_length(const BinaryWord& other) const {
        if (other.length_ != length_) {
            throw ParameterError("BinaryWord length mismatch: " + std::to_string(length_) + " vs " +
                                 std::to_string(other.length_));
        }
    }

    std::array<uint64_t, kWords> words_{};
    uint16_t length_ = 0;
};

/// GF(2) inner product.
inline bool dot(const BinaryWord& a, const BinaryWord& b) {
    if (a.length() != b.length()) {
        throw ParameterError("dot: length mismatch");
    }
    uint64_t acc = 0;
    for (size_t k = 0; k < BinaryWord::kWords; ++k) acc ^= a.words()[k] & b.words()[k];
    return std::popcount(acc) & 1;
}

/// |a AND b|.
inline size_t overlap(const BinaryWord& a, const BinaryWord& b) { return (a & b).weight(); }

}  // namespace ftqc

template <>
struct std::hash<ftqc::BinaryWord> {
    size_t operator()(const ftqc::BinaryWord& w) const noexcept { return w.hash(); }
};
