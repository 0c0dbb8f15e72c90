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
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "ftqc/errors.hpp"

namespace ftqc {

using Complex = std::complex<double>;

inline constexpr double kUnitarityTolerance = 1e-12;

enum class GateTag : uint8_t { I, A, B, C, X, Y, Z, N, D, E, CZ, Custom };

inline std::string_view gate_name(GateTag g) {
    switch (g) {
        case GateTag::I: return "I";
        case GateTag::A: return "A";
        case GateTag::B: return "B";
        case GateTag::C: return "C";
        case GateTag::X: return "X";
        case GateTag::Y: return "Y";
        case GateTag::Z: return "Z";
        case GateTag::N: return "N";
        case GateTag::D: return "D";
        case GateTag::E: return "E";
        case GateTag::CZ: return "CZ";
        case GateTag::Custom: return "custom";
    }
    return "?";
}

inline std::optional<GateTag> parse_gate(std::string_view name) {
    for (GateTag g : {GateTag::I, GateTag::A, GateTag::B, GateTag::C, GateTag::X, GateTag::Y, GateTag::Z, GateTag::N,
                      GateTag::D, GateTag::E, GateTag::CZ}) {
        if (gate_name(g) == name) return g;
    }
    return std::nullopt;
}

inline bool is_two_qubit(GateTag g) { return g == GateTag::N || g == GateTag::D || g == GateTag::E || g == GateTag::CZ; }

/// 2x2 unitary, row-major: m[0] = <0|U|0>, m[1] = <0|U|1>, m[2] = <1|U|0>, m[3] = <1|U|1>.
struct Gate1Q {
    std::array<Complex, 4> m{};
    GateTag tag = GateTag::Custom;

    Gate1Q() : m{1, 0, 0, 1}, tag(GateTag::I) {}

    Gate1Q(std::array<Complex, 4> entries, GateTag t) : m(entries), tag(t) {
        Complex a = std::conj(m[0]) * m[0] + std::conj(m[2]) * m[2];
        Complex b = std::conj(m[0]) * m[1] + std::conj(m[2]) * m[3];
        Complex d = std::conj(m[1]) * m[1] + std::conj(m[3]) * m[3];
        if (std::abs(a - 1.0) > kUnitarityTolerance || std::abs(b) > kUnitarityTolerance ||
            std::abs(d - 1.0) > kUnitarityTolerance) {
            throw ParameterError("Gate1Q: matrix is not unitary");
        }
    }

    bool is_diagonal() const { return m[1] == 0.0 && m[2] == 0.0; }
    bool is_antidiagonal() const { return m[0] == 0.0 && m[3] == 0.0; }

    Gate1Q adjoint() const {
        return Gate1Q({std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}, GateTag::Custom);
    }

    /// this * other.
    Gate1Q operator*(const Gate1Q& o) const {
        return Gate1Q({m[0] * o.m[0] + m[1] * o.m[2], m[0] * o.m[1] + m[1] * o.m[3], m[2] * o.m[0] + m[3] * o.m[2],
                       m[2] * o.m[1] + m[3] * o.m[3]},
                      GateTag::Custom);
    }
};

/// Diagonal two-qubit gate; phases indexed by 2 * b1 + b2 for the bits (b1, b2) of the two targets.
struct Gate2QDiag {
    std::array<Complex, 4> phases{1, 1, 1, 1};
    GateTag tag = GateTag::Custom;

    Gate2QDiag() = default;

    Gate2QDiag(std::array<Complex, 4> p, GateTag t) : phases(p), tag(t) {
        for (const Complex& z : phases) {
            if (std::abs(std::abs(z) - 1.0) > kUnitarityTolerance) {
                throw ParameterError("Gate2QDiag: phase of magnitude != 1");
            }
        }
    }
};

namespace gates {

inline const Gate1Q& I() {
    static const Gate1Q g({1, 0, 0, 1}, GateTag::I);
    return g;
}
/// Hadamard-type gate, normalized.
inline const Gate1Q& A() {
    static const double s = 1.0 / std::sqrt(2.0);
    static const Gate1Q g({s, s, s, -s}, GateTag::A);
    return g;
}
inline const Gate1Q& B() {
    static const Gate1Q g({1, 0, 0, Complex(0, 1)}, GateTag::B);
    return g;
}
inline const Gate1Q& C() {
    static const Gate1Q g({1, 0, 0, Complex(0, -1)}, GateTag::C);
    return g;
}
inline const Gate1Q& X() {
    static const Gate1Q g({0, 1, 1, 0}, GateTag::X);
    return g;
}
inline const Gate1Q& Y() {
    static const Gate1Q g({0, Complex(0, -1), Complex(0, 1), 0}, GateTag::Y);
    return g;
}
inline const Gate1Q& Z() {
    static const Gate1Q g({1, 0, 0, -1}, GateTag::Z);
    return g;
}
inline const Gate2QDiag& D() {
    static const Gate2QDiag g({1, 1, 1, Complex(0, 1)}, GateTag::D);
    return g;
}
inline const Gate2QDiag& E() {
    static const Gate2QDiag g({1, 1, 1, Complex(0, -1)}, GateTag::E);
    return g;
}
inline const Gate2QDiag& CZ() {
    static const Gate2QDiag g({1, 1, 1, -1}, GateTag::CZ);
    return g;
}

inline const Gate1Q& one_qubit(GateTag t) {
    switch (t) {
        case GateTag::I: return I();
        case GateTag::A: return A();
        case GateTag::B: return B();
        case GateTag::C: return C();
        case GateTag::X: return X();
        case GateTag::Y: return Y();
        case GateTag::Z: return Z();
        default: throw UnsupportedGateError("not a one-qubit gate: " + std::string(gate_name(t)));
    }
}

inline const Gate2QDiag& diagonal(GateTag t) {
    switch (t) {
        case GateTag::D: return D();
        case GateTag::E: return E();
        case GateTag::CZ: return CZ();
        default: throw UnsupportedGateError("not a diagonal two-qubit gate: " + std::string(gate_name(t)));
    }
}

}  // namespace gates
}  // namespace ftqc
