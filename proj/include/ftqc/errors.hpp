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

#include <stdexcept>
#include <string>

namespace ftqc {

/// Invalid construction parameters (code parameters, probabilities, sizes).
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Exhaustive enumeration requested over a space that is too large.
struct EnumerationLimitError : std::length_error {
    using std::length_error::length_error;
};

/// A code with no odd-weight codeword was asked for its even/odd split.
struct NoOddCosetError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Gate not supported by the requested operation (transversal table, Pauli frame).
struct UnsupportedGateError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A measurement was forced onto a branch with (numerically) zero probability.
struct ZeroProbabilityBranchError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Physical error rate is not below the level where concatenation helps (alpha * p >= 1).
struct ThresholdError : std::domain_error {
    using std::domain_error::domain_error;
};

/// A simulation would exceed the configured qubit budget.
struct BudgetExceededError : std::length_error {
    using std::length_error::length_error;
};

/// Too few usable data points for a fit.
struct InsufficientDataError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace ftqc
