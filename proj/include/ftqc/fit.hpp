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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ftqc/errors.hpp"
#include "ftqc/montecarlo.hpp"

namespace ftqc {

/// Power-law fit of logical rate against p.
///
/// The free fit is rate = A p^slope; `alpha` comes from the fit with the slope
/// fixed at 2, rate = alpha p^2, and `pseudo_threshold` = 1 / alpha. Points are
/// weighted by their failure counts (log-rate variance ~ 1 / failures).
struct AlphaFit {
    double alpha = 0.0;
    double alpha_ci_low = 0.0;
    double alpha_ci_high = 0.0;
    double slope = 0.0;
    double slope_stderr = 0.0;
    double intercept = 0.0;
    /// Weighted RMS of the free fit in log space.
    double residual = 0.0;
    double pseudo_threshold = 0.0;
    double pseudo_threshold_ci_low = 0.0;
    double pseudo_threshold_ci_high = 0.0;
    /// Crossing of the free fit with rate = p; NaN when slope <= 1.
    double free_crossing = std::numeric_limits<double>::quiet_NaN();
    bool no_gain = false;
    size_t points = 0;
};

inline constexpr double kNoGainSlope = 1.5;

inline AlphaFit fit_alpha(const std::vector<std::pair<double, RateEstimate>>& points) {
    std::vector<double> lx, ly, w;
    std::set<double> distinct;
    for (const auto& [p, est] : points) {
        if (est.failures == 0 || !(p > 0)) continue;
        lx.push_back(std::log(p));
        ly.push_back(std::log(est.rate));
        w.push_back(static_cast<double>(est.failures));
        distinct.insert(p);
    }
    if (distinct.size() < 4) {
        throw InsufficientDataError("fit_alpha: need at least 4 distinct p with failures, got " +
                                    std::to_string(distinct.size()));
    }
    double sw = 0, sx = 0, sy = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
        sw += w[i];
        sx += w[i] * lx[i];
        sy += w[i] * ly[i];
    }
    double mx = sx / sw, my = sy / sw;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
        sxx += w[i] * (lx[i] - mx) * (lx[i] - mx);
        sxy += w[i] * (lx[i] - mx) * (ly[i] - my);
    }
    AlphaFit f;
    f.points = distinct.size();
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double rss = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
        double e = ly[i] - (f.intercept + f.slope * lx[i]);
        rss += w[i] * e * e;
    }
    f.residual = std::sqrt(rss / sw);
    f.slope_stderr = 1.0 / std::sqrt(sxx);

    double log_alpha = (sy - 2.0 * sx) / sw;
    double half = 1.96 / std::sqrt(sw);
    f.alpha = std::exp(log_alpha);
    f.alpha_ci_low = std::exp(log_alpha - half);
    f.alpha_ci_high = std::exp(log_alpha + half);
    f.pseudo_threshold = 1.0 / f.alpha;
    f.pseudo_threshold_ci_low = 1.0 / f.alpha_ci_high;
    f.pseudo_threshold_ci_high = 1.0 / f.alpha_ci_low;
    if (f.slope > 1.0) f.free_crossing = std::exp(-f.intercept / (f.slope - 1.0));
    f.no_gain = f.slope < kNoGainSlope;
    return f;
}

inline AlphaFit fit_alpha(const std::vector<SweepPoint>& sweep) {
    std::vector<std::pair<double, RateEstimate>> pts;
    for (const auto& s : sweep) pts.push_back({s.p, s.estimate});
    return fit_alpha(pts);
}

/// Resource counts of CCP_r(h) over a code of length l.
struct Overhead {
    /// l^h.
    double qubits = 1;
    /// Sequential recovery layers, r^h - 1.
    double recovery_layers = 0;
    /// Total recoveries R(h) = (r - 1) + r l R(h - 1), R(0) = 0.
    double recoveries = 0;
    /// (beta l^2)^h.
    double operations = 1;
    /// (gamma l)^h.
    double qubit_cost = 1;
};

inline Overhead overhead(size_t l, size_t r, size_t h, double beta = 1.0, double gamma = 1.0) {
    if (l < 1 || r < 1) throw ParameterError("overhead: need l >= 1 and r >= 1");
    Overhead o;
    double L = static_cast<double>(l), R = static_cast<double>(r);
    for (size_t i = 0; i < h; ++i) {
        o.qubits *= L;
        o.recoveries = (R - 1) + R * L * o.recoveries;
        o.operations *= beta * L * L;
        o.qubit_cost *= gamma * L;
    }
    o.recovery_layers = std::pow(R, static_cast<double>(h)) - 1;
    return o;
}

/// Concatenation depth for n operations at total error eps:
/// ceil(log2(log(n / eps) / log(1 / (alpha p)))), or 0 when the inner ratio is at most 1.
inline size_t required_h(double n, double eps, double alpha, double p) {
    if (!(n > 0 && eps > 0 && alpha > 0 && p > 0)) throw ParameterError("required_h: arguments must be positive");
    double ap = alpha * p;
    if (ap >= 1.0) throw ThresholdError("required_h: alpha p = " + std::to_string(ap) + " is not below 1");
    double x = std::log(n / eps) / std::log(1.0 / ap);
    if (x <= 1.0) return 0;
    return static_cast<size_t>(std::ceil(std::log2(x) - 1e-12));
}

struct BoundCheck {
    bool applicable = false;
    double bound = 0.0;
};

/// The final error of CCP_r(1) is at most (r + 1) e_c when r + 1 <= e_d / e_c.
inline BoundCheck ccp_error_bound_check(double e_d, double e_c, size_t r) {
    if (!(e_d > 0 && e_d < 1 && e_c > 0 && e_c < 1)) throw ParameterError("ccp_error_bound_check: rates outside (0, 1)");
    BoundCheck b;
    double rr = static_cast<double>(r) + 1.0;
    b.bound = rr * e_c;
    b.applicable = b.bound <= e_d * (1 + 1e-12);
    return b;
}

}  // namespace ftqc
