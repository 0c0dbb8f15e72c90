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
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ftqc/errors.hpp"
#include "ftqc/montecarlo.hpp"

namespace ftqc {

/// Parameters of a `threshold` or `ccp` run.
///
/// JSON schema (all keys optional, unknown keys rejected):
///   command           "threshold" | "ccp"
///   code              "steane" | "rm15"
///   levels            [1] or [1, 2]           threshold only
///   p_grid            explicit list of p; overrides p_min/p_max/per_decade
///   p_min, p_max, per_decade                  geometric grid
///   target_failures, min_trials, max_trials   adaptive sampling
///   r, h, n_steps, trials                     ccp only
///   error_model       {p_gate1, p_gate2, p_prep, p_meas, p_wait}   ccp only
///   seed, workers, output
struct ExperimentConfig {
    std::string command = "threshold";
    std::string code = "steane";
    std::vector<size_t> levels{1};
    std::vector<double> p_grid;
    double p_min = 1e-4;
    double p_max = 1e-1;
    size_t per_decade = 6;
    uint64_t target_failures = 100;
    uint64_t min_trials = 64;
    uint64_t max_trials = uint64_t{1} << 20;
    size_t r = 1;
    size_t h = 1;
    size_t n_steps = 1;
    uint64_t trials = 100000;
    ErrorModel error_model = ErrorModel::uniform(1e-3);
    uint64_t seed = 1;
    size_t workers = 1;
    std::string output;

    std::vector<double> grid() const { return p_grid.empty() ? geometric_grid(p_min, p_max, per_decade) : p_grid; }

    SamplingPlan plan() const {
        SamplingPlan p;
        p.target_failures = target_failures;
        p.min_trials = min_trials;
        p.max_trials = max_trials;
        p.workers = workers;
        return p;
    }

    void validate() const {
        if (command != "threshold" && command != "ccp") throw ParameterError("config: unknown command '" + command + "'");
        if (code != "steane" && code != "rm15") throw ParameterError("config: unknown code '" + code + "'");
        if (levels.empty()) throw ParameterError("config: levels is empty");
        for (size_t l : levels) {
            if (l != 1 && l != 2) throw ParameterError("config: levels must be 1 or 2");
        }
        for (double p : p_grid) {
            if (!(p > 0 && p <= 0.25)) throw ParameterError("config: p_grid entries must lie in (0, 0.25]");
        }
        if (p_grid.empty() && !(p_min > 0 && p_max >= p_min && p_max <= 0.25 && per_decade > 0)) {
            throw ParameterError("config: bad p_min/p_max/per_decade");
        }
        if (max_trials == 0) throw ParameterError("config: max_trials must be positive");
        if (r < 1) throw ParameterError("config: r must be at least 1");
        if (n_steps < 1) throw ParameterError("config: n_steps must be at least 1");
        error_model.validate();
    }

    friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
        return a.command == b.command && a.code == b.code && a.levels == b.levels && a.p_grid == b.p_grid &&
               a.p_min == b.p_min && a.p_max == b.p_max && a.per_decade == b.per_decade &&
               a.target_failures == b.target_failures && a.min_trials == b.min_trials &&
               a.max_trials == b.max_trials && a.r == b.r && a.h == b.h && a.n_steps == b.n_steps &&
               a.trials == b.trials && a.error_model.p_gate1 == b.error_model.p_gate1 &&
               a.error_model.p_gate2 == b.error_model.p_gate2 && a.error_model.p_prep == b.error_model.p_prep &&
               a.error_model.p_meas == b.error_model.p_meas && a.error_model.p_wait == b.error_model.p_wait &&
               a.seed == b.seed && a.workers == b.workers && a.output == b.output;
    }
};

namespace detail {

inline void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known, const std::string& where) {
    if (!j.is_object()) throw ParameterError("config: " + where + " must be an object");
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) throw ParameterError("config: unknown key '" + key + "' in " + where);
    }
}

template <typename T>
void read_key(const nlohmann::json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(std::string("config: bad value for '") + key + "': " + e.what());
    }
}

}  // namespace detail

inline nlohmann::json to_json(const ExperimentConfig& c) {
    nlohmann::json m = {{"p_gate1", c.error_model.p_gate1},
                        {"p_gate2", c.error_model.p_gate2},
                        {"p_prep", c.error_model.p_prep},
                        {"p_meas", c.error_model.p_meas},
                        {"p_wait", c.error_model.p_wait}};
    return {{"command", c.command},
            {"code", c.code},
            {"levels", c.levels},
            {"p_grid", c.p_grid},
            {"p_min", c.p_min},
            {"p_max", c.p_max},
            {"per_decade", c.per_decade},
            {"target_failures", c.target_failures},
            {"min_trials", c.min_trials},
            {"max_trials", c.max_trials},
            {"r", c.r},
            {"h", c.h},
            {"n_steps", c.n_steps},
            {"trials", c.trials},
            {"error_model", m},
            {"seed", c.seed},
            {"workers", c.workers},
            {"output", c.output}};
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    detail::reject_unknown(j,
                           {"command", "code", "levels", "p_grid", "p_min", "p_max", "per_decade", "target_failures",
                            "min_trials", "max_trials", "r", "h", "n_steps", "trials", "error_model", "seed",
                            "workers", "output"},
                           "config");
    ExperimentConfig c;
    detail::read_key(j, "command", c.command);
    detail::read_key(j, "code", c.code);
    detail::read_key(j, "levels", c.levels);
    detail::read_key(j, "p_grid", c.p_grid);
    detail::read_key(j, "p_min", c.p_min);
    detail::read_key(j, "p_max", c.p_max);
    detail::read_key(j, "per_decade", c.per_decade);
    detail::read_key(j, "target_failures", c.target_failures);
    detail::read_key(j, "min_trials", c.min_trials);
    detail::read_key(j, "max_trials", c.max_trials);
    detail::read_key(j, "r", c.r);
    detail::read_key(j, "h", c.h);
    detail::read_key(j, "n_steps", c.n_steps);
    detail::read_key(j, "trials", c.trials);
    detail::read_key(j, "seed", c.seed);
    detail::read_key(j, "workers", c.workers);
    detail::read_key(j, "output", c.output);
    if (j.contains("error_model")) {
        const auto& m = j.at("error_model");
        detail::reject_unknown(m, {"p_gate1", "p_gate2", "p_prep", "p_meas", "p_wait"}, "error_model");
        detail::read_key(m, "p_gate1", c.error_model.p_gate1);
        detail::read_key(m, "p_gate2", c.error_model.p_gate2);
        detail::read_key(m, "p_prep", c.error_model.p_prep);
        detail::read_key(m, "p_meas", c.error_model.p_meas);
        detail::read_key(m, "p_wait", c.error_model.p_wait);
    }
    c.validate();
    return c;
}

inline std::string dump_config(const ExperimentConfig& c) { return to_json(c).dump(2) + "\n"; }

inline ExperimentConfig parse_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParameterError(std::string("config: ") + e.what());
    }
    return config_from_json(j);
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace ftqc
