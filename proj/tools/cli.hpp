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
#include <complex>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ftqc/ftqc.hpp"

namespace ftqc::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitUsage = 2;

/// Raised for bad arguments found after parsing.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline std::string num(double v, int precision = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

struct Check {
    std::string name;
    bool pass = true;
    std::string detail;
};

class CheckList {
   public:
    void add(std::string name, bool pass, std::string detail = {}) {
        checks_.push_back({std::move(name), pass, std::move(detail)});
    }
    bool pass() const {
        for (const auto& c : checks_) {
            if (!c.pass) return false;
        }
        return true;
    }
    const std::vector<Check>& checks() const { return checks_; }

    void print(std::ostream& out, bool json, std::vector<std::string> notes = {}) const {
        if (json) {
            nlohmann::json j;
            j["pass"] = pass();
            j["checks"] = nlohmann::json::array();
            for (const auto& c : checks_) j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
            j["notes"] = notes;
            out << j.dump(2) << "\n";
            return;
        }
        for (const auto& c : checks_) {
            out << (c.pass ? "PASS  " : "FAIL  ") << c.name;
            if (!c.detail.empty()) out << "  " << c.detail;
            out << "\n";
        }
        for (const auto& n : notes) out << "NOTE  " << n << "\n";
        out << (pass() ? "all checks passed" : "some checks FAILED") << "\n";
    }

   private:
    std::vector<Check> checks_;
};

inline std::string distribution_text(const std::map<size_t, size_t>& d) {
    std::string s = "{";
    for (const auto& [w, c] : d) {
        if (s.size() > 1) s += ", ";
        s += std::to_string(w) + ":" + std::to_string(c);
    }
    return s + "}";
}

inline PuncturedCssCode code_by_name(const std::string& name) {
    if (name == "steane") return build_steane();
    if (name == "rm15") return build_rm15();
    throw UsageError("unknown code '" + name + "' (expected steane or rm15)");
}

// ---------------------------------------------------------------- verify-codes

/// Extra code fixture: {"name": str, "generator": [bit strings], "puncture_position": int}.
struct CodeFixture {
    std::string name;
    LinearCode code;
    size_t puncture_position = 0;
};

inline CodeFixture load_code_fixture(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open fixture '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("fixture '" + path + "': " + e.what());
    }
    for (const auto& [key, value] : j.items()) {
        if (key != "name" && key != "generator" && key != "puncture_position") {
            throw UsageError("fixture '" + path + "': unknown key '" + key + "'");
        }
    }
    CodeFixture f;
    f.name = j.value("name", path);
    f.puncture_position = j.value("puncture_position", size_t{0});
    std::vector<BinaryWord> rows;
    for (const auto& r : j.at("generator")) rows.push_back(BinaryWord::from_string(r.get<std::string>()));
    if (rows.empty()) throw UsageError("fixture '" + path + "': empty generator");
    f.code = LinearCode(rows[0].length(), rows);
    return f;
}

inline void overlap_check(CheckList& checks, const std::string& name, const CosetPair& cosets) {
    OverlapReport r = overlap_lemma_check(cosets);
    std::string detail = std::to_string(r.pairs_checked) + " pairs (even/even " + std::to_string(r.even_even_pairs) +
                         ", even/odd " + std::to_string(r.even_odd_pairs) + ", odd/odd " +
                         std::to_string(r.odd_odd_pairs) + ")";
    if (!r.pass) {
        const auto& c = r.counterexamples.front();
        detail += "; " + std::to_string(r.counterexamples.size()) + (r.counterexamples.size() >= 16 ? "+" : "") +
                  " counterexamples, first x=" + c.x.to_string() + " y=" + c.y.to_string() +
                  " overlap=" + std::to_string(c.overlap);
    }
    bool cases = r.even_even_pairs > 0 && r.even_odd_pairs > 0 && r.odd_odd_pairs > 0;
    checks.add(name + " overlap lemma", r.pass && cases, detail);
}

/// Weight and overlap checks for a code whose weights should be divisible by 8.
inline void divisible_code_checks(CheckList& checks, const std::string& name, const LinearCode& base, size_t position) {
    bool div8 = true;
    for (const auto& [w, c] : weight_distribution(base)) div8 = div8 && w % 8 == 0;
    checks.add(name + " weights divisible by 8", div8, distribution_text(weight_distribution(base)));
    CosetPair p = even_split(puncture(base, position));
    bool mod8 = true;
    p.parent.for_each_codeword([&](const BinaryWord& w) {
        size_t r = w.weight() % 8;
        mod8 = mod8 && (r == 0 || r == 7) && ((r == 7) == p.is_odd(w));
    });
    checks.add(name + " punctured weights 0 or 7 mod 8 (7 exactly on the odd coset)", mod8,
               distribution_text(weight_distribution(p.parent)));
    overlap_check(checks, name + " punctured", p);
}

inline CheckList verify_codes(const std::vector<CodeFixture>& extra) {
    CheckList checks;
    LinearCode rm13 = rm_code(1, 3), rm14 = rm_code(1, 4);

    auto d13 = weight_distribution(rm13);
    checks.add("rm(1,3) weight distribution", d13 == std::map<size_t, size_t>{{0, 1}, {4, 14}, {8, 1}},
               distribution_text(d13));
    bool div4 = true;
    for (const auto& [w, c] : d13) div4 = div4 && w % 4 == 0;
    checks.add("rm(1,3) weights divisible by 4", div4);
    checks.add("rm(1,3) self-dual", dual(rm13).same_row_space(rm13));

    auto d14 = weight_distribution(rm14);
    checks.add("rm(1,4) weight distribution", d14 == std::map<size_t, size_t>{{0, 1}, {8, 30}, {16, 1}},
               distribution_text(d14));
    size_t dd = min_distance(dual(rm14));
    checks.add("rm(1,4) dual minimum distance 4", dd == 4, "d = " + std::to_string(dd));

    LinearCode h7 = puncture(rm13, 0);
    size_t d7 = min_distance(h7);
    checks.add("punctured rm(1,3) is [7,4,3]", h7.length() == 7 && h7.dimension() == 4 && d7 == 3,
               "[" + std::to_string(h7.length()) + "," + std::to_string(h7.dimension()) + "," + std::to_string(d7) +
                   "]");
    divisible_code_checks(checks, "rm(1,4)", rm14, 0);

    for (const auto& f : extra) divisible_code_checks(checks, f.name, f.code, f.puncture_position);
    return checks;
}

inline std::vector<std::string> code_notes() {
    return {"rm(2,7): dual distance 8 is taken from the Reed-Muller distance formula 2^(m-r) and is not verified "
            "by enumeration"};
}

// ---------------------------------------------------------------- verify-gates

inline void a_protocol_checks(CheckList& checks, const PuncturedCssCode* code) {
    std::mt19937_64 rng(7);
    if (!code) {
        std::normal_distribution<double> g;
        double worst = 1.0;
        for (int t = 0; t < 20; ++t) {
            Complex a(g(rng), g(rng)), b(g(rng), g(rng));
            double nrm = std::sqrt(std::norm(a) + std::norm(b));
            a /= nrm;
            b /= nrm;
            for (bool minus : {false, true}) {
                SparseState s = SparseState::from_entries(1, {{0, a}, {1, b}});
                SparseState want = apply_1q(s, gates::A(), 0);
                a_gate_protocol_raw(s, 0, minus, rng);
                worst = std::min(worst, fidelity(s.restrict_to({0}), want));
            }
        }
        checks.add("A protocol (unencoded, 20 random states, both outcomes)", worst >= 1 - kGateTableTolerance,
                   "min fidelity " + num(worst, 15));
        return;
    }
    double worst = 1.0;
    for (const auto& amps : logical_test_states(1)) {
        for (bool minus : {false, true}) {
            SparseState s = encode(*code, amps[0], amps[1]);
            SparseState want = encode(*code, (amps[0] + amps[1]) / std::sqrt(2.0), (amps[0] - amps[1]) / std::sqrt(2.0));
            a_gate_protocol(*code, s, 0, minus, rng);
            std::vector<size_t> keep(code->n);
            for (size_t i = 0; i < code->n; ++i) keep[i] = i;
            worst = std::min(worst, fidelity(s.restrict_to(keep), want));
        }
    }
    checks.add(code->name + " A protocol (encoded, both outcomes)", worst >= 1 - kGateTableTolerance,
               "min fidelity " + num(worst, 15));
}

inline void staged_d_checks(CheckList& checks, bool exhaustive, size_t workers) {
    PuncturedCssCode code = build_steane();
    auto ctx = make_context(code);
    std::mt19937_64 rng(11);
    double worst = 1.0;
    for (const auto& amps : logical_test_states(2)) {
        SparseState in = encode_blocks(code, 2, amps);
        RecoverResult r = steane_staged_D(*ctx, in, {}, rng);
        SparseState logical = SparseState::from_entries(2, [&] {
            std::vector<SparseState::Entry> e;
            for (size_t i = 0; i < 4; ++i) e.push_back({i, amps[i]});
            return e;
        }());
        apply_logical(logical, GateTag::D, 0, 1);
        worst = std::min(worst, fidelity(r.state, encode_blocks(code, 2, dense_amplitudes(logical))));
    }
    checks.add("steane staged D acts as logical D", worst >= 1 - kGateTableTolerance, "min fidelity " + num(worst, 15));
    if (exhaustive) {
        Gadget g = make_staged_d_gadget(ctx);
        EnumerationOptions opt;
        opt.workers = workers;
        FaultReport rep = enumerate_faults(g, opt);
        checks.add("steane staged D single faults", rep.failures == 0,
                   std::to_string(rep.combinations) + " faults, " + std::to_string(rep.failures) + " failures");
    }
}

struct GateSelection {
    std::string code = "all";
    std::optional<GateTag> gate;
    bool exhaustive = false;
    size_t workers = 1;
};

inline CheckList verify_gates(const GateSelection& sel) {
    CheckList checks;
    std::vector<PuncturedCssCode> codes;
    if (sel.code == "all" || sel.code == "steane") codes.push_back(build_steane());
    if (sel.code == "all" || sel.code == "rm15") codes.push_back(build_rm15());
    if (codes.empty()) throw UsageError("unknown code '" + sel.code + "' (expected steane, rm15 or all)");

    bool any = false;
    for (const auto& code : codes) {
        LogicalActionTable table;
        for (const auto& [p, l] : code.transversal) {
            if (!sel.gate || *sel.gate == p) table[p] = l;
        }
        if (!table.empty()) {
            any = true;
            for (const auto& e : verify_gate_table(code, table).entries) {
                checks.add(code.name + " transversal " + std::string(gate_name(e.physical)) + " -> logical " +
                               std::string(gate_name(e.logical)),
                           e.pass, "min fidelity " + num(e.min_fidelity, 15) + " over " +
                                       std::to_string(e.states_tested) + " states");
            }
        }
        if (!sel.gate || *sel.gate == GateTag::A) {
            any = true;
            a_protocol_checks(checks, &code);
        }
        if (code.name == "steane" && sel.gate && *sel.gate == GateTag::D) {
            any = true;
            staged_d_checks(checks, sel.exhaustive, sel.workers);
        }
    }
    if (!sel.gate || *sel.gate == GateTag::A) a_protocol_checks(checks, nullptr);
    if (!sel.gate) {
        if (sel.code == "all" || sel.code == "steane") staged_d_checks(checks, sel.exhaustive, sel.workers);
        for (const auto& c : gate_identities_check().checks) {
            checks.add("identity " + c.name, c.pass, "max error " + num(c.max_error, 3));
        }
    }
    if (!any) throw UsageError("gate " + std::string(gate_name(*sel.gate)) + " has no implementation on " + sel.code);
    return checks;
}

// ---------------------------------------------------------------- faults

inline Gadget gadget_by_name(const std::string& name, const PuncturedCssCode& code, size_t cat_size) {
    auto ctx = make_context(code);
    if (name == "recover") return make_recover_gadget(ctx);
    if (name == "memory") return make_memory_gadget(ctx);
    if (name == "plus") return make_plus_gadget(ctx);
    if (name == "zero") return make_zero_gadget(ctx);
    if (name == "cat") return make_cat_gadget(cat_size);
    if (name == "staged-d") {
        if (code.n != 7) throw UsageError("staged-d needs --code steane");
        return make_staged_d_gadget(ctx);
    }
    throw UsageError("unknown gadget '" + name + "' (expected recover, memory, plus, zero, cat or staged-d)");
}

// ---------------------------------------------------------------- threshold

inline void write_results_csv(std::ostream& os, const std::vector<SweepPoint>& pts) {
    os << "level,p,trials,failures,rate,ci_low,ci_high,seed\n";
    for (const auto& s : pts) {
        os << s.level << ',' << num(s.p, 10) << ',' << s.estimate.trials << ',' << s.estimate.failures << ','
           << num(s.estimate.rate, 10) << ',' << num(s.estimate.ci_low, 10) << ',' << num(s.estimate.ci_high, 10)
           << ',' << s.seed << '\n';
    }
}

inline std::string fit_report(size_t level, const std::optional<AlphaFit>& f, const std::string& why) {
    std::ostringstream os;
    os << "[level " << level << "]\n";
    if (!f) {
        os << "fit: none (" << why << ")\n";
        return os.str();
    }
    os << "points: " << f->points << "\n"
       << "alpha: " << num(f->alpha) << " (95% CI " << num(f->alpha_ci_low) << " .. " << num(f->alpha_ci_high)
       << ")\n"
       << "slope: " << num(f->slope, 4) << " +- " << num(f->slope_stderr, 3) << "\n"
       << "intercept: " << num(f->intercept, 6) << "\n"
       << "residual: " << num(f->residual, 4) << "\n"
       << "pseudo_threshold: " << num(f->pseudo_threshold) << " (95% CI " << num(f->pseudo_threshold_ci_low)
       << " .. " << num(f->pseudo_threshold_ci_high) << ")\n"
       << "free_fit_crossing: " << (std::isnan(f->free_crossing) ? std::string("none") : num(f->free_crossing))
       << "\n"
       << "no_gain: " << (f->no_gain ? "true" : "false") << "\n";
    return os.str();
}

inline void write_plot_csv(std::ostream& os, const std::vector<SweepPoint>& pts,
                           const std::map<size_t, std::optional<AlphaFit>>& fits) {
    os << "level,p,rate,ci_low,ci_high,alpha_p2,free_fit,physical\n";
    for (const auto& s : pts) {
        const auto& f = fits.at(s.level);
        std::string a = f ? num(f->alpha * s.p * s.p, 10) : "";
        std::string fr = f ? num(std::exp(f->intercept) * std::pow(s.p, f->slope), 10) : "";
        os << s.level << ',' << num(s.p, 10) << ',' << num(s.estimate.rate, 10) << ',' << num(s.estimate.ci_low, 10)
           << ',' << num(s.estimate.ci_high, 10) << ',' << a << ',' << fr << ',' << num(s.p, 10) << '\n';
    }
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + path + "'");
    f << content;
}

/// Config as echoed into output files. The worker count is left out so outputs
/// do not depend on it.
inline std::string echo_config(const ExperimentConfig& cfg) {
    nlohmann::json j = to_json(cfg);
    j.erase("workers");
    return j.dump(2) + "\n";
}

inline int run_threshold(const ExperimentConfig& cfg, std::ostream& out) {
    PuncturedCssCode code = code_by_name(cfg.code);
    auto ctx = make_context(code);
    std::vector<double> grid = cfg.grid();
    std::vector<SweepPoint> pts;
    std::map<size_t, std::optional<AlphaFit>> fits;
    std::string report = "# config\n" + echo_config(cfg) + "\n";
    for (size_t level : cfg.levels) {
        Gadget g = level == 1 ? make_memory_gadget(ctx) : make_level2_memory_gadget(ctx);
        auto s = sweep(g, grid, cfg.seed, cfg.plan());
        pts.insert(pts.end(), s.begin(), s.end());
        std::string why;
        try {
            fits[level] = fit_alpha(s);
        } catch (const InsufficientDataError& e) {
            fits[level] = std::nullopt;
            why = e.what();
        }
        report += fit_report(level, fits[level], why);
    }
    std::ostringstream csv, plot;
    write_results_csv(csv, pts);
    write_plot_csv(plot, pts, fits);
    write_file(cfg.output + ".csv", csv.str());
    write_file(cfg.output + ".fit.txt", report);
    write_file(cfg.output + ".plot.csv", plot.str());
    write_file(cfg.output + ".config.json", echo_config(cfg));
    out << csv.str() << "\n" << report;
    out << "wrote " << cfg.output << ".csv, .fit.txt, .plot.csv, .config.json\n";
    return kExitPass;
}

// ---------------------------------------------------------------- ccp

inline int run_ccp(const ExperimentConfig& cfg, bool bound, std::ostream& out) {
    PuncturedCssCode code = code_by_name(cfg.code);
    auto ctx = make_context(code);
    CcpConfig cc{ctx, cfg.r, cfg.h, cfg.n_steps};
    RateEstimate rate = ccp_simulate(cc, cfg.error_model, cfg.trials, cfg.seed, cfg.workers);
    Overhead o = overhead(code.n, cfg.r, cfg.h);
    out << "ccp code=" << cfg.code << " r=" << cfg.r << " h=" << cfg.h << " n_steps=" << cfg.n_steps
        << " seed=" << cfg.seed << "\n";
    out << "failures=" << rate.failures << " trials=" << rate.trials << " rate=" << num(rate.rate) << " ci=["
        << num(rate.ci_low) << ", " << num(rate.ci_high) << "]\n";
    out << "qubits=" << num(o.qubits, 12) << " recovery_layers=" << num(o.recovery_layers, 12)
        << " recoveries=" << num(o.recoveries, 12) << "\n";
    if (!bound) return kExitPass;

    RateEstimate e_c =
        estimate_rate(make_memory_gadget(ctx, cfg.n_steps), cfg.error_model, cfg.trials, stream_seed(cfg.seed, 1), cfg.workers);
    CcpConfig bare{ctx, 1, 0, cfg.n_steps * cfg.r};
    RateEstimate e_d = ccp_simulate(bare, cfg.error_model, cfg.trials, stream_seed(cfg.seed, 2), cfg.workers);
    out << "e_c=" << num(e_c.rate) << " e_d=" << num(e_d.rate) << "\n";
    if (e_c.failures == 0 || e_d.failures == 0 || e_d.rate >= 1) {
        out << "bound: not evaluated (no failures observed for e_c or e_d)\n";
        return kExitPass;
    }
    BoundCheck b = ccp_error_bound_check(e_d.rate, e_c.rate, cfg.r);
    if (!b.applicable) {
        out << "bound: not applicable (r+1 > e_d/e_c)\n";
        return kExitPass;
    }
    bool ok = rate.ci_low <= b.bound;
    out << "bound: (r+1)e_c=" << num(b.bound) << " " << (ok ? "holds" : "VIOLATED") << "\n";
    return ok ? kExitPass : kExitCheckFailure;
}

// ---------------------------------------------------------------- entry

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Fault-tolerant quantum computation toolkit", "ftqc"};
    app.require_subcommand(1);

    auto* vc = app.add_subcommand("verify-codes", "Weight, dual-distance and overlap checks of the Reed-Muller codes");
    bool vc_json = false;
    std::vector<std::string> vc_extra;
    vc->add_flag("--json", vc_json, "Machine-readable report");
    vc->add_option("--extra-code", vc_extra, "JSON fixture of an additional code to check")->check(CLI::ExistingFile);

    auto* vg = app.add_subcommand("verify-gates", "Certify the transversal gate tables, A protocol and identities");
    bool vg_json = false;
    std::string vg_gate;
    GateSelection sel;
    vg->add_option("--code", sel.code, "steane, rm15 or all")->check(CLI::IsMember({"steane", "rm15", "all"}));
    vg->add_option("--gate", vg_gate, "Only this gate (A, B, C, D, E, N, X, Z)");
    vg->add_flag("--exhaustive", sel.exhaustive, "Also enumerate single faults of the staged D");
    vg->add_option("--workers", sel.workers, "Worker threads (0 = all cores)");
    vg->add_flag("--json", vg_json, "Machine-readable report");

    auto* fc = app.add_subcommand("faults", "Exhaustive fault enumeration over a gadget");
    std::string f_gadget, f_code = "steane", f_backend, f_output;
    size_t f_order = 1, f_cat = 4, f_workers = 1;
    uint64_t f_seed = 1;
    bool f_keep_all = false;
    fc->add_option("--gadget", f_gadget, "recover, memory, plus, zero, cat or staged-d")->required();
    fc->add_option("--code", f_code, "steane or rm15")->check(CLI::IsMember({"steane", "rm15"}));
    fc->add_option("--order", f_order, "1 or 2")->check(CLI::IsMember({1, 2}));
    fc->add_option("--backend", f_backend, "exact or frame (default: exact for order 1, frame for order 2)")
        ->check(CLI::IsMember({"exact", "frame"}));
    fc->add_option("--output", f_output, "Fault report CSV");
    fc->add_option("--cat-size", f_cat, "Cat size for --gadget cat")->check(CLI::Range(2, 30));
    fc->add_option("--workers", f_workers, "Worker threads (0 = all cores)");
    fc->add_option("--seed", f_seed, "Seed of the exact backend");
    fc->add_flag("--keep-all", f_keep_all, "Write every order-2 record, not only failures");

    ExperimentConfig tc;
    auto* th = app.add_subcommand("threshold", "Memory logical error rate against p, alpha fit and pseudo-threshold");
    std::string t_config;
    th->add_option("--config", t_config, "JSON config (flags override it)")->check(CLI::ExistingFile);
    auto* t_code = th->add_option("--code", tc.code, "steane or rm15");
    auto* t_levels = th->add_option("--levels", tc.levels, "Concatenation levels, e.g. 1,2")->delimiter(',');
    auto* t_grid = th->add_option("--p", tc.p_grid, "Explicit p values")->delimiter(',');
    auto* t_pmin = th->add_option("--p-min", tc.p_min, "Grid start");
    auto* t_pmax = th->add_option("--p-max", tc.p_max, "Grid end");
    auto* t_pd = th->add_option("--per-decade", tc.per_decade, "Grid points per decade");
    auto* t_tf = th->add_option("--target-failures", tc.target_failures, "Stop a point after this many failures");
    auto* t_min = th->add_option("--min-trials", tc.min_trials, "Minimum trials per point");
    auto* t_max = th->add_option("--max-trials", tc.max_trials, "Maximum trials per point");
    auto* t_seed = th->add_option("--seed", tc.seed, "Master seed");
    auto* t_workers = th->add_option("--workers", tc.workers, "Worker threads (0 = all cores)");
    auto* t_out = th->add_option("--output", tc.output, "Output prefix (default: threshold)");

    ExperimentConfig cc;
    cc.command = "ccp";
    auto* cp = app.add_subcommand("ccp", "Concatenated coding procedure CCP_r(h) on one logical qubit");
    std::string c_config;
    std::optional<double> c_p, c_pw, c_p1, c_p2, c_pp, c_pm;
    bool c_bound = false;
    cp->add_option("--config", c_config, "JSON config (flags override it)")->check(CLI::ExistingFile);
    auto* c_code = cp->add_option("--code", cc.code, "steane or rm15");
    auto* c_r = cp->add_option("--r", cc.r, "Intervals per level");
    auto* c_h = cp->add_option("--depth", cc.h, "Concatenation depth h");
    auto* c_ns = cp->add_option("--n-steps", cc.n_steps, "Idle steps of the innermost interval");
    auto* c_trials = cp->add_option("--trials", cc.trials, "Trials");
    auto* c_seed = cp->add_option("--seed", cc.seed, "Master seed");
    auto* c_workers = cp->add_option("--workers", cc.workers, "Worker threads (0 = all cores)");
    cp->add_option("--p", c_p, "Probability of every location");
    cp->add_option("--p-wait", c_pw, "Idle probability");
    cp->add_option("--p-gate1", c_p1, "One-qubit gate probability");
    cp->add_option("--p-gate2", c_p2, "Two-qubit gate probability");
    cp->add_option("--p-prep", c_pp, "Preparation probability");
    cp->add_option("--p-meas", c_pm, "Measurement probability");
    cp->add_flag("--bound", c_bound, "Measure e_c and e_d and check the (r+1)e_c bound");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (vc->parsed()) {
            std::vector<CodeFixture> extra;
            for (const auto& p : vc_extra) extra.push_back(load_code_fixture(p));
            CheckList checks = verify_codes(extra);
            checks.print(out, vc_json, code_notes());
            return checks.pass() ? kExitPass : kExitCheckFailure;
        }
        if (vg->parsed()) {
            if (!vg_gate.empty()) {
                auto g = parse_gate(vg_gate);
                if (!g || *g == GateTag::I || *g == GateTag::Y || *g == GateTag::CZ) {
                    throw UsageError("unknown gate '" + vg_gate + "'");
                }
                sel.gate = g;
            }
            CheckList checks = verify_gates(sel);
            checks.print(out, vg_json);
            return checks.pass() ? kExitPass : kExitCheckFailure;
        }
        if (fc->parsed()) {
            Gadget g = gadget_by_name(f_gadget, code_by_name(f_code), f_cat);
            EnumerationOptions opt;
            opt.order = f_order;
            opt.backend = f_backend.empty() ? (f_order == 1 ? Backend::Exact : Backend::Frame)
                                            : (f_backend == "exact" ? Backend::Exact : Backend::Frame);
            if (opt.backend == Backend::Frame && !g.clifford()) throw UsageError("staged-d needs --backend exact");
            opt.keep_all = f_keep_all;
            opt.workers = f_workers;
            opt.seed = f_seed;
            FaultReport rep = enumerate_faults(g, opt);
            if (!f_output.empty()) {
                std::ofstream os(f_output, std::ios::binary);
                if (!os) throw UsageError("cannot write '" + f_output + "'");
                write_fault_csv(os, g.circuit, rep);
            }
            out << "gadget=" << f_gadget << " code=" << f_code << " order=" << f_order
                << " backend=" << backend_name(opt.backend) << " locations=" << g.circuit.locations.size() << "\n";
            out << "combinations=" << rep.combinations << " detected=" << rep.detected << " failures=" << rep.failures
                << " alpha_pairs=" << num(rep.alpha_pairs) << "\n";
            if (f_order == 1) {
                out << (rep.failures == 0 ? "PASS" : "FAIL") << "  single faults never cause a logical failure\n";
                return rep.failures == 0 ? kExitPass : kExitCheckFailure;
            }
            return kExitPass;
        }
        if (th->parsed()) {
            ExperimentConfig cfg;
            if (!t_config.empty()) cfg = load_config(t_config);
            cfg.command = "threshold";
            if (t_code->count()) cfg.code = tc.code;
            if (t_levels->count()) cfg.levels = tc.levels;
            if (t_grid->count()) cfg.p_grid = tc.p_grid;
            if (t_pmin->count()) cfg.p_min = tc.p_min;
            if (t_pmax->count()) cfg.p_max = tc.p_max;
            if (t_pd->count()) cfg.per_decade = tc.per_decade;
            if (t_tf->count()) cfg.target_failures = tc.target_failures;
            if (t_min->count()) cfg.min_trials = tc.min_trials;
            if (t_max->count()) cfg.max_trials = tc.max_trials;
            if (t_seed->count()) cfg.seed = tc.seed;
            if (t_workers->count()) cfg.workers = tc.workers;
            if (t_out->count()) cfg.output = tc.output;
            if (cfg.output.empty()) cfg.output = "threshold";
            cfg.validate();
            return run_threshold(cfg, out);
        }
        if (cp->parsed()) {
            ExperimentConfig cfg;
            cfg.command = "ccp";
            if (!c_config.empty()) cfg = load_config(c_config);
            cfg.command = "ccp";
            if (c_code->count()) cfg.code = cc.code;
            if (c_r->count()) cfg.r = cc.r;
            if (c_h->count()) cfg.h = cc.h;
            if (c_ns->count()) cfg.n_steps = cc.n_steps;
            if (c_trials->count()) cfg.trials = cc.trials;
            if (c_seed->count()) cfg.seed = cc.seed;
            if (c_workers->count()) cfg.workers = cc.workers;
            if (c_p) cfg.error_model = ErrorModel::uniform(*c_p);
            if (c_pw) cfg.error_model.p_wait = *c_pw;
            if (c_p1) cfg.error_model.p_gate1 = *c_p1;
            if (c_p2) cfg.error_model.p_gate2 = *c_p2;
            if (c_pp) cfg.error_model.p_prep = *c_pp;
            if (c_pm) cfg.error_model.p_meas = *c_pm;
            cfg.validate();
            return run_ccp(cfg, c_bound, out);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::length_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace ftqc::cli
