#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "lfsm/errors.hpp"
#include "lfsm/function_space.hpp"
#include "lfsm/innovations.hpp"
#include "lfsm/linear_process.hpp"
#include "lfsm/regression.hpp"
#include "lfsm/rng.hpp"
#include "lfsm/version.hpp"

namespace lfsm::harness {

using nlohmann::json;

/// FNV-1a over the canonical (key-sorted) config dump.
inline std::string config_hash(const json& j) {
    const std::string dump = j.dump();
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = {
        "mass_identity",    "local_time_law",     "decomposition_identity",
        "holder_increments", "zero_energy_scaling", "norm_inequalities",
        "support_coverage", "regression_uniform", "lfsm_sanity"};
    return names;
}

struct ExperimentConfig {
    std::string scenario;
    InnovationModel model;
    ProcessSpec process;
    std::vector<std::size_t> n_ladder;
    std::size_t replications = 1;
    std::uint64_t master_seed = 1;

    double grid_lo = -3.0;
    double grid_hi = 3.0;
    double grid_mesh = 1.0 / 128.0;

    BandwidthRule bandwidth = BandwidthRule::fixed(1.0);
    double beta = 0.4;
    std::vector<double> epsilon_ladder = {0.05, 0.1, 0.2};
    std::vector<double> gap_ladder = {1.0 / 32, 1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2};
    std::string kernel = "triangular";
    std::string m0 = "ratio";
    double noise_sigma = 0.2;
    double noise_ar1 = 0.0;
    bool tower = false;
    double quad_tol = 1e-9;

    double lfsm_H = 0.5;
    std::size_t lfsm_grid_m = 8;
    std::size_t lfsm_mesh_M = 256;
    double lfsm_T = 8.0;

    std::size_t lattice_a = 8;
    std::size_t lattice_b = 8;

    std::optional<std::size_t> inject_failure_rep;
    std::string out_dir;

    json raw;  // the document this config was parsed from

    std::string hash() const { return config_hash(raw); }
};

inline json default_config(const std::string& scenario) {
    json j;
    j["scenario"] = scenario;
    j["model"] = {{"family", "exact_stable"}, {"alpha", 2.0}, {"skew", 0.0}, {"scale_cal", 1.0}};
    j["process"] = {{"case", "a"}, {"phi", {1.0}}};
    j["replications"] = 100;
    j["master_seed"] = 20260809;
    j["grid"] = {{"lo", -3.0}, {"hi", 3.0}, {"mesh", 1.0 / 128.0}};
    j["bandwidth"] = {{"rule", "fixed"}, {"value", 1.0}};
    j["beta"] = 0.4;
    j["kernel"] = "triangular";

    if (scenario == "mass_identity") {
        j["n_ladder"] = {1000};
        j["replications"] = 8;
    } else if (scenario == "local_time_law") {
        j["n_ladder"] = {20000};
        j["replications"] = 1000;
    } else if (scenario == "decomposition_identity") {
        j["model"] = {{"family", "gaussian"}, {"alpha", 2.0}, {"scale_cal", 1.0}};
        j["kernel"] = "gaussian";
        j["n_ladder"] = {32};
        j["replications"] = 100;
        j["tower"] = false;
    } else if (scenario == "holder_increments") {
        j["n_ladder"] = {1 << 14};
        j["replications"] = 500;
        j["gaps"] = {1.0 / 32, 1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2};
    } else if (scenario == "zero_energy_scaling") {
        j["n_ladder"] = {1 << 10, 1 << 11, 1 << 12, 1 << 13, 1 << 14, 1 << 15, 1 << 16};
        j["replications"] = 500;
    } else if (scenario == "norm_inequalities") {
        j["n_ladder"] = {1};
        j["replications"] = 1;
    } else if (scenario == "support_coverage") {
        j["n_ladder"] = {1 << 16};
        j["replications"] = 200;
        j["kernel"] = "epanechnikov";
        j["bandwidth"] = {{"rule", "iqr"}, {"c", 1.0}, {"exponent", -0.2}};
        j["epsilon_ladder"] = {0.05, 0.1, 0.2};
    } else if (scenario == "regression_uniform") {
        j["n_ladder"] = {1 << 12, 1 << 14, 1 << 16};
        j["replications"] = 100;
        j["kernel"] = "gaussian";
        j["bandwidth"] = {{"rule", "iqr_norm"}, {"c", 4.0}, {"exponent", -0.1}};
        j["m0"] = "ratio";
        j["noise_sigma"] = 0.2;
    } else if (scenario == "lfsm_sanity") {
        j["n_ladder"] = {1};
        j["replications"] = 2000;
        j["lfsm"] = {{"H", 0.75}, {"grid_m", 8}, {"mesh_M", 2048}, {"T", 8.0}};
    } else {
        throw ConfigError("unknown scenario: " + scenario);
    }
    return j;
}

/// Parse and validate; every violated invariant is collected and reported.
inline ExperimentConfig parse_config(const json& j) {
    std::vector<std::string> errors;
    ExperimentConfig c;
    c.raw = j;

    auto get_or = [&j](const char* key, auto fallback) {
        using T = decltype(fallback);
        return j.contains(key) ? j.at(key).get<T>() : fallback;
    };

    if (!j.contains("scenario")) {
        errors.push_back("missing key: scenario");
    } else {
        c.scenario = j.at("scenario").get<std::string>();
        const auto& names = scenario_names();
        if (std::find(names.begin(), names.end(), c.scenario) == names.end())
            errors.push_back("unknown scenario: " + c.scenario);
    }

    if (j.contains("model")) {
        const auto& m = j.at("model");
        const auto family = m.value("family", std::string("exact_stable"));
        if (family == "exact_stable") c.model.family = Family::exact_stable;
        else if (family == "gaussian") c.model.family = Family::gaussian;
        else if (family == "student_t") c.model.family = Family::student_t;
        else if (family == "two_point") c.model.family = Family::two_point;
        else errors.push_back("unknown innovation family: " + family);
        c.model.alpha = m.value("alpha", 2.0);
        c.model.skew = m.value("skew", 0.0);
        c.model.scale_cal = m.value("scale_cal", 1.0);
        c.model.df = m.value("df", 5.0);
        try {
            c.model.validate();
        } catch (const ConfigError& e) {
            errors.push_back(e.what());
        }
    }

    if (j.contains("process")) {
        const auto& p = j.at("process");
        const auto pcase = p.value("case", std::string("a"));
        if (pcase == "a") c.process.pcase = ProcessCase::short_memory;
        else if (pcase == "b") c.process.pcase = ProcessCase::long_memory;
        else if (pcase == "c") c.process.pcase = ProcessCase::anti_persistent;
        else errors.push_back("unknown process case: " + pcase);
        c.process.H = p.value("H", 0.5);
        c.process.alpha = c.model.alpha;
        if (p.contains("phi")) c.process.phi_case_a = p.at("phi").get<std::vector<double>>();
        c.process.pi = NormingSequence{p.value("pi_scale", 1.0), p.value("pi_log_exponent", 0.0)};
        try {
            c.process.validate();
        } catch (const ConfigError& e) {
            errors.push_back(e.what());
        }
    }

    if (j.contains("n_ladder")) {
        c.n_ladder = j.at("n_ladder").get<std::vector<std::size_t>>();
        if (c.n_ladder.empty()) errors.push_back("n_ladder must be nonempty");
        for (std::size_t i = 1; i < c.n_ladder.size(); ++i)
            if (c.n_ladder[i] <= c.n_ladder[i - 1]) {
                errors.push_back("n_ladder must be strictly increasing");
                break;
            }
    } else {
        errors.push_back("missing key: n_ladder");
    }

    c.replications = get_or("replications", std::size_t(1));
    if (c.replications < 1) errors.push_back("replications must be >= 1");
    c.master_seed = get_or("master_seed", std::uint64_t(1));

    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        c.grid_lo = g.value("lo", -3.0);
        c.grid_hi = g.value("hi", 3.0);
        c.grid_mesh = g.value("mesh", 1.0 / 128.0);
        if (!(c.grid_mesh > 0.0) || !(c.grid_lo < c.grid_hi))
            errors.push_back("grid requires lo < hi and mesh > 0");
    }

    if (j.contains("bandwidth")) {
        const auto& b = j.at("bandwidth");
        const auto rule = b.value("rule", std::string("fixed"));
        if (rule == "fixed") {
            c.bandwidth = BandwidthRule::fixed(b.value("value", 1.0));
            if (!(c.bandwidth.value > 0.0)) errors.push_back("fixed bandwidth must be positive");
        } else if (rule == "iqr") {
            c.bandwidth = BandwidthRule::iqr(b.value("c", 1.0), b.value("exponent", -0.2));
            if (!(c.bandwidth.c > 0.0)) errors.push_back("iqr bandwidth multiplier must be positive");
        } else if (rule == "iqr_norm") {
            c.bandwidth =
                BandwidthRule::iqr_normalized(b.value("c", 1.0), b.value("exponent", -0.2));
            if (!(c.bandwidth.c > 0.0)) errors.push_back("iqr bandwidth multiplier must be positive");
        } else {
            errors.push_back("unknown bandwidth rule: " + rule);
        }
    }

    c.beta = get_or("beta", 0.4);
    if (j.contains("epsilon_ladder"))
        c.epsilon_ladder = j.at("epsilon_ladder").get<std::vector<double>>();
    for (double e : c.epsilon_ladder)
        if (e < 0.0) errors.push_back("epsilon_ladder entries must be >= 0");
    if (j.contains("gaps")) c.gap_ladder = j.at("gaps").get<std::vector<double>>();
    c.kernel = get_or("kernel", std::string("triangular"));
    try {
        kernel_by_name(c.kernel);
    } catch (const ConfigError& e) {
        errors.push_back(e.what());
    }
    c.m0 = get_or("m0", std::string("ratio"));
    c.noise_sigma = get_or("noise_sigma", 0.2);
    c.noise_ar1 = get_or("noise_ar1", 0.0);
    c.tower = get_or("tower", false);
    c.quad_tol = get_or("quad_tol", 1e-9);

    if (j.contains("lfsm")) {
        const auto& l = j.at("lfsm");
        c.lfsm_H = l.value("H", 0.5);
        c.lfsm_grid_m = l.value("grid_m", std::size_t(8));
        c.lfsm_mesh_M = l.value("mesh_M", std::size_t(256));
        c.lfsm_T = l.value("T", 8.0);
        if (!(c.lfsm_H > 0.0 && c.lfsm_H < 1.0)) errors.push_back("lfsm H must lie in (0,1)");
    }
    if (j.contains("inject_failure_rep"))
        c.inject_failure_rep = j.at("inject_failure_rep").get<std::size_t>();
    c.out_dir = get_or("out_dir", std::string());

    if (!errors.empty()) {
        std::string all = "invalid experiment config:";
        for (const auto& e : errors) all += "\n  - " + e;
        throw ConfigError(all);
    }
    return c;
}

/// Dot-path overrides like "model.alpha=1.5" or "replications=10"; values
/// parse as JSON when possible, else as strings.
inline void apply_override(json& j, const std::string& keyval) {
    const auto eq = keyval.find('=');
    if (eq == std::string::npos) throw ConfigError("override must look like key=value");
    const std::string path = keyval.substr(0, eq);
    const std::string val = keyval.substr(eq + 1);
    json* node = &j;
    std::size_t pos = 0;
    while (true) {
        const auto dot = path.find('.', pos);
        const std::string key = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
        if (dot == std::string::npos) {
            json parsed = json::parse(val, nullptr, false);
            (*node)[key] = parsed.is_discarded() ? json(val) : parsed;
            return;
        }
        node = &(*node)[key];
        pos = dot + 1;
    }
}

// ---------------------------------------------------------------------------
// Monte Carlo engine
// ---------------------------------------------------------------------------

struct RepRecord {
    std::size_t rep = 0;
    std::uint64_t seed = 0;
    bool ok = true;
    std::string error;
    std::vector<double> values;
};

/// Run R replications of a step over a worker pool. Replication r always
/// receives seed split_seed(master_seed, r); records land in slot r, so the
/// output is identical for any worker count. Exceptions are recorded as
/// failures and the run continues.
template <class Step>
std::vector<RepRecord> monte_carlo(std::size_t R, std::uint64_t master_seed, unsigned workers,
                                   Step step,
                                   std::optional<std::size_t> inject_failure = std::nullopt) {
    if (R < 1) throw DomainError("monte_carlo: R >= 1 required");
    std::vector<RepRecord> records(R);
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t r = next.fetch_add(1);
            if (r >= R) return;
            auto& rec = records[r];
            rec.rep = r;
            rec.seed = split_seed(master_seed, r);
            try {
                if (inject_failure && *inject_failure == r)
                    throw Error("injected failure for replication " + std::to_string(r));
                rec.values = step(r, rec.seed);
            } catch (const std::exception& e) {
                rec.ok = false;
                rec.error = e.what();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return records;
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

struct Verdict {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string relation;  // "<=", ">=", "in"
};

struct PlotSeries {
    std::string name;
    std::string x_label;
    std::string y_label;
    std::vector<double> x;
    std::vector<double> y;
};

struct Report {
    std::string scenario;
    std::string cfg_hash;
    std::uint64_t master_seed = 0;
    std::vector<std::string> rep_columns;
    std::vector<RepRecord> reps;
    std::vector<Verdict> verdicts;
    json summary_stats;
    std::vector<PlotSeries> plots;

    bool all_pass() const {
        for (const auto& v : verdicts)
            if (!v.pass) return false;
        return true;
    }
};

namespace detail {

inline void write_double(std::ostream& os, double v) {
    os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
}

}  // namespace detail

inline json report_to_json(const Report& rep) {
    json j;
    j["scenario"] = rep.scenario;
    j["config_hash"] = rep.cfg_hash;
    j["version"] = version_string;
    j["master_seed"] = rep.master_seed;
    j["replications"] = rep.reps.size();
    std::size_t failures = 0;
    for (const auto& r : rep.reps)
        if (!r.ok) ++failures;
    j["failed_replications"] = failures;
    j["stats"] = rep.summary_stats;
    j["verdicts"] = json::array();
    for (const auto& v : rep.verdicts)
        j["verdicts"].push_back({{"name", v.name},
                                 {"pass", v.pass},
                                 {"value", v.value},
                                 {"threshold", v.threshold},
                                 {"relation", v.relation}});
    j["all_pass"] = rep.all_pass();
    return j;
}

inline void write_reps_csv(const Report& rep, std::ostream& os) {
    os << "# config_hash=" << rep.cfg_hash << "\n";
    os << "rep,seed,ok,error";
    for (const auto& c : rep.rep_columns) os << ',' << c;
    os << '\n';
    for (const auto& r : rep.reps) {
        os << r.rep << ',' << r.seed << ',' << (r.ok ? 1 : 0) << ',';
        for (char ch : r.error) os << (ch == ',' || ch == '\n' ? ';' : ch);
        for (std::size_t i = 0; i < rep.rep_columns.size(); ++i) {
            os << ',';
            if (i < r.values.size()) detail::write_double(os, r.values[i]);
        }
        os << '\n';
    }
}

/// summary.json, reps.csv, plots/<name>.csv (+ .meta.json sidecars).
inline void write_report_files(const Report& rep, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(dir) / "plots");
    {
        std::ofstream f(fs::path(dir) / "summary.json");
        f << report_to_json(rep).dump(2) << '\n';
    }
    {
        std::ofstream f(fs::path(dir) / "reps.csv");
        write_reps_csv(rep, f);
    }
    for (const auto& p : rep.plots) {
        std::ofstream f(fs::path(dir) / "plots" / (p.name + ".csv"));
        f << "# config_hash=" << rep.cfg_hash << "\n";
        f << p.x_label << ',' << p.y_label << '\n';
        for (std::size_t i = 0; i < p.x.size(); ++i) {
            detail::write_double(f, p.x[i]);
            f << ',';
            detail::write_double(f, p.y[i]);
            f << '\n';
        }
        std::ofstream meta(fs::path(dir) / "plots" / (p.name + ".meta.json"));
        meta << json{{"name", p.name},
                     {"x_label", p.x_label},
                     {"y_label", p.y_label},
                     {"config_hash", rep.cfg_hash}}
                    .dump(2)
             << '\n';
    }
}

}  // namespace lfsm::harness
