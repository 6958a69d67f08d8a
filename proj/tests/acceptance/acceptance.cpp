// Acceptance suite: one numbered criterion per invocation (or all). Each
// criterion prints exactly one PASS/FAIL line; the process exits nonzero if
// any requested criterion fails.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "lfsm/scenarios.hpp"

using namespace lfsm;
using namespace lfsm::harness;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

Outcome from_report(const Report& rep) {
    Outcome o;
    for (const auto& v : rep.verdicts) {
        if (!o.detail.empty()) o.detail += ", ";
        o.detail +=
            v.name + "=" + fmt(v.value) + (v.pass ? "" : "!") + v.relation + fmt(v.threshold);
        o.pass = o.pass && v.pass;
    }
    for (const auto& r : rep.reps)
        if (!r.ok) {
            o.pass = false;
            o.detail += ", replication " + std::to_string(r.rep) + " failed: " + r.error;
        }
    return o;
}

Outcome criterion_mass_identity() {
    return from_report(run_experiment(default_config("mass_identity")));
}

Outcome criterion_local_time_law() {
    return from_report(run_experiment(default_config("local_time_law")));  // n=2e4, R=1000
}

Outcome criterion_decomposition() {
    return from_report(run_experiment(default_config("decomposition_identity")));  // n=32, R=100
}

Outcome criterion_tower() {
    auto j = default_config("decomposition_identity");
    j["n_ladder"] = {16};
    j["replications"] = 500;
    j["tower"] = true;
    return from_report(run_experiment(j));
}

Outcome criterion_holder() {
    return from_report(run_experiment(default_config("holder_increments")));  // n=2^14, R=500
}

Outcome criterion_zero_energy() {
    return from_report(run_experiment(default_config("zero_energy_scaling")));
}

Outcome criterion_norm_inequalities() {
    return from_report(run_experiment(default_config("norm_inequalities")));
}

Outcome criterion_support_coverage() {
    return from_report(run_experiment(default_config("support_coverage")));  // n=2^16, R=200
}

Outcome criterion_regression() {
    return from_report(run_experiment(default_config("regression_uniform")));
}

Outcome criterion_lfsm() {
    return from_report(run_experiment(default_config("lfsm_sanity")));  // R=2000
}

Outcome criterion_determinism() {
    auto j = default_config("local_time_law");
    j["n_ladder"] = {4000};
    j["replications"] = 96;
    namespace fs = std::filesystem;
    const auto base = fs::temp_directory_path() / "lfsm_acceptance_det";
    fs::remove_all(base);
    auto slurp = [](const fs::path& p) {
        std::ifstream f(p);
        std::ostringstream os;
        os << f.rdbuf();
        return os.str();
    };
    std::vector<std::string> reps_files, summaries;
    for (unsigned workers : {1u, 4u, 16u}) {
        json jw = j;
        const auto dir = base / ("w" + std::to_string(workers));
        jw["out_dir"] = dir.string();
        run_experiment(jw, workers);
        // strip the hash header: out_dir differs per run by construction
        auto txt = slurp(dir / "reps.csv");
        reps_files.push_back(txt.substr(txt.find('\n') + 1));
        auto js = json::parse(slurp(dir / "summary.json"));
        js.erase("config_hash");
        summaries.push_back(js.dump());
    }
    Outcome o;
    o.pass = reps_files[0] == reps_files[1] && reps_files[0] == reps_files[2] &&
             summaries[0] == summaries[1] && summaries[0] == summaries[2];
    o.detail = o.pass ? "byte-identical across workers {1,4,16}"
                      : "outputs differ across worker counts";
    return o;
}

struct Criterion {
    int id;
    const char* label;
    std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> cs = {
        {1, "mass identity", criterion_mass_identity},
        {2, "brownian local-time law", criterion_local_time_law},
        {3, "martingale decomposition identity", criterion_decomposition},
        {4, "tower property of quadratic variation", criterion_tower},
        {5, "holder increments", criterion_holder},
        {6, "zero-energy scaling and order bound", criterion_zero_energy},
        {7, "transform-norm inequalities", criterion_norm_inequalities},
        {8, "support coverage and denominator bound", criterion_support_coverage},
        {9, "regression recovery and uniform error", criterion_regression},
        {10, "limit-process simulator sanity", criterion_lfsm},
        {11, "determinism across worker counts", criterion_determinism},
    };
    return cs;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
    bool all_pass = true;
    for (const auto& c : criteria()) {
        if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end())
            continue;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        std::printf("%s criterion %02d (%s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.label,
                    o.detail.c_str());
        std::fflush(stdout);
        all_pass = all_pass && o.pass;
    }
    return all_pass ? 0 : 1;
}
