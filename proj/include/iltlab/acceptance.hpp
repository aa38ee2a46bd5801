#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "iltlab/config.hpp"

namespace iltlab {

using artifact_map = std::map<std::string, std::string>;

struct criterion_result {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    std::vector<std::string> info;  // reported, not gated
    double seconds = 0.0;           // wall time, kept out of every artifact
};

struct acceptance_report {
    std::vector<criterion_result> criteria;
    artifact_map artifacts;
    bool all_pass() const;
    std::string summary_json() const;
};

criterion_result criterion_bessel_identities(const experiment_config& cfg, artifact_map& out);
criterion_result criterion_asymptotic_coefficients(const experiment_config& cfg, artifact_map& out);
criterion_result criterion_fourier_second_moment(const experiment_config& cfg, artifact_map& out);
criterion_result criterion_constant_identities(const experiment_config& cfg, artifact_map& out);
criterion_result criterion_lemma_probes(const experiment_config& cfg, artifact_map& out);
criterion_result criterion_brownian_suite(const experiment_config& cfg, artifact_map& out);
criterion_result criterion_stable_suite(const experiment_config& cfg, artifact_map& out);
criterion_result criterion_c_beta(const experiment_config& cfg, artifact_map& out);
criterion_result criterion_combinatorics(const experiment_config& cfg, artifact_map& out);

using criterion_fn = criterion_result (*)(const experiment_config&, artifact_map&);
struct criterion_entry {
    int id;
    const char* name;
    criterion_fn run;
};
// criteria 1..9; 10 is the determinism rerun inside run_acceptance
const std::vector<criterion_entry>& criteria_table();

criterion_result run_criterion(const criterion_entry& e, const experiment_config& cfg, artifact_map& out);

// runs the selected criteria (all when empty); with determinism_rerun the whole set is
// computed a second time and the artifacts are compared byte for byte
acceptance_report run_acceptance(const experiment_config& cfg, bool determinism_rerun,
                                 const std::vector<int>& only = {},
                                 const std::function<void(const criterion_result&)>& on_result = {});

std::string format_criterion_line(const criterion_result& r);

}
