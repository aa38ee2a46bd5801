#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iltlab/errors.hpp"

namespace iltlab {

// every diagnostic is kept so the usage message can list all bad fields at once
struct config_error : parameter_error {
    std::vector<std::string> diagnostics;
    explicit config_error(std::vector<std::string> d);
};

struct experiment_config {
    // run
    std::uint64_t seed = 20240917;
    int threads = 0;
    std::string out = "iltlab-out";
    std::string cache_dir = ".iltlab-cache";
    bool cache = true;

    // mc
    std::string process = "brownian";
    double beta = 1.5;
    double T = 1.0;
    std::vector<double> ladder = {0.02, 0.01, 0.005, 0.0025};
    std::size_t n_paths = 4000;
    std::size_t batch = 100;
    double scaling_T = 2.0;
    double scaling_eps = 0.02;
    double split_S = 0.5;
    double stable_beta = 1.5;
    std::vector<double> char_freqs = {0.5, 1.0, 2.0, 3.0, 4.0};
    std::size_t char_steps = 128;
    std::size_t char_lag = 16;

    // quad
    std::vector<double> m_grid = {1e3, 1e4, 1e5, 1e6};
    std::vector<double> fourier_eps = {1e-2, 1e-3, 1e-4};

    // const
    std::vector<double> const_beta = {1.5};
    double cross_beta = 1.3;
    std::vector<double> cauchy_ladder = {0.1, 0.05, 0.02, 0.01};
    std::vector<double> j2_ladder;
    std::size_t j1_mc_samples = 8000000;
    double quad_rel = 1e-10;

    // comb
    int comb_n = 4;
    std::vector<int> comb_sample_n = {5, 6};
    std::size_t comb_samples = 10000;

    experiment_config();

    // key = value, throws config_error listing every problem
    void set(const std::string& key, const std::string& value);
    void validate() const;
    std::vector<std::string> problems() const;

    // all fields with value, default and doc
    std::string effective_json() const;
    // fields that determine results, in a fixed order; excludes out, threads and cache settings
    std::string canonical_parameters() const;
};

std::vector<std::string> config_keys();

// '#' starts a comment, blank lines ignored, lists are comma separated
experiment_config parse_config_text(const std::string& text, const std::string& origin = "<config>");
experiment_config load_config(const std::string& path);
// applies key=value overrides after the file
void apply_overrides(experiment_config& cfg, const std::vector<std::string>& assignments);

}
