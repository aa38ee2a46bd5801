#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "iltlab/rng.hpp"

namespace iltlab {

enum class process_kind { brownian, stable };

// E exp(i p.X_t) = exp(-t |p|^beta); beta = 2 is brownian with per-coordinate variance 2t
struct process_spec {
    process_kind kind = process_kind::brownian;
    double beta = 2.0;

    static process_spec brownian() { return {process_kind::brownian, 2.0}; }
    static process_spec stable(double b) { return {process_kind::stable, b}; }
    void validate() const;
    std::string name() const;
};

struct path2d {
    double T = 0.0;
    std::size_t n_steps = 0;
    std::vector<double> x1, x2;
    std::uint64_t master_seed = 0;
    std::uint64_t path_index = 0;

    double dt() const { return T / static_cast<double>(n_steps); }
    double time(std::size_t i) const { return T * static_cast<double>(i) / static_cast<double>(n_steps); }
};

// positive stable variable with E exp(-lambda S) = exp(-lambda^alpha), 0 < alpha <= 1
double positive_stable(rng_stream& rng, double alpha);

path2d sample_path(const process_spec& spec, double T, std::size_t n_steps, const rng_policy& rng,
                   std::uint64_t path_index);

// keep every stride-th point, same randomness
path2d coarsen(const path2d& path, std::size_t stride);

struct char_estimate {
    std::complex<double> value;
    double se_re = 0.0;
    double se_im = 0.0;
    std::size_t count = 0;
};

char_estimate empirical_char_function(const std::vector<path2d>& paths, double p1, double p2, std::size_t lag);

void write_path_csv(const path2d& path, const std::string& filename);

}
