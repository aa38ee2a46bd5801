#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iltlab/density.hpp"
#include "iltlab/process.hpp"

namespace iltlab {

// triangle {lo <= s <= t <= hi}; rectangle [a,b] x [c,d] with b <= c
struct region_spec {
    enum class shape { triangle, rectangle };
    shape kind = shape::triangle;
    double a = 0.0, b = 1.0, c = 0.0, d = 0.0;

    static region_spec triangle(double T) { return {shape::triangle, 0.0, T, 0.0, 0.0}; }
    static region_spec triangle(double lo, double hi) { return {shape::triangle, lo, hi, 0.0, 0.0}; }
    static region_spec rectangle(double a, double b, double c, double d) { return {shape::rectangle, a, b, c, d}; }
    std::string describe() const;
};

struct functional_result {
    double value = 0.0;
    double epsilon = 0.0;
    std::size_t n_steps = 0;
    region_spec region;
    std::uint64_t master_seed = 0;
    std::uint64_t path_index = 0;
    bool under_resolved = false;  // grid spacing above eps/2
};

// tiled pair sum, OpenMP over tiles, pairwise reduction in tile order
functional_result alpha_prime(const path2d& path, double eps, const region_spec& region, const dx1_kernel& kernel);
functional_result alpha_prime(const path2d& path, const process_spec& spec, double eps, const region_spec& region);

// plain double loop, kept as the reference implementation
functional_result alpha_prime_serial(const path2d& path, double eps, const region_spec& region,
                                     const dx1_kernel& kernel);

double pairwise_sum(const double* v, std::size_t n);

// smallest power of two n with T/n <= eps/2
std::size_t steps_for(double T, double eps);

struct bias_report {
    double mean_abs_diff = 0.0;
    double mean_abs_fine = 0.0;
    double relative = 0.0;  // mean |fine - coarse| / mean |fine|
    std::size_t n_paths = 0;
};

bias_report discretization_bias(const std::vector<path2d>& fine_paths, const process_spec& spec, double eps);
bias_report discretization_self_check(const process_spec& spec, double T, double eps, std::size_t n_steps,
                                      const rng_policy& rng, std::size_t n_paths);

}
