#pragma once

#include <string>
#include <vector>

#include "iltlab/functional.hpp"
#include "iltlab/process.hpp"

namespace iltlab {

struct epsilon_ladder {
    std::vector<double> eps = {0.02, 0.01, 0.005, 0.0025};
    double T = 1.0;
    std::size_t n_paths = 4000;
    std::size_t batch = 100;

    void validate() const;
    std::vector<std::size_t> n_steps() const;
};

struct moment_row {
    double epsilon = 0.0;
    std::size_t n_paths = 0;
    std::size_t n_steps = 0;
    double m[4] = {0, 0, 0, 0};
    double se[4] = {0, 0, 0, 0};
    double scaled_m2 = 0.0;
};

struct moment_table {
    process_spec spec;
    double T = 1.0;
    std::vector<moment_row> rows;
    std::string to_csv() const;
};

struct scaling_fit {
    std::string model;
    double a = 0.0, b = 0.0, r2 = 0.0;
    std::vector<double> residuals;
    std::string to_json() const;
};

// values[e][r][k]: functional on region r at eps[e] for path k; one fine path per index, coarsened per eps
std::vector<std::vector<std::vector<double>>> functional_samples(const process_spec& spec, double T,
                                                                 const std::vector<double>& eps,
                                                                 const std::vector<region_spec>& regions,
                                                                 std::size_t n_paths, const rng_policy& rng,
                                                                 std::uint64_t first_index = 0);

// sample moments 1..4 with batch-mean standard errors
void sample_moments(const std::vector<double>& v, std::size_t batch, double m[4], double se[4]);

double scaled_second_moment(const process_spec& spec, double T, double eps, double m2);

moment_table estimate_moments(const process_spec& spec, const epsilon_ladder& ladder, const rng_policy& rng);
moment_table moments_from_samples(const process_spec& spec, const epsilon_ladder& ladder,
                                  const std::vector<std::vector<double>>& values);

scaling_fit fit_log_scaling(const moment_table& table);
// log m2 against log(1/eps); the slope is 6/beta - 3
scaling_fit fit_power_scaling(const moment_table& table, double beta);

struct scaling_report {
    double T = 0.0, eps = 0.0;
    double m2_T = 0.0, se_T = 0.0;
    double m2_1 = 0.0, se_1 = 0.0;
    double ratio = 0.0, ratio_se = 0.0, predicted = 0.0, z = 0.0;
    bool pass = false;
    std::string to_json() const;
};

scaling_report scaling_law_check(const process_spec& spec, double T, double eps, const rng_policy& rng,
                                 std::size_t n_paths);

struct independence_row {
    double eps = 0.0;
    double correlation = 0.0, correlation_se = 0.0;
    double m2_first = 0.0, se_first = 0.0, m2_second = 0.0, se_second = 0.0;
    double rect_m2 = 0.0, rect_se = 0.0, rect_scaled = 0.0;
};

struct independence_report {
    double T = 0.0, S = 0.0;
    std::vector<independence_row> rows;
    bool correlation_ok = false;
    bool rect_non_increasing = false;
    bool halves_equal = false;
    std::string to_json() const;
};

independence_report increment_independence_check(const process_spec& spec, double T, double S,
                                                  const std::vector<double>& eps, const rng_policy& rng,
                                                  std::size_t n_paths);

}
