#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace iltlab {

// events[k] = +i for s_i, -i for t_i, intervals labelled 1..n
struct interval_config {
    int n = 0;
    std::vector<int> events;

    static interval_config from_events(std::vector<int> ev);
    static interval_config parse(const std::string& text);  // "s1 s2 t2 t1"
    int s_pos(int i) const;  // 1-based event index
    int t_pos(int i) const;
    std::vector<std::vector<int>> components() const;  // interval labels per component, left to right
    bool single_component() const;
    bool has_isolated() const;
    std::string to_string() const;
};

std::vector<interval_config> enumerate_configs(int n, bool single_component);
std::size_t config_count(int n);  // (2n)! / 2^n
interval_config random_config(int n, std::uint64_t seed, std::uint64_t index);

using int_vec = std::vector<long long>;

struct u_sequence_t {
    std::vector<int_vec> u;          // u_0 .. u_2n over the basis p_1 .. p_n
    std::vector<bool> increasing;    // index j = 1 .. 2n; entry 0 unused
    std::string to_string() const;
};

u_sequence_t u_sequence(const interval_config& c);

int integer_rank(std::vector<int_vec> rows);
bool in_span(const std::vector<int_vec>& rows, const int_vec& v);

struct span_result {
    bool ok = true;
    std::string clause;
    std::string detail;
    std::size_t choice_sets_checked = 0;
};

std::vector<int> t_free_intervals(const interval_config& c);
span_result check_span_lemma(const interval_config& c, std::uint64_t seed = 1);

struct exponent_vector {
    std::vector<int> m;       // index 1 .. 2n-1; entry 0 unused
    std::vector<int> choice;  // per interval i (1-based): chosen u index
};

// terms containing a zero u vanish and are dropped
std::vector<exponent_vector> numerator_exponents(const interval_config& c);
std::optional<std::string> check_exponent_clauses(const interval_config& c, const exponent_vector& t);

struct ab_witness {
    bool found = false;
    std::vector<int> A, B, B_prime;  // u indices
    std::string failure;             // empty when found
    std::string to_json(const interval_config& c) const;
};

// requires a single component, no isolated interval, n >= 3
ab_witness find_ab_sets(const interval_config& c, const exponent_vector& t);
std::optional<std::string> verify_ab_sets(const interval_config& c, const exponent_vector& t, const ab_witness& w);

enum class terminal_case { case1, case2, case3, exhausted };
std::string terminal_name(terminal_case t);

struct reduction_trace {
    std::vector<interval_config> stages;            // K_0, K_1, ...
    std::vector<std::vector<int>> isolated;         // I_m as interval labels
    std::vector<std::vector<int>> counters;         // l_{m,j} per gap of K_m
    terminal_case terminal = terminal_case::exhausted;
    bool conserved() const;
};

reduction_trace reduce_isolated(const interval_config& c);

struct odd_component_result {
    bool has_odd_component = false;
    bool sign_flips = true;  // integrand odd under negation of that component's p's
};
odd_component_result odd_component_check(const interval_config& c);

struct comb_failure {
    std::string ordering;
    std::string check;
    std::string clause;
    std::string detail;
};

struct comb_summary {
    int n_exhaustive = 4;
    std::vector<std::size_t> configs_per_n;
    std::size_t span_checked = 0, span_failed = 0;
    std::size_t terms_checked = 0, clause_violations = 0;
    std::size_t ab_attempted = 0, ab_found = 0;
    std::size_t reductions = 0, reduction_failures = 0;
    std::size_t odd_checked = 0, odd_failures = 0;
    std::size_t sampled = 0, sampled_failed = 0;
    std::vector<comb_failure> failures;
    bool pass() const;
    std::string to_json() const;
};

struct comb_options {
    int n_exhaustive = 4;
    std::vector<int> sample_n = {5, 6};
    std::size_t samples = 10000;
    std::uint64_t seed = 20240917;
};

comb_summary run_combinatorics(const comb_options& opt);

}
