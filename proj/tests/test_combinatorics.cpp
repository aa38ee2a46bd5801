#include "doctest.h"

#include <Eigen/Dense>
#include <algorithm>
#include <set>

#include "iltlab/combinatorics.hpp"
#include "iltlab/errors.hpp"
#include "iltlab/rng.hpp"

using namespace iltlab;

namespace {

// orderings of the multiset {1,1,2,2,...}, first occurrence is s, by permutation filtering
std::size_t brute_force_count(int n, bool single) {
    std::vector<int> tokens;
    for (int i = 1; i <= n; ++i) tokens.insert(tokens.end(), {i, i});
    std::sort(tokens.begin(), tokens.end());
    std::size_t count = 0;
    do {
        int open = 0, comps = 0;
        std::vector<int> seen(n + 1, 0);
        for (int t : tokens) {
            if (open == 0) ++comps;
            open += seen[t]++ ? -1 : 1;
        }
        if (!single || comps == 1) ++count;
    } while (std::next_permutation(tokens.begin(), tokens.end()));
    return count;
}

}

TEST_CASE("configuration counts against brute force") {
    for (int n = 1; n <= 4; ++n) {
        CHECK(enumerate_configs(n, false).size() == brute_force_count(n, false));
        CHECK(enumerate_configs(n, true).size() == brute_force_count(n, true));
        CHECK(config_count(n) == brute_force_count(n, false));
    }
    CHECK(enumerate_configs(2, false).size() == 6);
    CHECK(enumerate_configs(1, false)[0].to_string() == "s1 t1");
    std::set<std::string> distinct;
    for (const auto& c : enumerate_configs(3, false)) distinct.insert(c.to_string());
    CHECK(distinct.size() == 90);
}

TEST_CASE("u sequences of the order-2 cases") {
    auto nested = u_sequence(interval_config::parse("s1 s2 t2 t1"));
    CHECK(nested.u[1] == int_vec{1, 0});
    CHECK(nested.u[2] == int_vec{1, 1});
    CHECK(nested.u[3] == int_vec{1, 0});
    CHECK(nested.increasing[1]);
    CHECK(nested.increasing[2]);
    CHECK_FALSE(nested.increasing[3]);
    auto cross = u_sequence(interval_config::parse("s1 s2 t1 t2"));
    CHECK(cross.u[3] == int_vec{0, 1});
    for (const auto& c : enumerate_configs(3, false)) {
        auto us = u_sequence(c);
        CHECK(us.u.front() == int_vec(3, 0));
        CHECK(us.u.back() == int_vec(3, 0));
    }
}

TEST_CASE("parsing rejects malformed orderings") {
    CHECK_THROWS_AS(interval_config::parse("t1 s1"), parameter_error);
    CHECK_THROWS_AS(interval_config::parse("s1 s1 t1 t1"), parameter_error);
    CHECK_THROWS_AS(interval_config::parse("s1 x2"), parameter_error);
    CHECK_THROWS_AS(interval_config::parse("s1 s3 t3 t1"), parameter_error);
}

TEST_CASE("integer rank against floating-point rank") {
    rng_stream r(4);
    for (int trial = 0; trial < 200; ++trial) {
        int rows = 1 + int(r.next() % 6), cols = 1 + int(r.next() % 5);
        std::vector<int_vec> m(rows, int_vec(cols));
        Eigen::MatrixXd d(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) {
                long long v = static_cast<long long>(r.next() % 5) - 2;
                if (r.next() % 3 == 0) v = 0;
                m[i][j] = v;
                d(i, j) = double(v);
            }
        if (rows > 2) m[2] = m[0], d.row(2) = d.row(0);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(d);
        CHECK(integer_rank(m) == lu.rank());
    }
    CHECK(in_span({{1, 1, 0}, {0, 1, 1}}, {1, 2, 1}));
    CHECK_FALSE(in_span({{1, 1, 0}, {0, 1, 1}}, {1, 0, 0}));
}

TEST_CASE("t-free intervals") {
    auto c = interval_config::parse("s1 s2 t1 s3 t2 t3");
    // interval 2 contains t1, interval 3 contains t2
    CHECK(t_free_intervals(c) == std::vector<int>{1});
    CHECK(t_free_intervals(interval_config::parse("s1 s2 t2 t1")) == std::vector<int>{2});
    CHECK(t_free_intervals(interval_config::parse("s1 t1 s2 t2")) == std::vector<int>{1, 2});
}

TEST_CASE("exponent clauses hold on every term for n <= 4") {
    for (int n = 1; n <= 4; ++n)
        for (const auto& c : enumerate_configs(n, false))
            for (const auto& t : numerator_exponents(c)) {
                auto v = check_exponent_clauses(c, t);
                CHECK_MESSAGE(!v, c.to_string() << ": " << v.value_or(""));
            }
}

TEST_CASE("A/B witnesses for n = 3 without isolated intervals") {
    std::size_t attempted = 0;
    for (const auto& c : enumerate_configs(3, true)) {
        if (c.has_isolated()) {
            auto terms = numerator_exponents(c);
            if (!terms.empty()) CHECK_THROWS_AS(find_ab_sets(c, terms[0]), parameter_error);
            continue;
        }
        for (const auto& t : numerator_exponents(c)) {
            ++attempted;
            ab_witness w = find_ab_sets(c, t);
            CHECK_MESSAGE(w.found, w.to_json(c));
            CHECK(!verify_ab_sets(c, t, w));
        }
    }
    CHECK(attempted > 0);
}

TEST_CASE("verification catches a broken witness") {
    auto c = interval_config::parse("s1 s2 s3 t1 t2 t3");
    auto terms = numerator_exponents(c);
    REQUIRE(!terms.empty());
    ab_witness w = find_ab_sets(c, terms[0]);
    REQUIRE(w.found);
    ab_witness bad = w;
    bad.A.pop_back();
    CHECK(verify_ab_sets(c, terms[0], bad).has_value());
    bad = w;
    bad.B.push_back(0);
    CHECK(verify_ab_sets(c, terms[0], bad).has_value());
}

TEST_CASE("isolated-interval reduction") {
    auto none = reduce_isolated(interval_config::parse("s1 s2 s3 t1 t2 t3"));
    CHECK(none.stages.size() == 1);
    CHECK(none.terminal == terminal_case::case1);
    auto chain = reduce_isolated(interval_config::parse("s1 s2 s3 t3 t2 t1"));
    CHECK(chain.terminal == terminal_case::case3);
    CHECK(chain.isolated.size() == 2);
    // each interval directly contains only the next one
    CHECK(chain.counters.back() == std::vector<int>{0, 1, 0});
    auto siblings = reduce_isolated(interval_config::parse("s1 s2 t2 s3 t3 t1"));
    CHECK(siblings.terminal == terminal_case::case3);
    CHECK(siblings.counters.back() == std::vector<int>{0, 2, 0});
    auto two = reduce_isolated(interval_config::parse("s1 s2 s3 t3 t1 t2"));
    CHECK(two.terminal == terminal_case::case2);
    for (int n = 1; n <= 4; ++n)
        for (const auto& c : enumerate_configs(n, false)) CHECK(reduce_isolated(c).conserved());
}

TEST_CASE("odd components flip sign") {
    auto r = odd_component_check(interval_config::parse("s1 t1 s2 s3 t2 t3"));
    CHECK(r.has_odd_component);
    CHECK(r.sign_flips);
    CHECK_FALSE(odd_component_check(interval_config::parse("s1 s2 t1 t2")).has_odd_component);
}

TEST_CASE("span lemma and sampled configurations") {
    for (int n = 1; n <= 4; ++n)
        for (const auto& c : enumerate_configs(n, false)) CHECK(check_span_lemma(c, 1).ok);
    for (std::uint64_t i = 0; i < 200; ++i) {
        auto c = random_config(6, 3, i);
        CHECK(c.n == 6);
        CHECK(check_span_lemma(c, 1).ok);
    }
    CHECK(random_config(5, 3, 7).to_string() == random_config(5, 3, 7).to_string());
}

TEST_CASE("summary runner") {
    comb_options o;
    o.n_exhaustive = 3;
    o.sample_n = {5};
    o.samples = 500;
    auto s = run_combinatorics(o);
    CHECK(s.pass());
    CHECK(s.configs_per_n == std::vector<std::size_t>{1, 6, 90});
    CHECK(s.to_json().find("\"failures\"") != std::string::npos);
}
