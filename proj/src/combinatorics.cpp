#include "iltlab/combinatorics.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

#include "iltlab/errors.hpp"
#include "iltlab/rng.hpp"

namespace iltlab {

using nlohmann::json;

interval_config interval_config::from_events(std::vector<int> ev) {
    if (ev.empty() || ev.size() % 2 != 0) throw parameter_error("event list must have even positive length");
    interval_config c;
    c.n = static_cast<int>(ev.size() / 2);
    std::vector<int> seen_s(c.n + 1, 0), seen_t(c.n + 1, 0);
    for (int e : ev) {
        int i = std::abs(e);
        if (i < 1 || i > c.n) throw parameter_error("interval label out of range");
        if (e > 0) {
            if (seen_s[i]++) throw parameter_error("s_" + std::to_string(i) + " appears twice");
        } else {
            if (!seen_s[i]) throw parameter_error("t_" + std::to_string(i) + " precedes s_" + std::to_string(i));
            if (seen_t[i]++) throw parameter_error("t_" + std::to_string(i) + " appears twice");
        }
    }
    c.events = std::move(ev);
    return c;
}

interval_config interval_config::parse(const std::string& text) {
    std::istringstream in(text);
    std::string tok;
    std::vector<int> ev;
    while (in >> tok) {
        if (tok.size() < 2 || (tok[0] != 's' && tok[0] != 't')) throw parameter_error("bad event token '" + tok + "'");
        int i = 0;
        try {
            i = std::stoi(tok.substr(1));
        } catch (const std::exception&) {
            throw parameter_error("bad event token '" + tok + "'");
        }
        ev.push_back(tok[0] == 's' ? i : -i);
    }
    return from_events(ev);
}

int interval_config::s_pos(int i) const {
    for (std::size_t k = 0; k < events.size(); ++k)
        if (events[k] == i) return static_cast<int>(k) + 1;
    throw parameter_error("no such interval");
}

int interval_config::t_pos(int i) const {
    for (std::size_t k = 0; k < events.size(); ++k)
        if (events[k] == -i) return static_cast<int>(k) + 1;
    throw parameter_error("no such interval");
}

std::vector<std::vector<int>> interval_config::components() const {
    std::vector<std::vector<int>> out;
    int open = 0;
    for (int e : events) {
        if (open == 0) out.emplace_back();
        if (e > 0) {
            out.back().push_back(e);
            ++open;
        } else {
            --open;
        }
    }
    return out;
}

bool interval_config::single_component() const { return components().size() == 1; }

bool interval_config::has_isolated() const {
    for (std::size_t k = 0; k + 1 < events.size(); ++k)
        if (events[k] > 0 && events[k + 1] == -events[k]) return true;
    return false;
}

std::string interval_config::to_string() const {
    std::string s;
    for (std::size_t k = 0; k < events.size(); ++k) {
        if (k) s += ' ';
        s += (events[k] > 0 ? 's' : 't') + std::to_string(std::abs(events[k]));
    }
    return s;
}

namespace {

void enumerate_rec(int n, std::vector<int>& ev, std::vector<int>& state, bool single,
                   std::vector<interval_config>& out) {
    if (static_cast<int>(ev.size()) == 2 * n) {
        interval_config c;
        c.n = n;
        c.events = ev;
        if (!single || c.single_component()) out.push_back(std::move(c));
        return;
    }
    for (int i = 1; i <= n; ++i)
        if (state[i] == 0) {
            state[i] = 1;
            ev.push_back(i);
            enumerate_rec(n, ev, state, single, out);
            ev.pop_back();
            state[i] = 0;
        }
    for (int i = 1; i <= n; ++i)
        if (state[i] == 1) {
            state[i] = 2;
            ev.push_back(-i);
            enumerate_rec(n, ev, state, single, out);
            ev.pop_back();
            state[i] = 1;
        }
}

}

std::vector<interval_config> enumerate_configs(int n, bool single_component) {
    if (n < 1 || n > 5) throw parameter_error("enumerate_configs supports 1 <= n <= 5");
    std::vector<interval_config> out;
    out.reserve(config_count(n));
    std::vector<int> ev, state(n + 1, 0);
    enumerate_rec(n, ev, state, single_component, out);
    return out;
}

std::size_t config_count(int n) {
    std::size_t c = 1;
    for (int k = 1; k <= 2 * n; ++k) c *= k;
    return c >> n;
}

interval_config random_config(int n, std::uint64_t seed, std::uint64_t index) {
    if (n < 1) throw parameter_error("n must be positive");
    rng_stream rng(mix_seed(seed, index));
    std::vector<int> tokens;
    for (int i = 1; i <= n; ++i) {
        tokens.push_back(i);
        tokens.push_back(i);
    }
    for (std::size_t k = tokens.size() - 1; k > 0; --k) {
        std::size_t r = rng.next() % (k + 1);
        std::swap(tokens[k], tokens[r]);
    }
    std::vector<int> seen(n + 1, 0);
    std::vector<int> ev;
    for (int t : tokens) ev.push_back(seen[t]++ ? -t : t);
    return interval_config::from_events(ev);
}

std::string u_sequence_t::to_string() const {
    std::string s;
    for (std::size_t j = 1; j + 1 < u.size(); ++j) {
        if (j > 1) s += ", ";
        std::string term;
        for (std::size_t i = 0; i < u[j].size(); ++i)
            if (u[j][i] != 0) {
                if (!term.empty()) term += u[j][i] > 0 ? "+" : "-";
                else if (u[j][i] < 0) term += "-";
                term += "p" + std::to_string(i + 1);
            }
        s += (term.empty() ? "0" : term) + (increasing[j] ? "^" : "v");
    }
    return s;
}

u_sequence_t u_sequence(const interval_config& c) {
    u_sequence_t s;
    s.u.assign(2 * c.n + 1, int_vec(c.n, 0));
    s.increasing.assign(2 * c.n + 1, false);
    for (int j = 1; j <= 2 * c.n; ++j) {
        int e = c.events[j - 1];
        s.u[j] = s.u[j - 1];
        s.u[j][std::abs(e) - 1] += e > 0 ? 1 : -1;
        s.increasing[j] = e > 0;
    }
    return s;
}

int integer_rank(std::vector<int_vec> rows) {
    if (rows.empty()) return 0;
    const std::size_t cols = rows[0].size();
    std::size_t rank = 0;
    __int128 prev = 1;
    for (std::size_t col = 0; col < cols && rank < rows.size(); ++col) {
        std::size_t piv = rank;
        while (piv < rows.size() && rows[piv][col] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[piv], rows[rank]);
        for (std::size_t i = rank + 1; i < rows.size(); ++i) {
            for (std::size_t k = col + 1; k < cols; ++k) {
                __int128 v = static_cast<__int128>(rows[i][k]) * rows[rank][col] -
                             static_cast<__int128>(rows[i][col]) * rows[rank][k];
                rows[i][k] = static_cast<long long>(v / prev);
            }
            rows[i][col] = 0;
        }
        prev = rows[rank][col];
        ++rank;
    }
    return static_cast<int>(rank);
}

bool in_span(const std::vector<int_vec>& rows, const int_vec& v) {
    std::vector<int_vec> ext = rows;
    ext.push_back(v);
    return integer_rank(ext) == integer_rank(rows);
}

std::vector<int> t_free_intervals(const interval_config& c) {
    std::vector<int> out;
    for (int i = 1; i <= c.n; ++i) {
        int a = c.s_pos(i), b = c.t_pos(i);
        bool free = true;
        for (int k = a + 1; k < b; ++k)
            if (c.events[k - 1] < 0) free = false;
        if (free) out.push_back(i);
    }
    return out;
}

namespace {

bool is_zero(const int_vec& v) {
    return std::all_of(v.begin(), v.end(), [](long long x) { return x == 0; });
}

int_vec unit(int n, int i) {
    int_vec e(n, 0);
    e[i - 1] = 1;
    return e;
}

}

span_result check_span_lemma(const interval_config& c, std::uint64_t seed) {
    span_result r;
    u_sequence_t us = u_sequence(c);
    std::vector<int_vec> D;
    for (int j = 1; j <= 2 * c.n; ++j)
        if (!us.increasing[j] && !is_zero(us.u[j])) D.push_back(us.u[j]);
    std::vector<int> tf = t_free_intervals(c);
    std::vector<int_vec> P;
    for (int i = 1; i <= c.n; ++i)
        if (std::find(tf.begin(), tf.end(), i) == tf.end()) P.push_back(unit(c.n, i));
    std::vector<int_vec> both = D;
    both.insert(both.end(), P.begin(), P.end());
    int rd = integer_rank(D), rp = integer_rank(P), rb = integer_rank(both);
    if (!(rd == rp && rp == rb)) {
        r.ok = false;
        r.clause = "span of decreasing u equals span of non-t-free p";
        r.detail = "rank(D)=" + std::to_string(rd) + " rank(P)=" + std::to_string(rp) + " rank(D+P)=" + std::to_string(rb);
        return r;
    }
    std::vector<std::vector<int>> options;
    std::size_t total = 1;
    for (int i : tf) {
        std::vector<int> o;
        for (int j = 1; j <= 2 * c.n; ++j)
            if (us.increasing[j] && us.u[j][i - 1] != 0) o.push_back(j);
        options.push_back(o);
        total = std::min<std::size_t>(total * o.size(), 1u << 20);
    }
    auto check_choice = [&](const std::vector<int>& pick) {
        std::vector<int_vec> rows = D;
        for (int j : pick) rows.push_back(us.u[j]);
        ++r.choice_sets_checked;
        if (integer_rank(rows) != c.n) {
            r.ok = false;
            r.clause = "decreasing u plus one increasing u per t-free p spans all p";
            std::string d = "choice";
            for (int j : pick) d += " u" + std::to_string(j);
            r.detail = d;
            return false;
        }
        return true;
    };
    if (total <= 4096) {
        std::vector<std::size_t> idx(options.size(), 0);
        while (true) {
            std::vector<int> pick;
            for (std::size_t a = 0; a < options.size(); ++a) pick.push_back(options[a][idx[a]]);
            if (!check_choice(pick)) return r;
            std::size_t a = 0;
            while (a < options.size() && ++idx[a] == options[a].size()) idx[a++] = 0;
            if (a == options.size()) break;
        }
    } else {
        rng_stream rng(mix_seed(seed, std::hash<std::string>{}(c.to_string())));
        for (int s = 0; s < 64; ++s) {
            std::vector<int> pick;
            for (const auto& o : options) pick.push_back(o[rng.next() % o.size()]);
            if (!check_choice(pick)) return r;
        }
    }
    return r;
}

std::vector<exponent_vector> numerator_exponents(const interval_config& c) {
    u_sequence_t us = u_sequence(c);
    std::vector<exponent_vector> out;
    const int last = 2 * c.n - 1;
    for (unsigned mask = 0; mask < (1u << c.n); ++mask) {
        exponent_vector t;
        t.m.assign(last + 1, 2);
        t.m[0] = 0;
        t.choice.assign(c.n + 1, 0);
        bool vanishes = false;
        for (int i = 1; i <= c.n; ++i) {
            int j = c.s_pos(i) - ((mask >> (i - 1)) & 1u);
            t.choice[i] = j;
            if (j == 0 || is_zero(us.u[j])) {
                vanishes = true;
                break;
            }
            --t.m[j];
        }
        if (!vanishes) out.push_back(std::move(t));
    }
    return out;
}

std::optional<std::string> check_exponent_clauses(const interval_config& c, const exponent_vector& t) {
    u_sequence_t us = u_sequence(c);
    const int last = 2 * c.n - 1;
    auto dec = [&](int j) { return j == 2 * c.n || !us.increasing[j]; };
    for (int j = 1; j <= last; ++j) {
        if (t.m[j] < 0 || t.m[j] > 2) return "m_" + std::to_string(j) + " outside {0,1,2}";
        if (!dec(j)) continue;
        if (t.m[j] < 1 || (j - 1 >= 1 && t.m[j - 1] < 1))
            return "clause 1 at j=" + std::to_string(j) + ": u_j decreasing but m_j or m_{j-1} is 0";
        if (t.m[j] == 1 && !(j + 1 <= last && !dec(j + 1) && t.m[j + 1] >= 1))
            return "clause 2 at j=" + std::to_string(j) + ": m_j = 1 without increasing u_{j+1} of m >= 1";
        if (dec(j + 1) && t.m[j] != 2)
            return "clause 3 at j=" + std::to_string(j) + ": u_j, u_{j+1} decreasing but m_j != 2";
    }
    int total = 0;
    for (int j = 1; j <= last; ++j) total += t.m[j];
    if (c.single_component() && total != 3 * c.n - 2)
        return "exponent total " + std::to_string(total) + " != 3n-2";
    return std::nullopt;
}

std::string ab_witness::to_json(const interval_config& c) const {
    json j;
    j["ordering"] = c.to_string();
    j["found"] = found;
    j["A"] = A;
    j["B"] = B;
    j["B_prime"] = B_prime;
    j["failure"] = failure;
    return j.dump();
}

std::optional<std::string> verify_ab_sets(const interval_config& c, const exponent_vector& t, const ab_witness& w) {
    u_sequence_t us = u_sequence(c);
    const int last = 2 * c.n - 1;
    std::vector<int_vec> ra, rb;
    for (const auto* set : {&w.A, &w.B})
        for (int j : *set) {
            if (j < 1 || j > last) return "(i) index " + std::to_string(j) + " is not an interior u";
            if (is_zero(us.u[j])) return "(i) u_" + std::to_string(j) + " is zero";
            if (t.m[j] < 1) return "(iii) u_" + std::to_string(j) + " has m = 0";
            (set == &w.A ? ra : rb).push_back(us.u[j]);
        }
    if (integer_rank(ra) != c.n) return "(ii) A does not span";
    if (integer_rank(rb) != c.n) return "(ii) B does not span";
    for (int j : w.A)
        if (std::find(w.B.begin(), w.B.end(), j) != w.B.end() && t.m[j] != 2)
            return "(iv) u_" + std::to_string(j) + " shared with m = " + std::to_string(t.m[j]);
    return std::nullopt;
}

ab_witness find_ab_sets(const interval_config& c, const exponent_vector& t) {
    if (c.n < 3) throw parameter_error("find_ab_sets requires n >= 3");
    if (!c.single_component()) throw parameter_error("find_ab_sets requires a single component");
    if (c.has_isolated()) throw parameter_error("find_ab_sets requires a configuration without isolated intervals");
    ab_witness w;
    u_sequence_t us = u_sequence(c);
    const int last = 2 * c.n - 1;
    auto dec = [&](int j) { return j == 2 * c.n || !us.increasing[j]; };
    std::set<int> A, B;
    for (int j = 1; j <= last; ++j)
        if (dec(j)) A.insert(j);
    auto vecs = [&](const std::set<int>& s) {
        std::vector<int_vec> r;
        for (int j : s) r.push_back(us.u[j]);
        return r;
    };
    for (int guard = 0; guard <= 4 * c.n; ++guard) {
        int j = 0;
        std::vector<int_vec> bv = vecs(B);
        for (int q = 1; q <= last; ++q)
            if (dec(q) && !in_span(bv, us.u[q])) {
                j = q;
                break;
            }
        if (j == 0) break;
        if (t.m[j] == 2) {
            B.insert(j);
        } else if (t.m[j] == 1) {
            if (j + 1 > last || dec(j + 1)) {
                w.failure = "B construction stalls at j=" + std::to_string(j) + ": u_{j+1} is not increasing";
                return w;
            }
            int i = c.events[j];
            int d = c.t_pos(i) - j - 1;
            for (int q : {j + 1, j + d, j + d + 1})
                if (q <= last && !is_zero(us.u[q])) B.insert(q);
            B.erase(j);
        } else {
            w.failure = "B construction stalls at j=" + std::to_string(j) + ": decreasing u_j with m_j = 0";
            return w;
        }
        if (guard == 4 * c.n) {
            w.failure = "B construction does not terminate";
            return w;
        }
    }
    w.B_prime.assign(B.begin(), B.end());
    for (int q : w.B_prime) {
        if (dec(q)) continue;
        bool nb = (q - 1 >= 1 && dec(q - 1)) || dec(q + 1);
        if (!nb) {
            w.failure = "B' clause 1: increasing u_" + std::to_string(q) + " has no decreasing neighbour";
            return w;
        }
        if (!dec(q + 1) && !(q - 1 >= 1 && dec(q - 1) && t.m[q - 1] == 1 && t.m[q] >= 1)) {
            w.failure = "B' clause 2 fails at u_" + std::to_string(q);
            return w;
        }
    }
    for (int i : t_free_intervals(c)) {
        int j = c.s_pos(i);
        int k = c.t_pos(i) - j - 1;
        int a, b;  // a goes to A, b to B
        if (k > 1) {
            int hi = j + k, lo = j + k - 1;
            if (t.m[hi] == 0) {
                a = b = lo;
            } else if (t.m[lo] == 0) {
                a = b = hi;
            } else if (B.count(hi)) {
                a = lo;
                b = hi;
            } else {
                a = hi;
                b = lo;
            }
        } else {
            int lo = j, hi = j + 1;
            if (w.B_prime.end() != std::find(w.B_prime.begin(), w.B_prime.end(), lo) &&
                w.B_prime.end() != std::find(w.B_prime.begin(), w.B_prime.end(), hi)) {
                if (t.m[lo] == 2) {
                    a = b = lo;
                } else if (t.m[hi] == 2) {
                    a = b = hi;
                } else {
                    w.failure = "t-free p_" + std::to_string(i) + " (k=1): neither u_j nor u_{j+1} has m = 2";
                    return w;
                }
            } else if (t.m[lo] == 0) {
                a = b = hi;
            } else if (t.m[hi] == 0) {
                a = b = lo;
            } else if (B.count(lo)) {
                a = hi;
                b = lo;
            } else {
                a = lo;
                b = hi;
            }
        }
        A.insert(a);
        B.insert(b);
    }
    w.A.assign(A.begin(), A.end());
    w.B.assign(B.begin(), B.end());
    auto bad = verify_ab_sets(c, t, w);
    if (bad) {
        w.failure = *bad;
        return w;
    }
    w.found = true;
    return w;
}

std::string terminal_name(terminal_case t) {
    switch (t) {
    case terminal_case::case1: return "case1";
    case terminal_case::case2: return "case2";
    case terminal_case::case3: return "case3";
    case terminal_case::exhausted: return "exhausted";
    }
    return "?";
}

bool reduction_trace::conserved() const {
    std::size_t removed = 0;
    for (const auto& I : isolated) removed += I.size();
    std::size_t final_n = stages.empty() ? 0 : stages.back().events.size() / 2;
    return stages.empty() ? false : removed + final_n == stages.front().events.size() / 2;
}

reduction_trace reduce_isolated(const interval_config& c) {
    reduction_trace tr;
    std::vector<int> ev = c.events;
    std::vector<int> l(ev.size() + 1, 0);
    while (true) {
        interval_config k;
        k.n = c.n;
        k.events = ev;
        tr.stages.push_back(k);
        tr.counters.push_back(l);
        const std::size_t size = ev.size() / 2;
        if (size == 0) {
            tr.terminal = terminal_case::exhausted;
            break;
        }
        if (size == 1) {
            tr.terminal = terminal_case::case3;
            break;
        }
        std::vector<int> iso;
        for (std::size_t q = 0; q + 1 < ev.size(); ++q)
            if (ev[q] > 0 && ev[q + 1] == -ev[q]) iso.push_back(ev[q]);
        if (iso.empty()) {
            tr.terminal = size >= 3 ? terminal_case::case1 : terminal_case::case2;
            break;
        }
        tr.isolated.push_back(iso);
        std::vector<int> nev;
        std::vector<int> nl = {l[0]};
        std::size_t pos = 1;
        while (pos <= ev.size()) {
            int e = ev[pos - 1];
            if (e > 0 && pos < ev.size() && ev[pos] == -e) {
                nl.back() += 1 + l[pos + 1];
                pos += 2;
            } else {
                nev.push_back(e);
                nl.push_back(l[pos]);
                ++pos;
            }
        }
        ev = std::move(nev);
        l = std::move(nl);
    }
    return tr;
}

odd_component_result odd_component_check(const interval_config& c) {
    odd_component_result r;
    u_sequence_t us = u_sequence(c);
    for (const auto& comp : c.components()) {
        if (comp.size() % 2 == 0) continue;
        r.has_odd_component = true;
        int sign = 1;
        for (std::size_t q = 0; q < comp.size(); ++q) sign = -sign;
        bool quad_invariant = true;
        for (const auto& u : us.u) {
            int_vec v = u;
            for (int i : comp) v[i - 1] = -v[i - 1];
            int_vec neg = u;
            for (auto& x : neg) x = -x;
            if (v != u && v != neg) quad_invariant = false;
        }
        if (!(quad_invariant && sign == -1)) r.sign_flips = false;
    }
    return r;
}

bool comb_summary::pass() const {
    return span_failed == 0 && clause_violations == 0 && ab_found == ab_attempted && reduction_failures == 0 &&
           odd_failures == 0 && sampled_failed == 0;
}

std::string comb_summary::to_json() const {
    json j;
    j["n_exhaustive"] = n_exhaustive;
    j["configs_per_n"] = configs_per_n;
    j["span_checked"] = span_checked;
    j["span_failed"] = span_failed;
    j["terms_checked"] = terms_checked;
    j["clause_violations"] = clause_violations;
    j["ab_attempted"] = ab_attempted;
    j["ab_found"] = ab_found;
    j["reductions"] = reductions;
    j["reduction_failures"] = reduction_failures;
    j["odd_checked"] = odd_checked;
    j["odd_failures"] = odd_failures;
    j["sampled"] = sampled;
    j["sampled_failed"] = sampled_failed;
    json f = json::array();
    for (std::size_t k = 0; k < failures.size() && k < 200; ++k)
        f.push_back({{"ordering", failures[k].ordering}, {"check", failures[k].check},
                     {"clause", failures[k].clause}, {"detail", failures[k].detail}});
    j["failures"] = f;
    j["failures_total"] = failures.size();
    j["pass"] = pass();
    return j.dump(2);
}

namespace {

struct config_outcome {
    bool span_ok = true;
    std::size_t terms = 0, violations = 0, ab_attempted = 0, ab_found = 0;
    bool reduction_ok = true, odd_checked = false, odd_ok = true;
    std::vector<comb_failure> failures;
};

config_outcome check_one(const interval_config& c, std::uint64_t seed) {
    config_outcome o;
    const std::string ord = c.to_string();
    span_result s = check_span_lemma(c, seed);
    if (!s.ok) {
        o.span_ok = false;
        o.failures.push_back({ord, "span_lemma", s.clause, s.detail});
    }
    bool ab_applies = c.n >= 3 && c.single_component() && !c.has_isolated();
    for (const auto& t : numerator_exponents(c)) {
        ++o.terms;
        if (auto v = check_exponent_clauses(c, t)) {
            ++o.violations;
            o.failures.push_back({ord, "numerator_exponents", *v, ""});
        }
        if (ab_applies) {
            ++o.ab_attempted;
            ab_witness w = find_ab_sets(c, t);
            if (w.found) ++o.ab_found;
            else o.failures.push_back({ord, "find_ab_sets", w.failure, w.to_json(c)});
        }
    }
    reduction_trace tr = reduce_isolated(c);
    bool ok = tr.conserved();
    for (std::size_t m = 0; ok && m + 1 < tr.stages.size(); ++m) {
        const auto& cur = tr.stages[m].events;
        const auto& nxt = tr.stages[m + 1].events;
        std::vector<int> expect;
        for (int e : cur)
            if (std::find(tr.isolated[m].begin(), tr.isolated[m].end(), std::abs(e)) == tr.isolated[m].end())
                expect.push_back(e);
        if (expect != nxt) ok = false;
    }
    if (!ok) {
        o.reduction_ok = false;
        o.failures.push_back({ord, "reduce_isolated", "K_{m+1} is K_m without I_m; sum |I_m| + |K_final| = n", ""});
    }
    odd_component_result oc = odd_component_check(c);
    if (oc.has_odd_component) {
        o.odd_checked = true;
        if (!oc.sign_flips) {
            o.odd_ok = false;
            o.failures.push_back({ord, "odd_component", "integrand odd under negation of an odd component", ""});
        }
    }
    return o;
}

}

comb_summary run_combinatorics(const comb_options& opt) {
    if (opt.n_exhaustive < 1 || opt.n_exhaustive > 5) throw parameter_error("n_exhaustive must lie in 1..5");
    for (int n : opt.sample_n)
        if (n < 1 || n > 12) throw parameter_error("sampled n must lie in 1..12");
    comb_summary sum;
    sum.n_exhaustive = opt.n_exhaustive;
    for (int n = 1; n <= opt.n_exhaustive; ++n) {
        std::vector<interval_config> cs = enumerate_configs(n, false);
        sum.configs_per_n.push_back(cs.size());
        std::vector<config_outcome> out(cs.size());
#pragma omp parallel for schedule(dynamic, 16)
        for (std::size_t k = 0; k < cs.size(); ++k) out[k] = check_one(cs[k], opt.seed);
        for (const auto& o : out) {
            ++sum.span_checked;
            if (!o.span_ok) ++sum.span_failed;
            sum.terms_checked += o.terms;
            sum.clause_violations += o.violations;
            sum.ab_attempted += o.ab_attempted;
            sum.ab_found += o.ab_found;
            ++sum.reductions;
            if (!o.reduction_ok) ++sum.reduction_failures;
            if (o.odd_checked) ++sum.odd_checked;
            if (!o.odd_ok) ++sum.odd_failures;
            sum.failures.insert(sum.failures.end(), o.failures.begin(), o.failures.end());
        }
    }
    for (int n : opt.sample_n) {
        std::vector<span_result> res(opt.samples);
        std::vector<std::string> ords(opt.samples);
#pragma omp parallel for schedule(dynamic, 64)
        for (std::size_t k = 0; k < opt.samples; ++k) {
            interval_config c = random_config(n, opt.seed + static_cast<std::uint64_t>(n), k);
            res[k] = check_span_lemma(c, opt.seed);
            if (!res[k].ok) ords[k] = c.to_string();
        }
        for (std::size_t k = 0; k < opt.samples; ++k) {
            ++sum.sampled;
            if (!res[k].ok) {
                ++sum.sampled_failed;
                sum.failures.push_back({ords[k], "span_lemma_sampled", res[k].clause, res[k].detail});
            }
        }
    }
    return sum;
}

}
