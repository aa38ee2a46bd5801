#include "iltlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

#include "json.hpp"

#include "iltlab/constants.hpp"
#include "iltlab/io.hpp"

namespace iltlab {

using nlohmann::ordered_json;

namespace {

std::string join(const std::vector<std::string>& v, const std::string& sep) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
    return s;
}

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    std::string t = trim(v);
    double x = 0.0;
    auto r = std::from_chars(t.data(), t.data() + t.size(), x);
    if (t.empty() || r.ec != std::errc() || r.ptr != t.data() + t.size())
        throw config_error({key + ": '" + v + "' is not a number"});
    return x;
}

long long to_integer(const std::string& key, const std::string& v) {
    std::string t = trim(v);
    long long x = 0;
    auto r = std::from_chars(t.data(), t.data() + t.size(), x);
    if (t.empty() || r.ec != std::errc() || r.ptr != t.data() + t.size())
        throw config_error({key + ": '" + v + "' is not an integer"});
    return x;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    std::string t = trim(v);
    std::uint64_t x = 0;
    auto r = std::from_chars(t.data(), t.data() + t.size(), x);
    if (t.empty() || r.ec != std::errc() || r.ptr != t.data() + t.size())
        throw config_error({key + ": '" + v + "' is not an unsigned integer"});
    return x;
}

std::size_t to_count(const std::string& key, const std::string& v) {
    long long x = to_integer(key, v);
    if (x < 0) throw config_error({key + ": must be non-negative, got " + v});
    return static_cast<std::size_t>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
    std::string t = trim(v);
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw config_error({key + ": '" + v + "' is not a boolean"});
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    if (out.size() == 1 && out[0].empty()) out.clear();
    return out;
}

struct field {
    const char* name;
    const char* doc;
    bool result_affecting;
    std::function<void(experiment_config&, const std::string&)> set;
    std::function<ordered_json(const experiment_config&)> get;
};

template <class M>
field real_field(const char* name, const char* doc, M experiment_config::*m) {
    return {name, doc, true, [=](experiment_config& c, const std::string& v) { c.*m = to_double(name, v); },
            [=](const experiment_config& c) { return ordered_json(c.*m); }};
}

template <class M>
field count_field(const char* name, const char* doc, M experiment_config::*m, bool affects = true) {
    return {name, doc, affects,
            [=](experiment_config& c, const std::string& v) { c.*m = static_cast<M>(to_count(name, v)); },
            [=](const experiment_config& c) { return ordered_json(c.*m); }};
}

field real_list(const char* name, const char* doc, std::vector<double> experiment_config::*m) {
    return {name, doc, true,
            [=](experiment_config& c, const std::string& v) {
                std::vector<double> x;
                for (const auto& s : split_list(v)) x.push_back(to_double(name, s));
                c.*m = x;
            },
            [=](const experiment_config& c) { return ordered_json(c.*m); }};
}

field int_list(const char* name, const char* doc, std::vector<int> experiment_config::*m) {
    return {name, doc, true,
            [=](experiment_config& c, const std::string& v) {
                std::vector<int> x;
                for (const auto& s : split_list(v)) x.push_back(static_cast<int>(to_integer(name, s)));
                c.*m = x;
            },
            [=](const experiment_config& c) { return ordered_json(c.*m); }};
}

const std::vector<field>& fields() {
    using C = experiment_config;
    static const std::vector<field> f = {
        {"seed", "master seed for every random stream", true,
         [](C& c, const std::string& v) { c.seed = to_u64("seed", v); },
         [](const C& c) { return ordered_json(c.seed); }},
        count_field("threads", "worker threads, 0 = OpenMP default", &C::threads, false),
        {"out", "output directory", false, [](C& c, const std::string& v) { c.out = trim(v); },
         [](const C& c) { return ordered_json(c.out); }},
        {"cache_dir", "result cache directory", false, [](C& c, const std::string& v) { c.cache_dir = trim(v); },
         [](const C& c) { return ordered_json(c.cache_dir); }},
        {"cache", "serve repeated runs from the cache", false,
         [](C& c, const std::string& v) { c.cache = to_bool("cache", v); },
         [](const C& c) { return ordered_json(c.cache); }},
        {"process", "mc process: brownian or stable", true, [](C& c, const std::string& v) { c.process = trim(v); },
         [](const C& c) { return ordered_json(c.process); }},
        real_field("beta", "stable index for process = stable", &C::beta),
        real_field("T", "time horizon", &C::T),
        real_list("ladder", "epsilon ladder, strictly decreasing", &C::ladder),
        count_field("n_paths", "paths per ladder", &C::n_paths),
        count_field("batch", "batch size for batch-mean standard errors", &C::batch),
        real_field("scaling_T", "horizon for the scaling-law check", &C::scaling_T),
        real_field("scaling_eps", "epsilon for the scaling-law check", &C::scaling_eps),
        real_field("split_S", "split time for the increment independence check", &C::split_S),
        real_field("stable_beta", "stable index for the stable suite", &C::stable_beta),
        real_list("char_freqs", "|p| values for the characteristic function check", &C::char_freqs),
        count_field("char_steps", "grid steps per path for the characteristic function check", &C::char_steps),
        count_field("char_lag", "increment lag in steps for the characteristic function check", &C::char_lag),
        real_list("m_grid", "M = 1/eps grid for the log-asymptotic fits", &C::m_grid),
        real_list("fourier_eps", "epsilon grid for the frequency-space second moment", &C::fourier_eps),
        real_list("const_beta", "stable indices for c(beta)", &C::const_beta),
        real_field("cross_beta", "stable index for regularized vs direct J2, below 1.5", &C::cross_beta),
        real_list("cauchy_ladder", "epsilon ladder for the A(eps) Cauchy check", &C::cauchy_ladder),
        real_list("j2_ladder", "epsilon ladder for the J2 extrapolation", &C::j2_ladder),
        count_field("j1_mc_samples", "Monte Carlo samples for the J1 cross-check", &C::j1_mc_samples),
        real_field("quad_rel", "relative tolerance for the constant quadratures", &C::quad_rel),
        {"comb_n", "largest n checked exhaustively", true,
         [](C& c, const std::string& v) { c.comb_n = static_cast<int>(to_integer("comb_n", v)); },
         [](const C& c) { return ordered_json(c.comb_n); }},
        int_list("comb_sample_n", "n values for sampled span checks", &C::comb_sample_n),
        count_field("comb_samples", "random configurations per sampled n", &C::comb_samples),
    };
    return f;
}

const field& find_field(const std::string& key) {
    for (const auto& f : fields())
        if (key == f.name) return f;
    throw config_error({"unknown key '" + key + "'"});
}

bool decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
    return true;
}

bool all_positive(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0 && std::isfinite(x); });
}

}

config_error::config_error(std::vector<std::string> d)
    : parameter_error("invalid configuration: " + join(d, "; ")), diagnostics(std::move(d)) {}

experiment_config::experiment_config() : j2_ladder(default_j2_ladder()) {}

void experiment_config::set(const std::string& key, const std::string& value) { find_field(key).set(*this, value); }

std::vector<std::string> experiment_config::problems() const {
    std::vector<std::string> p;
    auto need = [&](bool ok, const std::string& msg) {
        if (!ok) p.push_back(msg);
    };
    need(threads >= 0, "threads: must be >= 0");
    need(!out.empty(), "out: must not be empty");
    need(!cache_dir.empty(), "cache_dir: must not be empty");
    need(process == "brownian" || process == "stable", "process: must be brownian or stable");
    need(beta > 1.0 && beta < 2.0, "beta: must lie in (1, 2)");
    need(T > 0.0 && std::isfinite(T), "T: must be positive");
    need(ladder.size() >= 3, "ladder: needs at least 3 values");
    need(all_positive(ladder), "ladder: values must be positive");
    need(decreasing(ladder), "ladder: values must be strictly decreasing");
    need(batch >= 2, "batch: must be >= 2");
    need(n_paths >= 2 * batch, "n_paths: must be at least 2 * batch");
    need(scaling_T > 0.0 && scaling_T != 1.0, "scaling_T: must be positive and != 1");
    need(scaling_eps > 0.0, "scaling_eps: must be positive");
    need(split_S > 0.0 && split_S < T, "split_S: must lie in (0, T)");
    need(stable_beta > 1.0 && stable_beta < 2.0, "stable_beta: must lie in (1, 2)");
    need(!char_freqs.empty() && all_positive(char_freqs), "char_freqs: needs positive values");
    need(char_steps >= 1, "char_steps: must be >= 1");
    need(char_lag >= 1 && char_lag <= char_steps, "char_lag: must lie in [1, char_steps]");
    need(m_grid.size() >= 3, "m_grid: needs at least 3 values");
    need(std::all_of(m_grid.begin(), m_grid.end(), [](double m) { return m > 1.0 && std::isfinite(m); }),
         "m_grid: values must exceed 1");
    need(fourier_eps.size() >= 2, "fourier_eps: needs at least 2 values");
    need(std::all_of(fourier_eps.begin(), fourier_eps.end(), [](double e) { return e > 0.0 && e < 1.0; }),
         "fourier_eps: values must lie in (0, 1)");
    need(!const_beta.empty(), "const_beta: needs at least one value");
    need(std::all_of(const_beta.begin(), const_beta.end(), [](double b) { return b > 1.0 && b < 2.0; }),
         "const_beta: values must lie in (1, 2)");
    need(cross_beta > 1.0 && cross_beta < 1.5, "cross_beta: must lie in (1, 1.5)");
    need(cauchy_ladder.size() >= 3 && all_positive(cauchy_ladder) && decreasing(cauchy_ladder),
         "cauchy_ladder: needs >= 3 positive strictly decreasing values");
    need(j2_ladder.size() >= 4 && all_positive(j2_ladder) && decreasing(j2_ladder),
         "j2_ladder: needs >= 4 positive strictly decreasing values");
    need(j1_mc_samples >= 1000, "j1_mc_samples: must be >= 1000");
    need(quad_rel >= 1e-14 && quad_rel <= 1e-3, "quad_rel: must lie in [1e-14, 1e-3]");
    need(comb_n >= 1 && comb_n <= 5, "comb_n: must lie in 1..5");
    need(std::all_of(comb_sample_n.begin(), comb_sample_n.end(), [](int n) { return n >= 1 && n <= 12; }),
         "comb_sample_n: values must lie in 1..12");
    return p;
}

void experiment_config::validate() const {
    auto p = problems();
    if (!p.empty()) throw config_error(p);
}

std::string experiment_config::effective_json() const {
    static const experiment_config defaults;
    ordered_json j = ordered_json::object();
    for (const auto& f : fields())
        j[f.name] = {{"value", f.get(*this)}, {"default", f.get(defaults)}, {"doc", f.doc}};
    return j.dump(2) + "\n";
}

std::string experiment_config::canonical_parameters() const {
    ordered_json j = ordered_json::object();
    for (const auto& f : fields())
        if (f.result_affecting) j[f.name] = f.get(*this);
    return j.dump();
}

std::vector<std::string> config_keys() {
    std::vector<std::string> k;
    for (const auto& f : fields()) k.push_back(f.name);
    return k;
}

experiment_config parse_config_text(const std::string& text, const std::string& origin) {
    experiment_config cfg;
    std::vector<std::string> diag;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        std::string where = origin + ":" + std::to_string(lineno) + ": ";
        if (eq == std::string::npos) {
            diag.push_back(where + "expected key = value");
            continue;
        }
        try {
            cfg.set(trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const config_error& e) {
            for (const auto& d : e.diagnostics) diag.push_back(where + d);
        }
    }
    if (!diag.empty()) throw config_error(diag);
    return cfg;
}

experiment_config load_config(const std::string& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const std::exception&) {
        throw config_error({"cannot read config file '" + path + "'"});
    }
    return parse_config_text(text, path);
}

void apply_overrides(experiment_config& cfg, const std::vector<std::string>& assignments) {
    std::vector<std::string> diag;
    for (const auto& a : assignments) {
        auto eq = a.find('=');
        if (eq == std::string::npos) {
            diag.push_back("override '" + a + "': expected key=value");
            continue;
        }
        try {
            cfg.set(trim(a.substr(0, eq)), a.substr(eq + 1));
        } catch (const config_error& e) {
            diag.insert(diag.end(), e.diagnostics.begin(), e.diagnostics.end());
        }
    }
    if (!diag.empty()) throw config_error(diag);
}

}
