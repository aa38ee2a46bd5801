#include "iltlab/harness.hpp"

#include <cmath>
#include <filesystem>
#include <omp.h>

#include "json.hpp"

#include "iltlab/io.hpp"
#include "iltlab/moments.hpp"

namespace iltlab {

using nlohmann::ordered_json;

subcommand parse_subcommand(const std::string& s) {
    if (s == "mc") return subcommand::mc;
    if (s == "quad") return subcommand::quad;
    if (s == "const") return subcommand::constants;
    if (s == "comb") return subcommand::comb;
    if (s == "verify") return subcommand::verify;
    throw parameter_error("unknown subcommand '" + s + "' (expected mc, quad, const, comb or verify)");
}

std::string subcommand_name(subcommand s) {
    switch (s) {
    case subcommand::mc: return "mc";
    case subcommand::quad: return "quad";
    case subcommand::constants: return "const";
    case subcommand::comb: return "comb";
    case subcommand::verify: return "verify";
    }
    return "?";
}

std::string cache_key(subcommand s, const experiment_config& cfg) {
    std::string material = subcommand_name(s) + "\n" + cfg.canonical_parameters() + "\n" + ILTLAB_VERSION_TAG;
    return hex64(fnv1a64(material));
}

std::string cache_path(const experiment_config& cfg, subcommand s) {
    return (std::filesystem::path(cfg.cache_dir) / (subcommand_name(s) + "-" + cache_key(s, cfg) + ".json")).string();
}

namespace {

std::string files_digest(const artifact_map& files) {
    std::string all;
    for (const auto& [name, body] : files) all += name + '\0' + std::to_string(body.size()) + '\0' + body;
    return hex64(fnv1a64(all));
}

}

std::optional<run_outcome> cache_load(const std::string& path, const std::string& key, std::ostream& warn) {
    if (!file_exists(path)) return std::nullopt;
    try {
        ordered_json j = ordered_json::parse(read_file(path));
        if (j.at("key").get<std::string>() != key) throw std::runtime_error("key mismatch");
        if (j.at("version").get<std::string>() != ILTLAB_VERSION_TAG) throw std::runtime_error("version mismatch");
        run_outcome r;
        r.pass = j.at("pass").get<bool>();
        r.lines = j.at("lines").get<std::vector<std::string>>();
        for (const auto& [name, body] : j.at("files").items()) r.artifacts[name] = body.get<std::string>();
        if (files_digest(r.artifacts) != j.at("digest").get<std::string>()) throw std::runtime_error("digest mismatch");
        r.from_cache = true;
        return r;
    } catch (const std::exception& e) {
        warn << "warning: cache entry " << path << " is unusable (" << e.what() << "), recomputing\n";
        return std::nullopt;
    }
}

void cache_store(const std::string& path, const std::string& key, const run_outcome& r) {
    ordered_json j;
    j["key"] = key;
    j["version"] = ILTLAB_VERSION_TAG;
    j["pass"] = r.pass;
    j["lines"] = r.lines;
    ordered_json files = ordered_json::object();
    for (const auto& [name, body] : r.artifacts) files[name] = body;
    j["files"] = files;
    j["digest"] = files_digest(r.artifacts);
    write_file_atomic(path, j.dump());
}

namespace {

run_outcome run_mc(const experiment_config& cfg) {
    run_outcome r;
    process_spec spec = cfg.process == "stable" ? process_spec::stable(cfg.beta) : process_spec::brownian();
    epsilon_ladder lad;
    lad.eps = cfg.ladder;
    lad.T = cfg.T;
    lad.n_paths = cfg.n_paths;
    lad.batch = cfg.batch;
    moment_table tab = estimate_moments(spec, lad, rng_policy{cfg.seed});
    r.artifacts["moments.csv"] = tab.to_csv();
    scaling_fit fit = spec.kind == process_kind::brownian ? fit_log_scaling(tab) : fit_power_scaling(tab, spec.beta);
    r.artifacts["scaling_fit.json"] = fit.to_json() + "\n";
    r.pass = true;
    for (const auto& row : tab.rows) {
        bool odd = std::fabs(row.m[0]) <= 3 * row.se[0] && std::fabs(row.m[2]) <= 3 * row.se[2];
        r.pass = r.pass && odd && row.m[1] > 0;
        char b[200];
        std::snprintf(b, sizeof b, "eps %-8g m2 %.6g +- %.2g  scaled %.6g  m1/se %.2f  m3/se %.2f%s", row.epsilon,
                      row.m[1], row.se[1], row.scaled_m2, row.m[0] / row.se[0], row.m[2] / row.se[2],
                      odd ? "" : "  ODD MOMENT OFF");
        r.lines.push_back(b);
    }
    char b[160];
    std::snprintf(b, sizeof b, "%s fit: a %.5f b %.5f R^2 %.4f", fit.model.c_str(), fit.a, fit.b, fit.r2);
    r.lines.push_back(b);
    return r;
}

run_outcome run_criteria(const experiment_config& cfg, const std::vector<int>& ids, bool rerun, std::ostream& log) {
    run_outcome r;
    acceptance_report rep = run_acceptance(cfg, rerun, ids, [&](const criterion_result& c) {
        std::string line = format_criterion_line(c);
        log << line << "\n" << std::flush;
        r.lines.push_back(line);
    });
    r.artifacts = rep.artifacts;
    r.pass = rep.all_pass();
    return r;
}

}

run_outcome compute(subcommand s, const experiment_config& cfg, std::ostream& log) {
    switch (s) {
    case subcommand::mc: {
        run_outcome r = run_mc(cfg);
        for (const auto& l : r.lines) log << l << "\n";
        return r;
    }
    case subcommand::quad: return run_criteria(cfg, {1, 2, 3, 5}, false, log);
    case subcommand::constants: return run_criteria(cfg, {4, 8}, false, log);
    case subcommand::comb: return run_criteria(cfg, {9}, false, log);
    case subcommand::verify: return run_criteria(cfg, {}, true, log);
    }
    throw parameter_error("unknown subcommand");
}

run_outcome execute(subcommand s, const experiment_config& cfg, std::ostream& log, std::ostream& warn) {
    cfg.validate();
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
    std::string key = cache_key(s, cfg);
    std::string path = cache_path(cfg, s);
    std::optional<run_outcome> hit;
    if (cfg.cache) hit = cache_load(path, key, warn);
    run_outcome r;
    if (hit) {
        r = std::move(*hit);
        log << "cache hit " << key << "\n";
        for (const auto& l : r.lines) log << l << "\n";
    } else {
        r = compute(s, cfg, log);
        if (cfg.cache) cache_store(path, key, r);
    }
    namespace fs = std::filesystem;
    for (const auto& [name, body] : r.artifacts) write_file_atomic((fs::path(cfg.out) / name).string(), body);
    write_file_atomic((fs::path(cfg.out) / "effective-config.json").string(), cfg.effective_json());
    return r;
}

int run(subcommand s, const experiment_config& cfg, std::ostream& log, std::ostream& err) {
    try {
        cfg.validate();
    } catch (const config_error& e) {
        err << "usage error: invalid configuration\n";
        for (const auto& d : e.diagnostics) err << "  " << d << "\n";
        return 2;
    }
    try {
        run_outcome r = execute(s, cfg, log, err);
        log << subcommand_name(s) << ": " << (r.pass ? "all gated checks pass" : "gated checks FAILED")
            << (r.from_cache ? " (cached)" : "") << "\n";
        return r.pass ? 0 : 1;
    } catch (const parameter_error& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
}

}
