#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "iltlab/harness.hpp"

int main(int argc, char** argv) {
    CLI::App app{"iltlab: Monte Carlo, quadrature, constants and combinatorics for the derivative of intersection local time"};
    app.require_subcommand(1);
    std::string config_path;
    std::string out;
    std::uint64_t seed = 0;
    int threads = -1;
    bool no_cache = false;
    std::vector<std::string> overrides;

    const std::vector<std::pair<std::string, std::string>> subs = {
        {"mc", "moment table and scaling fit for the configured process"},
        {"quad", "Bessel identities, log-asymptotic fits, frequency-space second moment, lemma probes"},
        {"const", "k identities, J1/J2 and c(beta)"},
        {"comb", "interval-configuration lemma checks"},
        {"verify", "full acceptance suite with determinism rerun"},
    };
    for (const auto& [name, help] : subs) {
        CLI::App* sc = app.add_subcommand(name, help);
        sc->add_option("--config", config_path, "key = value config file")->required()->check(CLI::ExistingFile);
        sc->add_option("--out", out, "output directory");
        sc->add_option("--seed", seed, "master seed");
        sc->add_option("--threads", threads, "worker threads, 0 = OpenMP default")->check(CLI::NonNegativeNumber);
        sc->add_option("--set", overrides, "override a config key, key=value (repeatable)");
        sc->add_flag("--no-cache", no_cache, "ignore and do not write the result cache");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    CLI::App* chosen = app.get_subcommands().front();

    iltlab::experiment_config cfg;
    try {
        cfg = iltlab::load_config(config_path);
        iltlab::apply_overrides(cfg, overrides);
        if (chosen->count("--out")) cfg.out = out;
        if (chosen->count("--seed")) cfg.seed = seed;
        if (threads >= 0) cfg.threads = threads;
        if (no_cache) cfg.cache = false;
    } catch (const iltlab::config_error& e) {
        std::cerr << "usage error: invalid configuration\n";
        for (const auto& d : e.diagnostics) std::cerr << "  " << d << "\n";
        return 2;
    }
    return iltlab::run(iltlab::parse_subcommand(chosen->get_name()), cfg, std::cout, std::cerr);
}
