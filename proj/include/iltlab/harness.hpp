#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "iltlab/acceptance.hpp"
#include "iltlab/config.hpp"

namespace iltlab {

enum class subcommand { mc, quad, constants, comb, verify };

subcommand parse_subcommand(const std::string& s);
std::string subcommand_name(subcommand s);

struct run_outcome {
    bool pass = false;
    bool from_cache = false;
    artifact_map artifacts;
    std::vector<std::string> lines;
};

// content hash of subcommand, result-affecting parameters and version tag
std::string cache_key(subcommand s, const experiment_config& cfg);
std::string cache_path(const experiment_config& cfg, subcommand s);
// nullopt on a miss; unreadable or inconsistent entries are reported on warn and treated as misses
std::optional<run_outcome> cache_load(const std::string& path, const std::string& key, std::ostream& warn);
void cache_store(const std::string& path, const std::string& key, const run_outcome& r);

run_outcome compute(subcommand s, const experiment_config& cfg, std::ostream& log);
// compute through the cache, then write artifacts and effective-config.json into cfg.out
run_outcome execute(subcommand s, const experiment_config& cfg, std::ostream& log, std::ostream& warn);

// exit status: 0 all gated checks pass, 1 a gated check failed, 2 usage or config error, 3 runtime error
int run(subcommand s, const experiment_config& cfg, std::ostream& log, std::ostream& err);

}
