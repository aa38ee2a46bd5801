#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "json.hpp"

#include "iltlab/config.hpp"
#include "iltlab/harness.hpp"
#include "iltlab/io.hpp"

using namespace iltlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("iltlab_harness_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run_cli(const std::string& args) {
    const char* cli = std::getenv("ILTLAB_CLI");
    REQUIRE(cli != nullptr);
    std::string cmd = std::string(cli) + " " + args + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

const char* small_mc = "process = brownian\nladder = 0.04, 0.02, 0.01\nn_paths = 200\nbatch = 20\n";

}

TEST_CASE("config parsing, overrides and diagnostics") {
    auto cfg = parse_config_text("# comment\nseed = 7\nladder = 0.1, 0.05, 0.02 # trailing\n\nprocess = stable\n");
    CHECK(cfg.seed == 7);
    CHECK(cfg.ladder == std::vector<double>{0.1, 0.05, 0.02});
    CHECK(cfg.process == "stable");
    apply_overrides(cfg, {"n_paths=300", "batch = 30"});
    CHECK(cfg.n_paths == 300);
    CHECK_NOTHROW(cfg.validate());
    try {
        parse_config_text("bogus = 1\nseed = abc\nT = x\n");
        FAIL("expected config_error");
    } catch (const config_error& e) {
        CHECK(e.diagnostics.size() == 3);
    }
    auto neg = parse_config_text("ladder = 0.02, -0.01, 0.005\n");
    CHECK_THROWS_AS(neg.validate(), config_error);
    CHECK_THROWS_AS(apply_overrides(cfg, {"noequals"}), config_error);
}

TEST_CASE("effective config lists every key with its default") {
    experiment_config cfg;
    auto j = nlohmann::json::parse(cfg.effective_json());
    for (const auto& k : config_keys()) {
        REQUIRE(j.contains(k));
        CHECK(j[k]["value"] == j[k]["default"]);
        CHECK(!j[k]["doc"].get<std::string>().empty());
    }
}

TEST_CASE("cache key ignores output location and threads") {
    experiment_config a, b;
    b.out = "elsewhere";
    b.threads = 3;
    b.cache_dir = "other";
    CHECK(cache_key(subcommand::mc, a) == cache_key(subcommand::mc, b));
    b.seed = a.seed + 1;
    CHECK(cache_key(subcommand::mc, a) != cache_key(subcommand::mc, b));
    CHECK(cache_key(subcommand::mc, a) != cache_key(subcommand::comb, a));
}

TEST_CASE("cache store, load and corruption fallback") {
    fs::path dir = scratch("cache");
    run_outcome r;
    r.pass = true;
    r.artifacts["a.csv"] = "x,y\n1,2\n";
    r.lines = {"line"};
    std::string path = (dir / "e.json").string();
    cache_store(path, "k1", r);
    std::ostringstream warn;
    auto hit = cache_load(path, "k1", warn);
    REQUIRE(hit);
    CHECK(hit->artifacts == r.artifacts);
    CHECK(warn.str().empty());
    std::string body = read_file(path);
    body.replace(body.find("1,2"), 3, "1,3");
    write_file_atomic(path, body);
    CHECK_FALSE(cache_load(path, "k1", warn));
    CHECK(warn.str().find("warning") != std::string::npos);
    write_file_atomic(path, "{not json");
    CHECK_FALSE(cache_load(path, "k1", warn));
    CHECK_FALSE(cache_load((dir / "missing.json").string(), "k1", warn));
}

TEST_CASE("cli: repeated mc run is served from cache with identical bytes") {
    fs::path dir = scratch("mc");
    write_file_atomic((dir / "mc.conf").string(), std::string(small_mc) + "cache_dir = " + (dir / "cache").string() + "\n");
    std::string base = "mc --config " + (dir / "mc.conf").string();
    int rc1 = run_cli(base + " --out " + (dir / "o1").string());
    int rc2 = run_cli(base + " --out " + (dir / "o2").string());
    int rc3 = run_cli(base + " --no-cache --threads 1 --out " + (dir / "o3").string());
    CHECK(rc1 == rc2);
    CHECK(rc1 == rc3);
    for (const char* f : {"moments.csv", "scaling_fit.json"}) {
        std::string a = read_file((dir / "o1" / f).string());
        CHECK(a == read_file((dir / "o2" / f).string()));
        CHECK(a == read_file((dir / "o3" / f).string()));
    }
    CHECK(fs::exists(dir / "o2" / "effective-config.json"));
    CHECK(fs::directory_iterator(dir / "cache") != fs::directory_iterator());
}

TEST_CASE("cli: malformed config exits nonzero without outputs") {
    fs::path dir = scratch("bad");
    write_file_atomic((dir / "bad.conf").string(), "ladder = 0.02, -0.01, 0.005\n");
    CHECK(run_cli("mc --config " + (dir / "bad.conf").string() + " --out " + (dir / "o").string()) == 2);
    CHECK_FALSE(fs::exists(dir / "o"));
    CHECK(run_cli("mc --config " + (dir / "missing.conf").string()) == 2);
    CHECK(run_cli("frobnicate --config " + (dir / "bad.conf").string()) == 2);
}

TEST_CASE("cli: comb subcommand on a small configuration") {
    fs::path dir = scratch("comb");
    write_file_atomic((dir / "c.conf").string(), "comb_n = 3\ncomb_sample_n = 5\ncomb_samples = 200\ncache = false\n");
    CHECK(run_cli("comb --config " + (dir / "c.conf").string() + " --out " + (dir / "o").string()) == 0);
    auto j = nlohmann::json::parse(read_file((dir / "o" / "combinatorics.json").string()));
    CHECK(j["pass"] == true);
    auto s = nlohmann::json::parse(read_file((dir / "o" / "summary.json").string()));
    CHECK(s["all_pass"] == true);
}
