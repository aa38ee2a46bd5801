// one line per acceptance criterion; exit status 0 only when every criterion passes
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"

#include "iltlab/acceptance.hpp"
#include "iltlab/io.hpp"

int main(int argc, char** argv) {
    CLI::App app{"acceptance suite"};
    std::string work = "acceptance-work";
    std::string config_path;
    std::vector<int> only;
    bool no_rerun = false;
    app.add_option("--work", work, "directory for artifacts and summary.json");
    app.add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
    app.add_option("--only", only, "criterion ids to run");
    app.add_flag("--no-rerun", no_rerun, "skip the determinism rerun");
    CLI11_PARSE(app, argc, argv);

    iltlab::experiment_config cfg;
    try {
        if (!config_path.empty()) cfg = iltlab::load_config(config_path);
        cfg.out = work;
        cfg.validate();
    } catch (const iltlab::config_error& e) {
        for (const auto& d : e.diagnostics) std::cerr << d << "\n";
        return 2;
    }
    auto rep = iltlab::run_acceptance(cfg, !no_rerun, only, [](const iltlab::criterion_result& r) {
        std::cout << iltlab::format_criterion_line(r) << std::endl;
    });
    for (const auto& [name, body] : rep.artifacts)
        iltlab::write_file_atomic((std::filesystem::path(work) / name).string(), body);
    std::size_t passed = 0;
    for (const auto& c : rep.criteria) passed += c.pass;
    std::cout << "acceptance: " << passed << "/" << rep.criteria.size() << " criteria pass" << std::endl;
    return rep.all_pass() ? 0 : 1;
}
