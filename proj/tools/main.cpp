#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <stdexcept>

#include "commands.hpp"
#include "sqc/report.hpp"

using namespace sqc;
using namespace sqc::cli;

int main(int argc, char** argv) {
    CLI::App app{"Sublinear quasiconformal structures: moduli, capacities and model spaces"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::string out = "out";
    std::uint64_t seed = 1;
    int jobs = 1;
    double tol = 1e-6;
    std::vector<std::string> assignments;
    app.add_option("--config", config_path, "key=value configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", out, "output directory");
    app.add_option("--seed", seed, "master seed");
    app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--tol", tol, "solver tolerance")->check(CLI::PositiveNumber);

    const CommandInfo* chosen = nullptr;
    for (const auto& info : commands()) {
        auto* sub = app.add_subcommand(info.name, info.help);
        sub->add_option("assignments", assignments, "key=value overrides");
        sub->fallthrough();
        sub->callback([&chosen, &info] { chosen = &info; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return kUsage;
    }
    if (!chosen) {
        std::cerr << app.help();
        return kUsage;
    }

    Context ctx;
    ctx.command = chosen->name;
    ctx.out = out;
    ctx.seed = seed;
    ctx.jobs = jobs;
    ctx.tol = tol;
    try {
        if (!config_path.empty()) ctx.config = Config::load(config_path);
        for (const auto& a : assignments) ctx.config.set_assignment(a);
        // flags are part of the run identity
        ctx.config.set("_seed", std::to_string(seed));
        ctx.config.set("_tol", format_number(tol));
        std::filesystem::create_directories(ctx.out);
        return chosen->run(ctx);
    } catch (const ConfigError& e) {
        std::cerr << "config error";
        if (!e.field().empty()) std::cerr << " [" << e.field() << "]";
        std::cerr << ": " << e.what() << "\n";
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::length_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
