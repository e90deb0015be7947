#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sqc/admissible.hpp"
#include "sqc/config.hpp"

namespace sqc::cli {

enum ExitCode { kOk = 0, kFailure = 2, kConfigError = 3, kUsage = 64 };

/// Resolved settings for one subcommand run. Keys are looked up as "<command>.key", then "key".
struct Context {
    std::string command;
    Config config;
    std::filesystem::path out = "out";
    std::uint64_t seed = 1;
    int jobs = 1;
    double tol = 1e-6;

    bool has(const std::string& key) const;
    std::string str(const std::string& key, const std::string& fallback) const;
    std::string require(const std::string& key) const;
    double num(const std::string& key, double fallback) const;
    long integer(const std::string& key, long fallback) const;
    bool flag(const std::string& key, bool fallback) const;
    std::vector<double> list(const std::string& key, const std::vector<double>& fallback) const;
    std::vector<double> require_list(const std::string& key) const;
    AdmissibleFn fn(const std::string& key, const AdmissibleFn& fallback) const;

    std::string digest() const { return config.digest(); }
    std::string path(const std::string& file) const { return (out / file).string(); }

private:
    std::string resolve(const std::string& key) const;
};

using Command = int (*)(const Context&);

struct CommandInfo {
    const char* name;
    const char* help;
    Command run;
};

const std::vector<CommandInfo>& commands();

}  // namespace sqc::cli
