#pragma once

#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace sqc {

/// Raised on unparsable input or a missing / malformed field; field() names the key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& what) : std::runtime_error(what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// Line-oriented key = value store. "[name]" opens a section; keys inside are stored as "name.key".
/// '#' and ';' start comments. Later assignments override earlier ones.
class Config {
public:
    static Config parse(std::istream& in, const std::string& origin = "<input>");
    static Config parse_string(const std::string& text);
    static Config load(const std::string& path);

    void set(const std::string& key, const std::string& value);
    /// Accepts "key=value" or "section.key=value".
    void set_assignment(const std::string& assignment);

    bool has(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback) const;
    std::string require(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    double require_double(const std::string& key) const;
    long get_int(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    /// Comma or whitespace separated numbers; "a:b" expands to integers a..b, "a:b:h" to a, a+h, ... <= b.
    std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;
    std::vector<double> require_list(const std::string& key) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }
    /// Canonical "key=value" lines, sorted.
    std::string canonical() const;
    /// 16 hex digits of FNV-1a over the canonical form.
    std::string digest() const;

private:
    std::map<std::string, std::string> entries_;
};

std::vector<double> parse_number_list(const std::string& text, const std::string& field);

}  // namespace sqc
