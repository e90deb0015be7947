#include "sqc/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sqc {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double to_double(const std::string& text, const std::string& field) {
    const std::string s = trim(text);
    if (s == "inf" || s == "+inf") return HUGE_VAL;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw ConfigError(field, "field '" + field + "': not a number: '" + s + "'");
    return v;
}

}  // namespace

Config Config::parse(std::istream& in, const std::string& origin) {
    Config c;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto cut = line.find_first_of("#;");
        if (cut != std::string::npos) line.erase(cut);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("", origin + ":" + std::to_string(lineno) + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("", origin + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("", origin + ":" + std::to_string(lineno) + ": empty key");
        c.set(section.empty() ? key : section + "." + key, trim(line.substr(eq + 1)));
    }
    return c;
}

Config Config::parse_string(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
    return parse(in, path);
}

void Config::set(const std::string& key, const std::string& value) { entries_[key] = value; }

void Config::set_assignment(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError(assignment, "expected key=value, got '" + assignment + "'");
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string Config::get(const std::string& key, const std::string& fallback) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

std::string Config::require(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError(key, "missing required field '" + key + "'");
    return it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
    return has(key) ? to_double(require(key), key) : fallback;
}

double Config::require_double(const std::string& key) const { return to_double(require(key), key); }

long Config::get_int(const std::string& key, long fallback) const {
    if (!has(key)) return fallback;
    const double v = to_double(require(key), key);
    if (v != std::floor(v)) throw ConfigError(key, "field '" + key + "': expected an integer");
    return static_cast<long>(v);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    std::string v = require(key);
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw ConfigError(key, "field '" + key + "': expected a boolean");
}

std::vector<double> parse_number_list(const std::string& text, const std::string& field) {
    std::string s = text;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream in(s);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) {
        const auto colon = tok.find(':');
        if (colon == std::string::npos) {
            out.push_back(to_double(tok, field));
            continue;
        }
        const auto colon2 = tok.find(':', colon + 1);
        const double a = to_double(tok.substr(0, colon), field);
        const double b = to_double(tok.substr(colon + 1, colon2 == std::string::npos ? std::string::npos : colon2 - colon - 1), field);
        const double h = colon2 == std::string::npos ? 1.0 : to_double(tok.substr(colon2 + 1), field);
        if (!(h > 0.0)) throw ConfigError(field, "field '" + field + "': range step must be positive");
        const long count = static_cast<long>(std::floor((b - a) / h + 1e-9));
        for (long i = 0; i <= count; ++i) out.push_back(a + static_cast<double>(i) * h);
    }
    return out;
}

std::vector<double> Config::get_list(const std::string& key, const std::vector<double>& fallback) const {
    if (!has(key)) return fallback;
    auto v = parse_number_list(require(key), key);
    if (v.empty()) throw ConfigError(key, "field '" + key + "': empty list");
    return v;
}

std::vector<double> Config::require_list(const std::string& key) const {
    auto v = parse_number_list(require(key), key);
    if (v.empty()) throw ConfigError(key, "field '" + key + "': empty list");
    return v;
}

std::string Config::canonical() const {
    std::string out;
    for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
    return out;
}

std::string Config::digest() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace sqc
