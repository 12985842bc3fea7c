#include "blowup/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace blowup {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Drops a trailing comment that is not inside quotes.
std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

std::optional<double> to_number(const std::string& raw) {
    const std::string s = trim(raw);
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (errno != 0 || end != s.c_str() + s.size()) return std::nullopt;
    return v;
}

}  // namespace

Config Config::parse(std::istream& in, const std::string& source) {
    Config cfg;
    cfg.source_ = source;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string body = trim(strip_comment(line));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(source + ":" + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key or value");
        }
        if (cfg.values_.count(key)) {
            throw ConfigError(source + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        }
        cfg.values_[key] = value;
    }
    return cfg;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    return parse(in, path);
}

std::vector<std::string> Config::keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_) out.push_back(k);
    return out;
}

std::optional<double> Config::number(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    const auto v = to_number(it->second);
    if (!v) throw ConfigError(source_ + ": '" + key + "' is not a number");
    return v;
}

std::optional<long long> Config::integer(const std::string& key) const {
    const auto v = number(key);
    if (!v) return std::nullopt;
    if (*v != std::floor(*v)) throw ConfigError(source_ + ": '" + key + "' is not an integer");
    return static_cast<long long>(*v);
}

std::optional<std::string> Config::text(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    const std::string& raw = it->second;
    if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') return raw.substr(1, raw.size() - 2);
    return raw;
}

std::optional<std::vector<double>> Config::list(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    std::string raw = it->second;
    if (raw.front() != '[') {
        // A bare number is a one-element list.
        const auto v = to_number(raw);
        if (!v) throw ConfigError(source_ + ": '" + key + "' is not a number list");
        return std::vector<double>{*v};
    }
    if (raw.back() != ']') throw ConfigError(source_ + ": unterminated list for '" + key + "'");
    raw = raw.substr(1, raw.size() - 2);
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (trim(item).empty()) continue;
        const auto v = to_number(item);
        if (!v) throw ConfigError(source_ + ": bad entry '" + trim(item) + "' in '" + key + "'");
        out.push_back(*v);
    }
    return out;
}

void Config::require_known(const std::vector<std::string>& allowed) const {
    for (const auto& [k, v] : values_) {
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
            throw ConfigError(source_ + ": unknown key '" + k + "'");
        }
    }
}

}  // namespace blowup
