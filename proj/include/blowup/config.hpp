// Flat TOML-style configuration: one `key = value` per line, `#` comments,
// numbers, "quoted strings" and [a, b, c] number lists.
#pragma once

#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace blowup {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Config {
public:
    static Config parse(std::istream& in, const std::string& source = "<input>");
    static Config load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::vector<std::string> keys() const;

    std::optional<double> number(const std::string& key) const;
    std::optional<long long> integer(const std::string& key) const;
    std::optional<std::string> text(const std::string& key) const;
    std::optional<std::vector<double>> list(const std::string& key) const;

    /// Throws ConfigError naming the first key outside `allowed`.
    void require_known(const std::vector<std::string>& allowed) const;

    void set(const std::string& key, const std::string& raw) { values_[key] = raw; }

private:
    std::map<std::string, std::string> values_;
    std::string source_;
};

}  // namespace blowup
