#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shelab/util.hpp"

namespace shelab {

/// Plain-text experiment configuration: `[section]` headers and `key = value`
/// lines, `#` or `;` comments. Keys are addressed as "section.key". The
/// canonical form (sorted keys) backs a reorder-stable hash.
class Config {
public:
    static Config parse_string(const std::string& text, const std::string& origin = "<string>");
    static Config parse_file(const std::string& path);

    bool has(const std::string& key) const { return kv_.count(key) > 0; }
    std::string get_str(const std::string& key) const;
    std::string get_str(const std::string& key, const std::string& fallback) const;
    double get_num(const std::string& key) const;
    double get_num(const std::string& key, double fallback) const;
    long long get_int(const std::string& key) const;
    long long get_int(const std::string& key, long long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_num_list(const std::string& key,
                                     const std::vector<double>& fallback) const;

    void set(const std::string& key, const std::string& value) { kv_[key] = value; }

    /// Sorted "key = value" lines; independent of declaration order.
    std::string canonical() const;
    /// FNV-1a of the canonical form, hex.
    std::string hash() const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

    /// Rejects keys absent from the schema listing (typo guard).
    void validate_keys(const std::vector<std::string>& known) const;

private:
    std::map<std::string, std::string> kv_;
};

/// Schema of every recognized key, with one-line descriptions (also used to
/// generate docs/config reference output).
struct ConfigKeyDoc {
    const char* key;
    const char* type;
    const char* doc;
};
const std::vector<ConfigKeyDoc>& config_schema();
std::vector<std::string> config_known_keys();

} // namespace shelab
