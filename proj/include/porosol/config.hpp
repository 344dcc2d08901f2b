#ifndef POROSOL_CONFIG_HPP
#define POROSOL_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace porosol {

/// Sectioned key=value text config.
///
/// Grammar (line oriented):
///   [section]          starts a section; keys before any section live in ""
///   key = value        value runs to end of line, surrounding blanks trimmed
///   # ... or ; ...     full-line comments
/// Section and key names are case-sensitive. Duplicate keys: last one wins.
/// Numeric lists are comma separated.
struct ConfigFile {
    std::map<std::string, std::map<std::string, std::string>> sections;
    std::vector<std::string> section_order;

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    long get_long(const std::string& section, const std::string& key, long fallback) const;
    std::vector<double> get_double_list(const std::string& section, const std::string& key) const;
};

ConfigFile parse_config(const std::string& text);
ConfigFile load_config(const std::string& path);

/// FNV-1a over the canonicalized section/key/value content; used to stamp
/// outputs so result files can be traced back to the exact configuration.
std::uint64_t config_hash(const ConfigFile& cfg);
std::string config_hash_hex(const ConfigFile& cfg);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace porosol

#endif
