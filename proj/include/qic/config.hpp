#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qic {

/// Line-oriented config text: `[section]` headers, `key = value` entries,
/// `#` comments, blank lines ignored. Sections and keys keep file order;
/// duplicate keys within a section are rejected.
struct ConfigFile {
    using Entries = std::vector<std::pair<std::string, std::string>>;
    std::vector<std::pair<std::string, Entries>> sections;

    const Entries* find_section(const std::string& name) const {
        for (const auto& [sec, entries] : sections)
            if (sec == name) return &entries;
        return nullptr;
    }

    const std::string* find(const std::string& section, const std::string& key) const {
        const Entries* entries = find_section(section);
        if (!entries) return nullptr;
        for (const auto& [k, v] : *entries)
            if (k == key) return &v;
        return nullptr;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

}  // namespace detail

inline ConfigFile parse_config(const std::string& text) {
    ConfigFile cfg;
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    ConfigFile::Entries* current = nullptr;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = detail::trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("config line " + std::to_string(lineno) +
                                         ": unterminated section header");
            const std::string name = detail::trim(line.substr(1, line.size() - 2));
            if (name.empty())
                throw std::runtime_error("config line " + std::to_string(lineno) +
                                         ": empty section name");
            if (cfg.find_section(name))
                throw std::runtime_error("config line " + std::to_string(lineno) +
                                         ": duplicate section [" + name + "]");
            cfg.sections.emplace_back(name, ConfigFile::Entries{});
            current = &cfg.sections.back().second;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected `key = value`");
        if (!current)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": entry before any [section]");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key");
        for (const auto& [k, v] : *current)
            if (k == key)
                throw std::runtime_error("config line " + std::to_string(lineno) +
                                         ": duplicate key `" + key + "`");
        current->emplace_back(key, value);
    }
    return cfg;
}

inline std::string emit_config(const ConfigFile& cfg) {
    std::string out;
    bool first = true;
    for (const auto& [name, entries] : cfg.sections) {
        if (!first) out += "\n";
        first = false;
        out += "[" + name + "]\n";
        for (const auto& [k, v] : entries) out += k + " = " + v + "\n";
    }
    return out;
}

/// Whitespace-separated list values.
inline std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::istringstream in(value);
    std::string item;
    while (in >> item) items.push_back(item);
    return items;
}

inline long long parse_int(const std::string& value, const std::string& what) {
    std::size_t used = 0;
    long long result = 0;
    try {
        result = std::stoll(value, &used);
    } catch (const std::exception&) {
        throw std::runtime_error("bad integer for " + what + ": `" + value + "`");
    }
    if (used != value.size())
        throw std::runtime_error("bad integer for " + what + ": `" + value + "`");
    return result;
}

inline std::uint64_t parse_uint(const std::string& value, const std::string& what) {
    const long long v = parse_int(value, what);
    if (v < 0) throw std::runtime_error(what + " must be non-negative, got `" + value + "`");
    return static_cast<std::uint64_t>(v);
}

}  // namespace qic
