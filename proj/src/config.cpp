#include "g5/config.hpp"

#include <fstream>
#include <sstream>

namespace g5 {
namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

Config Config::from_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config: bad section header at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: expected key = value at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config: empty key at line " + std::to_string(lineno));
        cfg.entries_[section.empty() ? key : section + "." + key] = value;
    }
    return cfg;
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string Config::get_str(const std::string& key, std::optional<std::string> fallback) const {
    auto it = entries_.find(key);
    if (it != entries_.end()) return it->second;
    if (fallback) return *fallback;
    throw ConfigError("config: missing key " + key);
}

double Config::get_num(const std::string& key, std::optional<double> fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        if (fallback) return *fallback;
        throw ConfigError("config: missing key " + key);
    }
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key " + key + " is not a number: " + it->second);
    }
}

long long Config::get_int(const std::string& key, std::optional<long long> fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        if (fallback) return *fallback;
        throw ConfigError("config: missing key " + key);
    }
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key " + key + " is not an integer: " + it->second);
    }
}

bool Config::get_bool(const std::string& key, std::optional<bool> fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        if (fallback) return *fallback;
        throw ConfigError("config: missing key " + key);
    }
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ConfigError("config: key " + key + " is not a boolean: " + it->second);
}

std::vector<double> Config::get_list(const std::string& key,
                                     const std::vector<double>& fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::vector<double> out;
    std::istringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError("config: key " + key + " has a non-numeric entry: " + tok);
        }
    }
    if (out.empty()) throw ConfigError("config: key " + key + " is an empty list");
    return out;
}

}  // namespace g5
