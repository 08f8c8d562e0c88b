#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Flat sectioned key-value config: "[section]" headers, "key = value" lines,
// '#' comments. Keys are addressed as "section.key".
namespace g5 {

class Config {
  public:
    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    bool has(const std::string& key) const;
    std::string get_str(const std::string& key, std::optional<std::string> fallback = {}) const;
    double get_num(const std::string& key, std::optional<double> fallback = {}) const;
    long long get_int(const std::string& key, std::optional<long long> fallback = {}) const;
    bool get_bool(const std::string& key, std::optional<bool> fallback = {}) const;
    std::vector<double> get_list(const std::string& key,
                                 const std::vector<double>& fallback) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

  private:
    std::map<std::string, std::string> entries_;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace g5
