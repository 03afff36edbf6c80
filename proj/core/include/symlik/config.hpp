#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace symlik {

// Flat sectioned key-value config files:
//   [section]
//   key = value      # comment
// Values are strings; typed getters parse on demand and name the key in
// any error they raise.
class Config {
 public:
  static Config parse(const std::string& text, const std::string& origin = "<config>");
  static Config load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  int get_int(const std::string& section, const std::string& key) const;
  int get_int_or(const std::string& section, const std::string& key, int fallback) const;
  std::vector<double> get_doubles(const std::string& section, const std::string& key) const;
  std::vector<int> get_ints(const std::string& section, const std::string& key) const;

  const std::map<std::string, std::map<std::string, std::string>>& sections() const {
    return sections_;
  }

 private:
  std::string origin_;
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

}  // namespace symlik
