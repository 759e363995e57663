#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "em1d/types.hpp"

namespace em1d {

/// Malformed or invalid configuration; the message names the key and line.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

enum class ValueType { integer, real, string, boolean, real_list, string_list };

struct KeySpec {
  std::string name;
  ValueType type = ValueType::real;
  std::string help;
};

using Schema = std::vector<KeySpec>;

/// Plain key = value text. '#' starts a comment; blank lines are ignored;
/// lists are comma separated.
class Config {
 public:
  static Config parse(std::string_view text, std::string source = "<config>");
  static Config load(const std::filesystem::path& path);

  /// Rejects unknown keys and values that do not parse as their type.
  void validate(const Schema& schema) const;

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  void set(const std::string& key, std::string value);

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_real(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_reals(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<std::string> get_strings(const std::string& key, const std::vector<std::string>& fallback) const;

  /// Sorted key=value lines; identical configs give identical text.
  std::string canonical() const;
  const std::string& source() const { return source_; }

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::string where(const std::string& key) const;

  std::map<std::string, Entry> entries_;
  std::string source_;
};

}  // namespace em1d
