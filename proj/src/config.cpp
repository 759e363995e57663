#include "em1d/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace em1d {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool valid_key(const std::string& k) {
  return !k.empty() && std::all_of(k.begin(), k.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
  });
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

bool parse_real(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* b = s.data();
  const char* e = b + s.size();
  const auto r = std::from_chars(b, e, out);
  return r.ec == std::errc() && r.ptr == e;
}

bool parse_int(const std::string& s, long long& out) {
  if (s.empty()) return false;
  const char* b = s.data();
  const char* e = b + s.size();
  const auto r = std::from_chars(b, e, out);
  return r.ec == std::errc() && r.ptr == e;
}

bool parse_bool(const std::string& s, bool& out) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") {
    out = true;
    return true;
  }
  if (s == "false" || s == "0" || s == "no" || s == "off") {
    out = false;
    return true;
  }
  return false;
}

const char* type_name(ValueType t) {
  switch (t) {
    case ValueType::integer: return "integer";
    case ValueType::real: return "real number";
    case ValueType::string: return "string";
    case ValueType::boolean: return "boolean";
    case ValueType::real_list: return "comma-separated real numbers";
    case ValueType::string_list: return "comma-separated strings";
  }
  return "?";
}

bool conforms(const std::string& v, ValueType t) {
  double d = 0.0;
  long long i = 0;
  bool b = false;
  switch (t) {
    case ValueType::integer: return parse_int(v, i);
    case ValueType::real: return parse_real(v, d);
    case ValueType::string: return !v.empty();
    case ValueType::boolean: return parse_bool(v, b);
    case ValueType::real_list: {
      const auto items = split_list(v);
      return !items.empty() && std::all_of(items.begin(), items.end(), [](const std::string& s) {
        double x = 0.0;
        return parse_real(s, x);
      });
    }
    case ValueType::string_list: {
      const auto items = split_list(v);
      return !items.empty() && std::none_of(items.begin(), items.end(), [](const std::string& s) { return s.empty(); });
    }
  }
  return false;
}

}  // namespace

Config Config::parse(std::string_view text, std::string source) {
  Config c;
  c.source_ = std::move(source);
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string at = c.source_ + ":" + std::to_string(line);
    if (eq == std::string::npos) throw ConfigError(at + ": expected key = value, got '" + body + "'");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (!valid_key(key)) throw ConfigError(at + ": invalid key '" + key + "'");
    if (value.empty()) throw ConfigError(at + ": key '" + key + "' has no value");
    if (c.entries_.count(key))
      throw ConfigError(at + ": duplicate key '" + key + "' (first set on line " + std::to_string(c.entries_[key].line) +
                        ")");
    c.entries_[key] = Entry{value, line};
  }
  return c;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path.string());
}

std::string Config::where(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end() || it->second.line == 0) return source_ + ": key '" + key + "'";
  return source_ + ":" + std::to_string(it->second.line) + ": key '" + key + "'";
}

void Config::validate(const Schema& schema) const {
  for (const auto& [key, entry] : entries_) {
    const auto it = std::find_if(schema.begin(), schema.end(), [&](const KeySpec& k) { return k.name == key; });
    if (it == schema.end()) throw ConfigError(where(key) + " is not a recognized setting");
    if (!conforms(entry.value, it->type))
      throw ConfigError(where(key) + ": expected " + type_name(it->type) + ", got '" + entry.value + "'");
  }
}

void Config::set(const std::string& key, std::string value) {
  require(valid_key(key), "config: invalid key '" + key + "'");
  entries_[key] = Entry{std::move(value), 0};
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second.value;
}

double Config::get_real(const std::string& key, double fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  double v = 0.0;
  if (!parse_real(it->second.value, v)) throw ConfigError(where(key) + ": expected real number, got '" + it->second.value + "'");
  return v;
}

long long Config::get_int(const std::string& key, long long fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  long long v = 0;
  if (!parse_int(it->second.value, v)) throw ConfigError(where(key) + ": expected integer, got '" + it->second.value + "'");
  return v;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  const long long v = get_int(key, static_cast<long long>(fallback));
  if (v < 0) throw ConfigError(where(key) + ": expected a nonnegative integer");
  return static_cast<std::uint64_t>(v);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  bool v = false;
  if (!parse_bool(it->second.value, v)) throw ConfigError(where(key) + ": expected boolean, got '" + it->second.value + "'");
  return v;
}

std::vector<double> Config::get_reals(const std::string& key, const std::vector<double>& fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  std::vector<double> out;
  for (const auto& s : split_list(it->second.value)) {
    double v = 0.0;
    if (!parse_real(s, v)) throw ConfigError(where(key) + ": expected real number, got '" + s + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> Config::get_strings(const std::string& key, const std::vector<std::string>& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : split_list(it->second.value);
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [k, e] : entries_) out += k + "=" + e.value + "\n";
  return out;
}

}  // namespace em1d
