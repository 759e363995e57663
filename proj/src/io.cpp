#include "em1d/io.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace em1d {

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) != 1 || EVP_DigestFinal_ex(ctx, md, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw NumericalError("sha256: digest failed");
  }
  EVP_MD_CTX_free(ctx);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  const auto tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw InvalidArgument("cannot write '" + tmp + "'");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) throw InvalidArgument("write failed for '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw InvalidArgument("cannot rename '" + tmp + "' to '" + path.string() + "': " + ec.message());
  }
}

OutputDir::OutputDir(std::filesystem::path dir) : dir_(std::move(dir)) {
  if (!std::filesystem::is_directory(dir_)) throw InvalidArgument("output directory '" + dir_.string() + "' does not exist");
}

void OutputDir::write(const std::string& name, std::string_view content) {
  write_atomic(dir_ / name, content);
  files_.push_back(OutputFile{name, sha256_hex(content), content.size()});
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["version"] = version;
  j["seed"] = seed;
  j["config"] = config;
  j["config_sha256"] = sha256_hex(config);
  j["started"] = started;
  j["finished"] = finished;
  j["files"] = nlohmann::ordered_json::array();
  for (const auto& f : files) j["files"].push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  j["assertions_enabled"] = assertions_enabled;
  j["failures"] = failures;
  return j.dump(2) + "\n";
}

void write_snapshot(OutputDir& out, const PhysState& s, int index, const std::string& config_hash) {
  write_snapshot(out, s, std::to_string(index), config_hash);
}

void write_snapshot(OutputDir& out, const PhysState& s, const std::string& label, const std::string& config_hash) {
  static const std::pair<const char*, Component> fields[] = {
      {"rho", Component::rho}, {"u1", Component::u1}, {"E1", Component::E1}, {"u2", Component::u2}, {"u3", Component::u3},
      {"E2", Component::E2},   {"E3", Component::E3}, {"B2", Component::B2}, {"B3", Component::B3}};
  const std::string stem = "snapshot_" + label;
  nlohmann::ordered_json m;
  m["time"] = s.t;
  m["grid"] = {{"L", s.grid.length()}, {"N", s.grid.size()}};
  m["config_sha256"] = config_hash;
  m["fields"] = nlohmann::ordered_json::array();
  for (const auto& [name, comp] : fields) {
    const auto v = s.field(comp);
    std::ostringstream os;
    os.precision(17);
    os << "x,value\n";
    for (int i = 0; i < s.grid.size(); ++i) os << s.grid.x(i) << ',' << v[static_cast<std::size_t>(i)] << '\n';
    const std::string file = stem + "_" + name + ".csv";
    out.write(file, os.str());
    m["fields"].push_back(file);
  }
  out.write(stem + ".json", m.dump(2) + "\n");
}

}  // namespace em1d
