#include <doctest.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "em1d/config.hpp"
#include "em1d/io.hpp"

using namespace em1d;
namespace fs = std::filesystem;

namespace {

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("em1d_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

const Schema kSchema{{"L", ValueType::real, ""},
                     {"N", ValueType::integer, ""},
                     {"init.family", ValueType::string, ""},
                     {"t_values", ValueType::real_list, ""},
                     {"flag", ValueType::boolean, ""}};

}  // namespace

TEST_CASE("config parsing") {
  const Config c = Config::parse("# header\nL = 6.5  # trailing\n\nN=64\ninit.family = bump\nt_values = 1, 2.5,1e3\nflag = true\n");
  c.validate(kSchema);
  CHECK(c.get_real("L", 0) == 6.5);
  CHECK(c.get_int("N", 0) == 64);
  CHECK(c.get_string("init.family", "") == "bump");
  CHECK(c.get_reals("t_values", {}) == std::vector<double>{1, 2.5, 1e3});
  CHECK(c.get_bool("flag", false));
  CHECK(c.get_real("missing", 7.0) == 7.0);
  CHECK(c.canonical() == "L=6.5\nN=64\nflag=true\ninit.family=bump\nt_values=1, 2.5,1e3\n");
}

TEST_CASE("config errors name the line and key") {
  CHECK(message_of([] { Config::parse("L = 1\nN 3\n", "a.cfg"); }).find("a.cfg:2") != std::string::npos);
  CHECK(message_of([] { Config::parse("L = 1\nL = 2\n", "a.cfg"); }).find("duplicate key 'L'") != std::string::npos);
  CHECK(message_of([] { Config::parse("L =\n", "a.cfg"); }).find("'L'") != std::string::npos);
  CHECK(message_of([] { Config::parse("bad key = 1\n", "a.cfg"); }).find("a.cfg:1") != std::string::npos);

  const Config unknown = Config::parse("L = 1\nwidht = 2\n", "b.cfg");
  const std::string m = message_of([&] { unknown.validate(kSchema); });
  CHECK(m.find("widht") != std::string::npos);
  CHECK(m.find("b.cfg:2") != std::string::npos);

  const Config typed = Config::parse("N = 6.5\n", "c.cfg");
  CHECK(message_of([&] { typed.validate(kSchema); }).find("'N'") != std::string::npos);
  CHECK_THROWS_AS(Config::load("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("atomic writes and output directory") {
  const fs::path d = fresh_dir("io");
  write_atomic(d / "a.txt", "first");
  write_atomic(d / "a.txt", "second");
  CHECK(slurp(d / "a.txt") == "second");
  for (const auto& e : fs::directory_iterator(d)) CHECK(e.path().filename() == "a.txt");

  CHECK_THROWS_AS(OutputDir(d / "missing"), InvalidArgument);
  OutputDir out(d);
  out.write("b.csv", "x,value\n1,2\n");
  REQUIRE(out.files().size() == 1);
  CHECK(out.files()[0].sha256 == sha256_hex("x,value\n1,2\n"));
  CHECK(out.files()[0].bytes == 12);
  fs::remove_all(d);
}

TEST_CASE("manifest json") {
  RunManifest m;
  m.command = "rates";
  m.config = "a=1\n";
  m.version = "1.0";
  m.seed = 7;
  m.files = {{"r.json", "abcd", 4}};
  m.failures = {"slope_B_r"};
  const auto j = nlohmann::json::parse(m.to_json());
  CHECK(j["command"] == "rates");
  CHECK(j["seed"] == 7);
  CHECK(j["config_sha256"] == sha256_hex("a=1\n"));
  CHECK(j["files"][0]["name"] == "r.json");
  CHECK(j["failures"][0] == "slope_B_r");
}

TEST_CASE("snapshot files") {
  const fs::path d = fresh_dir("snap");
  OutputDir out(d);
  PhysState s(Grid(2.0 * kPi, 16));
  s.t = 3.5;
  write_snapshot(out, s, 2, "hash");
  CHECK(out.files().size() == 10);
  const auto j = nlohmann::json::parse(slurp(d / "snapshot_2.json"));
  CHECK(j["time"] == 3.5);
  CHECK(j["grid"]["N"] == 16);
  CHECK(j["config_sha256"] == "hash");
  CHECK(j["fields"].size() == 9);
  fs::remove_all(d);
}
