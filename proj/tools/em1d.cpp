#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include <json.hpp>

#include "em1d/commands.hpp"
#include "em1d/kernels.hpp"

namespace {

enum Exit { kOk = 0, kAssertions = 1, kUsage = 2, kNumerical = 3 };

struct Options {
  std::string config;
  std::string out;
  long long seed = -1;
  bool assert_mode = false;
};

int execute(const std::string& command, const Options& o) {
  em1d::Config cfg = o.config.empty() ? em1d::Config::parse("", "<defaults>") : em1d::Config::load(o.config);
  if (o.seed >= 0) cfg.set("seed", std::to_string(o.seed));
  const std::string out = !o.out.empty() ? o.out : cfg.get_string("output_dir", "");
  if (out.empty()) throw em1d::ConfigError("no output directory: pass --out or set output_dir");

  const em1d::CommandReport rep = em1d::run_command(command, cfg, out, o.assert_mode);
  std::fprintf(stderr, "em1d %s: %zu files written to %s (%d threads)\n", command.c_str(), rep.manifest.files.size(),
               out.c_str(), em1d::thread_count());
  if (!o.assert_mode) return kOk;
  nlohmann::ordered_json j;
  j["command"] = command;
  j["passed"] = rep.ok();
  j["failures"] = rep.manifest.failures;
  std::cout << j.dump() << '\n';
  return rep.ok() ? kOk : kAssertions;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral toolkit and simulator for the 1-D Euler-Maxwell system"};
  app.set_version_flag("--version", em1d::version_string());
  app.require_subcommand(1);

  Options o;
  const char* help[] = {"labeled eigenvalues, gaps and expansion residuals",
                        "propagator oracle, projector and envelope checks",
                        "linear norm series from the continuum or grid evaluator",
                        "nonlinear pseudo-spectral run with energy diagnostics",
                        "decay-rate fits and compensated bands"};
  const auto names = em1d::command_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    CLI::App* sub = app.add_subcommand(names[i], help[i]);
    sub->add_option("--config", o.config, "key = value config file")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "existing output directory");
    sub->add_option("--seed", o.seed, "seed, overrides the config")->check(CLI::NonNegativeNumber);
    sub->add_flag("--assert", o.assert_mode, "evaluate acceptance assertions and set the exit code");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return execute(command, o);
  } catch (const em1d::InvalidArgument& e) {
    std::cerr << "em1d " << command << ": " << e.what() << '\n';
    return kUsage;
  } catch (const em1d::NumericalError& e) {
    std::cerr << "em1d " << command << ": numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "em1d " << command << ": " << e.what() << '\n';
    return kNumerical;
  }
}
