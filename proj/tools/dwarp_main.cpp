// dwarp - command line front end

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "dwarp/emit.hpp"
#include "dwarp/version.hpp"

namespace {

// Scenario paths resolve relative to the working directory first, then to
// $DWARP_FIXTURES when set.
std::string resolve_scenario_path(const std::string& path) {
  namespace fs = std::filesystem;
  if (fs::exists(path)) return path;
  if (const char* dir = std::getenv("DWARP_FIXTURES")) {
    fs::path candidate = fs::path(dir) / path;
    if (fs::exists(candidate)) return candidate.string();
  }
  return path;  // let load_scenario produce the error
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"doubly warped product geometry engine"};
  app.set_version_flag("--version", dwarp::kEngineVersion);
  app.require_subcommand(1);

  std::string scenario_path;
  std::string format = "text";
  std::uint64_t seed = 42;
  double tol = 0.0;
  int samples = 0;
  bool seed_set = false, tol_set = false, samples_set = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "override the sampling seed")
        ->each([&](const std::string&) { seed_set = true; });
    cmd->add_option("--tol", tol, "override every check tolerance")
        ->each([&](const std::string&) { tol_set = true; });
    cmd->add_option("--samples", samples, "override the sample count per check")
        ->each([&](const std::string&) { samples_set = true; });
    cmd->add_option("--format", format, "report format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
  };

  CLI::App* verify = app.add_subcommand("verify", "run the checks of a scenario file");
  verify->add_option("scenario", scenario_path, "scenario file")->required();
  add_common(verify);

  CLI::App* list = app.add_subcommand("list-checks", "list available check kinds");

  CLI::App* appendix = app.add_subcommand(
      "appendix-a", "run the built-in 2-D concurrent-field suite");
  int draws = 5;
  appendix->add_option("--draws", draws, "instantiations per family");
  add_common(appendix);

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& [kind, description] : dwarp::check_kinds())
        std::cout << kind << "\n    " << description << "\n";
      return 0;
    }

    dwarp::RunOverrides overrides;
    if (seed_set) overrides.seed = seed;
    if (tol_set) overrides.tol = tol;
    if (samples_set) overrides.samples = samples;

    dwarp::RunReport report;
    if (appendix->parsed()) {
      report = dwarp::run_appendix_a(seed_set ? seed : 42, tol_set ? tol : 1e-9,
                                     samples_set ? samples : 20, draws);
    } else {
      dwarp::Scenario scenario = dwarp::load_scenario(resolve_scenario_path(scenario_path));
      report = dwarp::run(scenario, overrides);
    }
    std::cout << dwarp::emit(report, format);
    return report.all_expected_matched ? 0 : 1;
  } catch (const dwarp::ScenarioError& err) {
    std::cerr << "scenario error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
}
