// Scenario runner: `harness run <scenario>` executes one experiment against
// a throwaway in-process deployment and emits the metric report.

#include <algorithm>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "burngate/harness.hpp"

namespace bg = burngate;

int main(int argc, char** argv) {
  CLI::App app{"attack and persistence scenario runner"};
  app.require_subcommand(1);

  std::string scenario_name, fixtures_dir = "experiments", out_path, stochastic;
  std::uint64_t seed = 42;
  auto* run = app.add_subcommand("run", "execute a scenario");
  run->add_option("scenario", scenario_name, "scenario name")->required();
  run->add_option("--fixtures", fixtures_dir, "fixture directory");
  run->add_option("--out", out_path, "write the json report here");
  run->add_option("--seed", seed, "scenario seed");
  run->add_option("--stochastic", stochastic, "sample faults (p=R)");

  std::string in_path = "report.json", format = "table";
  auto* report_cmd = app.add_subcommand("report", "render a saved report");
  report_cmd->add_option("--in", in_path, "report file");
  report_cmd->add_option("--format", format, "table|json")
      ->check(CLI::IsMember({"table", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (run->parsed()) {
      const auto& known = bg::harness::Scenario::names();
      if (std::find(known.begin(), known.end(), scenario_name) == known.end()) {
        std::cerr << "unknown scenario: " << scenario_name << "\n";
        return 2;
      }
      bg::harness::Scenario scenario;
      scenario.name = scenario_name;
      scenario.seed = seed;
      scenario.fixtures_dir = fixtures_dir;
      if (!stochastic.empty()) {
        std::string value = stochastic;
        if (value.rfind("p=", 0) == 0) value = value.substr(2);
        scenario.stochastic_p = std::stod(value);
      }
      auto report = bg::harness::run_scenario(scenario);
      std::string text = report.to_json_text();
      if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::trunc);
        out << text;
      }
      std::cout << report.to_table_text();
      return 0;
    }
    if (report_cmd->parsed()) {
      std::ifstream in(in_path);
      if (!in) {
        std::cerr << "cannot open " << in_path << "\n";
        return 1;
      }
      nlohmann::json report = nlohmann::json::parse(in, nullptr, false);
      if (report.is_discarded()) {
        std::cerr << "malformed report\n";
        return 1;
      }
      if (format == "json") {
        std::cout << report.dump(2) << "\n";
      } else {
        std::cout << report.value("table", "");
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 2;
}
