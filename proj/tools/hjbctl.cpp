// Command-line driver for experiment runs.
#include <hjb/errors.hpp>
#include <hjb/harness.hpp>
#include <hjb/presets.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>

namespace {

int cmd_presets() {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& d : hjb::preset_registry()) {
    out.push_back({{"name", d.name},
                   {"equation_form", d.equation_form},
                   {"description", d.description},
                   {"defaults", d.defaults},
                   {"suites", d.suites},
                   {"infinity_path", d.infinity_path},
                   {"blowup", d.blowup},
                   {"zero_diffusion", d.zero_diffusion},
                   {"strict_class_data", d.strict_class_data}});
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_run(const std::string& config_path) {
  hjb::ExperimentConfig cfg = hjb::ExperimentConfig::from_file(config_path);
  if (const char* env = std::getenv("HJB_OUTPUT_DIR"); env && *env) cfg.output_dir = env;
  const hjb::RunRecord rec = hjb::run_experiment(cfg);
  for (const auto& s : rec.suites) {
    std::cout << s.name << ": " << s.status;
    if (!s.error.empty()) std::cout << " (" << s.error << ')';
    std::cout << '\n';
  }
  std::cout << "summary: " << rec.summary_path() << '\n';
  return rec.all_passed() ? 0 : 1;
}

int cmd_plot(const std::string& record_path, const std::string& what) {
  const hjb::RunRecord rec = hjb::load_run_record(record_path);
  for (const auto& p : hjb::emit_plot_data(rec, hjb::plot_kind_from_string(what))) std::cout << p << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Run HJB verification experiments"};
  app.require_subcommand(1);

  std::string config;
  auto* run = app.add_subcommand("run", "Run the suites of an experiment config");
  run->add_option("--config", config, "Path to the JSON config")->required();

  auto* presets = app.add_subcommand("presets", "List the preset problems");

  std::string record, what;
  auto* plot = app.add_subcommand("plot", "Write CSV series from a finished run");
  plot->add_option("--record", record, "Run directory or its summary.json")->required();
  plot->add_option("--what", what, "profiles | trajectory | envelopes | convergence")
      ->required()
      ->check(CLI::IsMember({"profiles", "trajectory", "envelopes", "convergence"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config);
    if (*presets) return cmd_presets();
    if (*plot) return cmd_plot(record, what);
  } catch (const hjb::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
