#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "homsim/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Two-photon interference scans for the integrated source+converter circuit"};
  app.set_version_flag("--version", homsim::kVersion);

  std::string config_path;
  std::string experiment;
  std::string out_dir = ".";
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--experiment", experiment,
                 "preset: fig3a fig3b fig4 fig5 fig6a fig6b custom");
  app.add_option("--out", out_dir, "output directory (CSV series + manifest)");
  app.add_option("--set", overrides, "override, e.g. --set dispersion.n_V=2.21");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return 2;
  }

  homsim::RunConfig config;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "config error: cannot read " << config_path << "\n";
        return 2;
      }
      std::stringstream text;
      text << in.rdbuf();
      config = homsim::parse_config(text.str());
    }
    if (!experiment.empty()) homsim::apply_override(config, "experiment=" + experiment);
    for (const std::string& kv : overrides) homsim::apply_override(config, kv);
    homsim::validate_config(config);
  } catch (const homsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    const homsim::RunOutput out = homsim::run(config, out_dir);
    for (const std::string& f : out.csv_files) std::cout << f << "\n";
    std::cout << out.manifest_file << "\n";
  } catch (const homsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
