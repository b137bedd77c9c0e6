#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"periodic-box laboratory runner: suites and solvers as batch jobs"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  const struct {
    const char* name;
    const char* help;
  } cmds[] = {
      {"kernels", "fit table and identity checks for the closed-form kernels"},
      {"stokes", "forced linear solve with the exact energy ledger"},
      {"picard", "contraction iteration on the guaranteed horizon"},
      {"leray", "one mollified solve with majorant and resolution alarms"},
      {"sweep", "mollification ladder and strong L2 convergence report"},
      {"volterra", "singular-kernel solver against its closed form"},
      {"dims", "box-counting dimension of the sequence fixtures"},
  };
  for (const auto& c : cmds) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", config_path, "JSON experiment config")->required();
    sub->add_option("--out", out_override, "output directory (overrides config)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return runner::kConfigError;
  }

  std::string err;
  auto cfg = runner::load_config(config_path, err);
  if (!cfg) {
    std::cerr << "config error: " << err << "\n";
    return runner::kConfigError;
  }
  if (!out_override.empty()) cfg->out_dir = out_override;
  if (cfg->out_dir.empty()) {
    std::cerr << "config error: no output directory (config \"out\" or --out)\n";
    return runner::kConfigError;
  }
  return runner::run_command(app.get_subcommands().front()->get_name(), *cfg);
}
