#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>
#include <type_traits>
#include <variant>

#include "dilab/config.hpp"
#include "dilab/error.hpp"
#include "dilab/experiments.hpp"
#include "dilab/report.hpp"

namespace {

using dilab::ExperimentConfig;

ExperimentConfig load(const std::string& path, const std::vector<std::string>& overrides, const std::string& out) {
  ExperimentConfig cfg = ExperimentConfig::from_file(path);
  for (const std::string& s : overrides) cfg.set(s);
  if (!out.empty()) cfg.set("output.directory", std::string(out));
  return cfg;
}

int finish(const dilab::RunOutcome& outcome, const ExperimentConfig& cfg) {
  for (const dilab::Criterion& c : outcome.report.criteria) std::cout << dilab::summary_line(c) << '\n';
  if (outcome.has_report) {
    const std::filesystem::path dir = cfg.text("output.directory");
    try {
      dilab::write_report(outcome.report, dir, cfg.texts("output.formats"));
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return dilab::exit_schema;
    }
    std::cout << "report: " << (dir / "report.json").string() << '\n';
  }
  if (outcome.exit_code != dilab::exit_ok && outcome.exit_code != dilab::exit_failed)
    std::cerr << "error: " << outcome.message << '\n';
  return outcome.exit_code;
}

std::string show(const dilab::ConfigValue& v) {
  std::ostringstream os;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, bool>) {
          os << (x ? "true" : "false");
        } else if constexpr (std::is_same_v<T, double>) {
          os << x;
        } else if constexpr (std::is_same_v<T, std::string>) {
          os << '"' << x << '"';
        } else {
          os << '[';
          for (std::size_t i = 0; i < x.size(); ++i) {
            if (i) os << ", ";
            if constexpr (std::is_same_v<T, std::vector<std::string>>) os << '"' << x[i] << '"';
            else os << x[i];
          }
          os << ']';
        }
      },
      v);
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical studies of Schrodinger flows with potential"};
  app.require_subcommand(1);

  std::string config_path, out_dir, axis = "N";
  std::vector<std::string> overrides;

  CLI::App* run = app.add_subcommand("run", "run a study and write its report");
  run->add_option("config", config_path, "experiment config")->required();
  run->add_option("--set", overrides, "override section.key=value")->take_all();
  run->add_option("--out", out_dir, "output directory");

  CLI::App* conv = app.add_subcommand("convergence", "rerun a study along a refinement ladder and fit its order");
  conv->add_option("config", config_path, "experiment config")->required();
  conv->add_option("--axis", axis, "N | dt | T | eps")->check(CLI::IsMember({"N", "dt", "T", "eps"}));
  conv->add_option("--set", overrides, "override section.key=value")->take_all();
  conv->add_option("--out", out_dir, "output directory");

  CLI::App* list = app.add_subcommand("list-experiments", "list the available studies");

  CLI::App* keys = app.add_subcommand("list-keys", "list every config key with its default");

  CLI::App* validate = app.add_subcommand("validate", "check a config without running it");
  validate->add_option("config", config_path, "experiment config")->required();
  validate->add_option("--set", overrides, "override section.key=value")->take_all();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dilab::exit_schema;
  }

  if (list->parsed()) {
    for (const dilab::StudyInfo& s : dilab::experiments()) std::cout << s.name << "  " << s.summary << '\n';
    return 0;
  }

  if (keys->parsed()) {
    for (const dilab::SchemaEntry& e : dilab::config_schema())
      std::cout << e.key << " = " << show(e.fallback) << "  # " << e.help << '\n';
    return 0;
  }

  ExperimentConfig cfg;
  try {
    cfg = load(config_path, overrides, out_dir);
    if (validate->parsed()) {
      dilab::validate_config(cfg);
      std::cout << "ok: " << cfg.experiment() << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return dilab::exit_schema;
  }

  if (run->parsed()) return finish(dilab::run_experiment(cfg), cfg);
  return finish(dilab::run_convergence(cfg, dilab::parse_axis(axis)), cfg);
}
