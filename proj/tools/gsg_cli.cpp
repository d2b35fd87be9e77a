// gsg <subcommand> --config <path> --out <dir> [--preset NAME] [--threads N] [--seed N]

#include <algorithm>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gsg/cli_io.hpp"

namespace {

int report(gsg::ErrorClass cls, const std::string& message, const std::string& key_path = {}) {
  nlohmann::json err = {{"error", gsg::to_string(cls)}, {"message", message}};
  if (!key_path.empty()) err["key_path"] = key_path;
  std::cerr << err.dump() << '\n';
  return static_cast<int>(cls);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gravity-induced entanglement of spin-carrying masses"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir = "gsg_out";
  std::string preset;
  unsigned threads = 1;
  unsigned long long seed = 0;

  for (const auto& name : gsg::io::subcommands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON configuration file");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--preset", preset, "named preset, e.g. paper-2017-screened");
    sub->add_option("--threads", threads, "worker threads for sweeps")->check(CLI::Range(1u, 1024u));
    sub->add_option("--seed", seed, "reserved; every current path is deterministic");
  }

  if (argc > 1 && argv[1][0] != '-') {
    const auto& names = gsg::io::subcommands();
    if (std::find(names.begin(), names.end(), argv[1]) == names.end())
      return report(gsg::ErrorClass::config, std::string("unknown subcommand '") + argv[1] + "'");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report(gsg::ErrorClass::config, e.what());
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    std::optional<std::string> preset_opt;
    if (!preset.empty()) preset_opt = preset;
    gsg::io::RunConfig cfg;
    if (config_path.empty())
      cfg = gsg::io::parse_config_text("{}", preset_opt ? preset_opt : std::string(gsg::io::preset_screened));
    else
      cfg = gsg::io::parse_config_file(config_path, preset_opt);
    const auto manifest = gsg::io::run_subcommand(name, cfg, out_dir, threads);
    std::cout << nlohmann::json({{"subcommand", name}, {"results", manifest.results}}).dump(2) << '\n';
    return 0;
  } catch (const gsg::ConfigError& e) {
    return report(e.error_class(), e.what(), e.key_path());
  } catch (const gsg::Error& e) {
    return report(e.error_class(), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return report(gsg::ErrorClass::io, e.what());
  } catch (const std::exception& e) {
    return report(gsg::ErrorClass::numerical, e.what());
  }
}
