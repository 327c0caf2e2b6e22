#include <cstdlib>
#include <iostream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "zyg/errors.hpp"
#include "zyg/experiments.hpp"

namespace {

int list_experiments() {
  std::printf("%-16s %-8s %s\n", "experiment", "section", "description");
  for (const auto& d : zyg::experiment_registry())
    std::printf("%-16s %-8s %s\n", d.name.c_str(), ("§" + d.section).c_str(),
                d.description.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
#ifdef _OPENMP
  if (const char* cap = std::getenv("ZYGLAB_THREADS")) {
    const int t = std::atoi(cap);
    if (t > 0) omp_set_num_threads(t);
  }
#endif
  CLI::App app{"zyglab: numerical experiments for Zygmund-dilation harmonic analysis"};
  app.require_subcommand(0, 1);

  std::string config_path, out_dir;
  std::uint64_t seed = 1;
  bool small = false;
  bool have_seed = false;

  auto* list_cmd = app.add_subcommand("list", "list available experiments");
  std::vector<CLI::App*> exp_cmds;
  for (const auto& d : zyg::experiment_registry()) {
    auto* c = app.add_subcommand(d.name, d.description);
    c->add_option("--config", config_path, "key=value config file");
    c->add_option("--seed", seed, "random seed (overrides config)")->each([&](std::string) {
      have_seed = true;
    });
    c->add_option("--out", out_dir, "output directory for report.json, curves/, summary.txt");
    c->add_flag("--small", small, "reduced preset for CI");
    exp_cmds.push_back(c);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (list_cmd->parsed()) return list_experiments();

  const auto subs = app.get_subcommands();
  if (subs.empty()) {
    std::cerr << app.help() << std::endl;
    return 2;
  }
  const std::string name = subs.front()->get_name();
  const auto* def = zyg::find_experiment(name);
  if (!def) {
    std::cerr << "unknown experiment: " << name << "\n";
    return 2;
  }

  try {
    zyg::RunConfig cfg;
    if (!config_path.empty()) cfg = zyg::parse_config_file(config_path);
    if (have_seed || !cfg.has("seed")) cfg.seed = seed;
    cfg.small = small || cfg.gets("preset", "") == "small";
    cfg.out_dir = out_dir;
    auto rep = zyg::run_experiment(*def, cfg);
    if (out_dir.empty()) std::cout << rep.dump() << std::endl;
    if (!rep.passed()) {
      for (const auto& f : rep.failures()) std::cerr << "FAIL " << f << "\n";
      return 1;
    }
    return 0;
  } catch (const zyg::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
