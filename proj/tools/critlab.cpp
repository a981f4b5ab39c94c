#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "critlab/config.hpp"
#include "critlab/harness.hpp"

namespace {

struct SubArgs {
  std::string config_path;
  critlab::CliOptions opt;
  std::uint64_t seed_value = 0;
  bool seed_given = false;
};

void add_common(CLI::App* sub, SubArgs& args, bool with_plot) {
  sub->add_option("--config", args.config_path, "run config file")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--out", args.opt.out_dir, "output directory");
  sub->add_option("--seed", args.seed_value, "override the config seed")
      ->each([&args](const std::string&) { args.seed_given = true; });
  sub->add_option("--parallel", args.opt.parallel,
                  "worker threads for independent trials/grid cells")
      ->check(CLI::PositiveNumber);
  if (with_plot) sub->add_flag("--plot", args.opt.plot, "write an SVG plot");
}

int dispatch(const std::string& name, SubArgs& args) {
  if (args.seed_given) args.opt.seed = args.seed_value;
  critlab::RunConfig cfg = critlab::RunConfig::parse_file(args.config_path);
  if (name == "collapse-check") return critlab::run_collapse_check(cfg, args.opt);
  if (name == "surrogate-demo") return critlab::run_surrogate_demo(cfg, args.opt);
  if (name == "train") return critlab::run_train(cfg, args.opt);
  return critlab::run_sweep(cfg, args.opt);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "critlab: learning criteria over loss distributions, collapse checks "
      "and ascent-descent training experiments"};
  app.require_subcommand(1);

  SubArgs collapse_args, surrogate_args, train_args, sweep_args;
  add_common(app.add_subcommand("collapse-check",
                                "argmin sets and collapse verdicts on finite "
                                "hypothesis classes"),
             collapse_args, false);
  add_common(app.add_subcommand("surrogate-demo",
                                "three-point divergence table and restraint "
                                "witnesses"),
             surrogate_args, false);
  add_common(app.add_subcommand("train", "one training run with metric logging"),
             train_args, true);
  add_common(app.add_subcommand("sweep",
                                "hyperparameter grids with validation-accuracy "
                                "selection"),
             sweep_args, false);

  CLI11_PARSE(app, argc, argv);

  std::string name = app.get_subcommands().front()->get_name();
  SubArgs& args = name == "collapse-check"  ? collapse_args
                  : name == "surrogate-demo" ? surrogate_args
                  : name == "train"          ? train_args
                                             : sweep_args;
  try {
    return dispatch(name, args);
  } catch (const critlab::ConfigError& ex) {
    std::cerr << "config error: " << ex.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "config error: " << ex.what() << '\n';
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "numeric failure: " << ex.what() << '\n';
    return 3;
  }
}
