#include <CLI11.hpp>
#include <iostream>
#include <optional>

#include "pmstab/errors.hpp"
#include "pmstab/runner.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_override;
    std::optional<unsigned long long> seed_override;
};

pmstab::RunConfig load_with_overrides(const CommonArgs& args) {
    pmstab::RunConfig cfg = pmstab::load_config(args.config_path);
    if (!args.out_override.empty()) cfg.out_dir = args.out_override;
    if (args.seed_override) cfg.seed = *args.seed_override;
    return cfg;
}

void add_common(CLI::App* sub, CommonArgs& args) {
    sub->add_option("--config", args.config_path, "run configuration file")
        ->required();
    sub->add_option("--out", args.out_override, "output directory override");
    sub->add_option("--seed", args.seed_override, "random seed override");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pmstab - stability laboratory for the thermoelastic "
                 "plate-membrane transmission system"};
    app.require_subcommand(1);

    int exit_code = 0;
    auto guarded = [&exit_code](auto&& body) {
        try {
            exit_code = body();
        } catch (const pmstab::ConfigError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            exit_code = 2;
        } catch (const pmstab::UsageError& e) {
            std::cerr << "usage error: " << e.what() << "\n";
            exit_code = 2;
        } catch (const pmstab::NumericalError& e) {
            std::cerr << "numerical error: " << e.what() << "\n";
            exit_code = 3;
        }
    };

    CommonArgs experiment_args;
    for (pmstab::Experiment e :
         {pmstab::Experiment::spectrum, pmstab::Experiment::resolvent,
          pmstab::Experiment::evolve, pmstab::Experiment::decay_probe,
          pmstab::Experiment::symbol_scan, pmstab::Experiment::ls_check,
          pmstab::Experiment::gc_scan, pmstab::Experiment::all}) {
        CLI::App* sub = app.add_subcommand(pmstab::to_string(e),
                                           "run the experiment and write artifacts");
        add_common(sub, experiment_args);
        sub->callback([&, e]() {
            guarded([&]() {
                pmstab::RunConfig cfg = load_with_overrides(experiment_args);
                cfg.experiment = e;
                return pmstab::run(cfg);
            });
        });
    }

    std::string config_a, config_b, compare_out = "out";
    CLI::App* cmp = app.add_subcommand("compare",
                                       "side-by-side verdicts for two configs");
    cmp->add_option("--config-a", config_a, "first configuration")->required();
    cmp->add_option("--config-b", config_b, "second configuration")->required();
    cmp->add_option("--out", compare_out, "output directory");
    cmp->callback([&]() {
        guarded([&]() {
            return pmstab::compare(pmstab::load_config(config_a),
                                   pmstab::load_config(config_b), compare_out);
        });
    });

    CommonArgs grid_args;
    CLI::App* grid = app.add_subcommand("grid-dump", "dump radial nodes and weights");
    add_common(grid, grid_args);
    grid->callback([&]() {
        guarded([&]() { return pmstab::dump_grids(load_with_overrides(grid_args)); });
    });

    CommonArgs op_args;
    CLI::App* opd = app.add_subcommand(
        "operator-dump", "dump per-mode reduced generator and gram (binary)");
    add_common(opd, op_args);
    opd->callback([&]() {
        guarded([&]() { return pmstab::dump_operators(load_with_overrides(op_args)); });
    });

    CLI11_PARSE(app, argc, argv);
    return exit_code;
}
