#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "moran/experiments.hpp"

namespace {

struct CommonOpts {
    std::string experiment;
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> cells;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--experiment", o.experiment,
                    "discrete-vs-pde | strong-selection | hawkdove-peak | kimura-stationary | "
                    "mixed-dominance")
        ->required();
    cmd->add_option("--config", o.config_path, "JSON config file (defaults used when omitted)");
    cmd->add_option("--out", o.out_dir, "output directory")->required();
    cmd->add_option("--seed", o.seed, "random seed override");
    cmd->add_option("--cells", o.cells, "grid cells override");
    cmd->add_flag("--quiet", o.quiet, "suppress progress output");
}

moran::ExperimentConfig build_config(const CommonOpts& o) {
    moran::ExperimentConfig cfg;
    if (o.config_path.empty()) {
        cfg = moran::default_config(moran::experiment_from_string(o.experiment));
    } else {
        cfg = moran::ExperimentConfig::load(o.config_path);
        if (moran::to_string(cfg.experiment) != o.experiment)
            throw std::invalid_argument("--experiment does not match the config file");
    }
    if (o.seed) cfg.seed = *o.seed;
    if (o.cells) cfg.cells = *o.cells;
    cfg.out_dir = o.out_dir;
    cfg.validate();
    return cfg;
}

void print_summary(const moran::RunReport& rep, const std::string& out_dir) {
    std::printf("experiment %s: %zu snapshot stream(s), %zu study row(s), %.0f ms\n",
                moran::to_string(rep.config.experiment).c_str(), rep.snapshots.size(),
                rep.study.size(), rep.wall_ms);
    for (const std::string& n : rep.notes) std::printf("note: %s\n", n.c_str());
    std::printf("wrote %s\n", out_dir.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized Moran process and its continuum limits"};
    app.set_version_flag("--version", moran::kVersion);
    app.require_subcommand(1);

    CommonOpts run_opts, study_opts;
    CLI::App* run = app.add_subcommand("run", "run a named experiment and write CSV output");
    add_common(run, run_opts);
    CLI::App* study =
        app.add_subcommand("study", "run a convergence/refinement study and write CSV output");
    add_common(study, study_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const auto cfg = build_config(run_opts);
            const auto rep = moran::run_experiment(cfg);
            rep.write(run_opts.out_dir);
            if (!run_opts.quiet) print_summary(rep, run_opts.out_dir);
        } else {
            const auto cfg = build_config(study_opts);
            const auto rep = moran::convergence_study(cfg);
            rep.write(study_opts.out_dir);
            if (!study_opts.quiet) print_summary(rep, study_opts.out_dir);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
