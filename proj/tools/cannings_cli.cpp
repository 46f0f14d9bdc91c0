// Command-line front end. Talks to the shared library through the C API
// only; all model logic lives behind it.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "cannings/cannings.h"

namespace {

struct CommonArgs {
    std::string config;
    std::string config_flag;
    std::string out;
    long long seed = 0;
    bool has_seed = false;
    long long cap = 0;
    bool has_cap = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("config", args.config, "scenario config file (TOML)");
    cmd->add_option("--config", args.config_flag, "scenario config file (TOML)");
    cmd->add_option("--out", args.out, "output CSV path")->required();
    cmd->add_option("--seed", args.seed, "RNG seed override")->each([&args](const std::string&) {
        args.has_seed = true;
    });
    cmd->add_option("--cap", args.cap, "state-space cap override")->each([&args](const std::string&) {
        args.has_cap = true;
    });
}

int dispatch(const std::string& name, const CommonArgs& args, cn_run_options opts) {
    std::string config = args.config.empty() ? args.config_flag : args.config;
    if (config.empty()) {
        std::fprintf(stderr, "error: a config file is required (positional or --config)\n");
        return 1;
    }
    opts.seed = args.seed;
    opts.has_seed = args.has_seed ? 1 : 0;
    opts.cap = args.cap;
    opts.has_cap = args.has_cap ? 1 : 0;
    int code = cn_run(name.c_str(), config.c_str(), args.out.c_str(), &opts);
    if (code != 0) std::fprintf(stderr, "error: %s\n", cn_last_error());
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact matrices, limits and Monte Carlo for multi-type exchangeable population models"};
    app.set_version_flag("--version", std::string(cn_version()));
    app.require_subcommand(1);

    struct SubState {
        CommonArgs common;
        std::string mode;
        std::string n_grid;
        std::string t_grid;
        long long reps = 0;
        bool has_reps = false;
        long long horizon = 0;
        bool has_horizon = false;
    };

    std::vector<std::string> names = {"exact-forward",  "exact-backward", "exact-backward-variable",
                                      "simulate",       "limit-check",    "gw-limit",
                                      "rates",          "block-gen"};
    std::vector<std::string> descriptions = {
        "exact forward transition matrix over type counts",
        "exact backward transition matrix over typed partitions",
        "backward matrices of the variable-size model (with row sums)",
        "Monte Carlo paths (forward, backward or gw mode)",
        "finite-size vs limiting semigroup sup-norm errors",
        "finite-size one-step law vs branching limit",
        "merger-rate table of the configured limit measures",
        "block counting generator of the limiting coalescent"};

    std::vector<SubState> states(names.size());
    std::vector<CLI::App*> cmds;
    for (size_t idx = 0; idx < names.size(); ++idx) {
        CLI::App* cmd = app.add_subcommand(names[idx], descriptions[idx]);
        SubState& st = states[idx];
        add_common(cmd, st.common);
        if (names[idx] == "simulate") {
            cmd->add_option("--mode", st.mode, "forward | backward | gw");
            cmd->add_option("--reps", st.reps, "number of replicates")
                ->each([&st](const std::string&) { st.has_reps = true; });
            cmd->add_option("--horizon", st.horizon, "generations per replicate")
                ->each([&st](const std::string&) { st.has_horizon = true; });
        }
        if (names[idx] == "limit-check" || names[idx] == "gw-limit")
            cmd->add_option("--N", st.n_grid, "comma-separated population sizes");
        if (names[idx] == "limit-check")
            cmd->add_option("--t", st.t_grid, "comma-separated time points");
        cmds.push_back(cmd);
    }

    CLI11_PARSE(app, argc, argv);

    for (size_t idx = 0; idx < names.size(); ++idx) {
        if (!cmds[idx]->parsed()) continue;
        SubState& st = states[idx];
        cn_run_options opts{};
        if (!st.mode.empty()) opts.mode = st.mode.c_str();
        if (!st.n_grid.empty()) opts.n_grid = st.n_grid.c_str();
        if (!st.t_grid.empty()) opts.t_grid = st.t_grid.c_str();
        opts.replicates = st.reps;
        opts.has_replicates = st.has_reps ? 1 : 0;
        opts.horizon = st.horizon;
        opts.has_horizon = st.has_horizon ? 1 : 0;
        return dispatch(names[idx], st.common, opts);
    }
    return 1;
}
