#include "cannings/runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "cannings/backward_variable.hpp"
#include "cannings/csv.hpp"
#include "cannings/errors.hpp"

namespace cannings {

namespace {

uint64_t fnv1a64(const std::string& text) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void write_manifest(const std::string& out_path, const std::string& config_text,
                    const std::string& subcommand, uint64_t seed) {
    nlohmann::json m;
    m["config_hash"] = hex64(fnv1a64(config_text));
    m["seed"] = seed;
    m["tool_version"] = kVersion;
    m["command"] = subcommand;
    auto now = std::chrono::system_clock::now();
    m["created_unix"] = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    m["outputs"] = nlohmann::json::array({out_path});
    std::ofstream out(out_path + ".manifest.json");
    if (!out) throw ValidationError("cannot write manifest next to '" + out_path + "'");
    out << m.dump(2) << "\n";
}

void write_matrix_csv(const std::string& path, const LabeledMatrix& m, bool with_row_sums) {
    CsvWriter csv(path);
    std::vector<std::string> header;
    header.push_back("state");
    for (const auto& l : m.labels) header.push_back(CsvWriter::field(l));
    if (with_row_sums) header.push_back("row_sum");
    csv.row(header);
    for (size_t r = 0; r < m.size(); ++r) {
        std::vector<std::string> cells;
        cells.push_back(CsvWriter::field(m.labels[r]));
        for (size_t c = 0; c < m.size(); ++c) cells.push_back(CsvWriter::field(m.at(r, c)));
        if (with_row_sums) cells.push_back(CsvWriter::field(m.row_sum(r)));
        csv.row(cells);
    }
}

struct RunContext {
    ScenarioConfig cfg;
    std::string config_text;
    std::string out_path;
    uint64_t seed;
};

void run_exact_forward(const RunContext& ctx) {
    LabeledMatrix pi = forward_transition_matrix(ctx.cfg.variable_model(), ctx.cfg.run.cap);
    write_matrix_csv(ctx.out_path, pi, false);
}

void run_exact_backward(const RunContext& ctx) {
    LabeledMatrix p = transition_matrix(ctx.cfg.fixed_model(), ctx.cfg.run.cap);
    write_matrix_csv(ctx.out_path, p, false);
}

void run_exact_backward_variable(const RunContext& ctx) {
    LabeledMatrix p = backward_matrix(ctx.cfg.variable_model(), ctx.cfg.run.cap);
    write_matrix_csv(ctx.out_path, p, true);
}

void run_block_gen(const RunContext& ctx) {
    LabeledMatrix g = block_counting_generator(ctx.cfg.coalescent_spec(), ctx.cfg.run.block_cap);
    write_matrix_csv(ctx.out_path, g, false);
}

void run_rates(const RunContext& ctx) {
    CoalescentSpec spec = ctx.cfg.coalescent_spec();
    CsvWriter csv(ctx.out_path);
    csv.row({"type", "counts", "rate"});
    for (int k = 0; k < spec.num_types(); ++k) {
        // count vectors with entries >= 2, non-increasing, sum bounded
        std::vector<int> cur;
        std::function<void(int, int)> rec = [&](int left, int maxpart) {
            if (!cur.empty()) {
                std::string joined;
                for (size_t t = 0; t < cur.size(); ++t) {
                    if (t > 0) joined += "|";
                    joined += std::to_string(cur[t]);
                }
                csv.row({CsvWriter::field(spec.type_names[static_cast<size_t>(k)]),
                         CsvWriter::field(joined),
                         CsvWriter::field(xi_rate(spec.xi[static_cast<size_t>(k)], cur))});
            }
            for (int p = std::min(left, maxpart); p >= 2; --p) {
                cur.push_back(p);
                rec(left - p, p);
                cur.pop_back();
            }
        };
        rec(ctx.cfg.run.rates_max_total, ctx.cfg.run.rates_max_total);
    }
}

void run_limit_check(const RunContext& ctx, const RunOverrides& ov) {
    std::vector<int> n_grid = ov.n_grid.value_or(ctx.cfg.run.n_grid);
    std::vector<double> t_grid = ov.t_grid.value_or(ctx.cfg.run.t_grid);
    if (n_grid.empty()) throw ValidationError("limit check: run.N_grid (or --N) is required");
    if (t_grid.empty()) throw ValidationError("limit check: run.t_grid (or --t) is required");

    const ScenarioConfig& cfg = ctx.cfg;
    FixedModelFamily family;
    family.config_at = [&cfg](int scale) { return cfg.fixed_model_at(scale); };
    if (cfg.c_rule_auto) {
        family.calibration = [&cfg](int, const FixedModelConfig& fm) { return cfg.calibration_of(fm); };
    } else {
        if (cfg.c_values.size() != n_grid.size())
            throw ValidationError("limit check: limit.c_values must match the N grid");
        std::vector<int> grid = n_grid;
        std::vector<double> values = cfg.c_values;
        family.calibration = [grid, values](int scale, const FixedModelConfig&) {
            for (size_t t = 0; t < grid.size(); ++t)
                if (grid[t] == scale) return values[t];
            throw ValidationError("limit check: no calibration value for N=" + std::to_string(scale));
        };
    }

    auto rows = convergence_diagnostic(family, cfg.coalescent_spec(), n_grid, t_grid, cfg.run.cap);
    CsvWriter csv(ctx.out_path);
    csv.row({"N", "t", "c_N", "sup_norm_error"});
    for (const auto& r : rows)
        csv.row({CsvWriter::field(r.scale), CsvWriter::field(r.t), CsvWriter::field(r.c_n),
                 CsvWriter::field(r.sup_norm_error)});
}

void run_gw_limit(const RunContext& ctx, const RunOverrides& ov) {
    std::vector<int> n_grid = ov.n_grid.value_or(ctx.cfg.run.n_grid);
    if (n_grid.empty()) throw ValidationError("gw limit: run.N_grid (or --N) is required");
    const ScenarioConfig& cfg = ctx.cfg;
    BranchingLaw law = cfg.branching_law();
    if (cfg.gw_start.empty()) throw ValidationError("gw limit: initial.gw is required");

    auto family = [&cfg](int scale) { return cfg.variable_model_at(scale); };
    auto rows = gw_convergence_table(law, family, n_grid, cfg.gw_start);
    CsvWriter csv(ctx.out_path);
    csv.row({"N", "i", "j", "p_finite", "p_limit", "abs_err"});
    for (const auto& r : rows) {
        csv.row({CsvWriter::field(r.scale), CsvWriter::field(count_state_label(r.start)),
                 CsvWriter::field(count_state_label(r.target)), CsvWriter::field(r.p_finite),
                 CsvWriter::field(r.p_limit), CsvWriter::field(std::fabs(r.p_finite - r.p_limit))});
    }
}

void run_simulate(const RunContext& ctx, const RunOverrides& ov) {
    const ScenarioConfig& cfg = ctx.cfg;
    std::string mode = ov.mode.value_or(cfg.model == ModelKind::FixedSubpop ? "backward" : "forward");
    int64_t reps = ov.replicates.value_or(cfg.run.replicates);
    int64_t horizon = ov.horizon.value_or(cfg.run.horizon);

    CsvWriter csv(ctx.out_path);
    if (mode == "forward") {
        VariableModelConfig vm = cfg.variable_model();
        std::vector<int> initial = cfg.initial_counts;
        if (initial.empty())
            throw ValidationError("simulate forward: initial.counts is required");
        std::vector<std::string> header{"replicate", "generation"};
        for (const auto& name : cfg.type_names) header.push_back(CsvWriter::field("i_" + name));
        csv.row(header);
        for (int64_t rep = 0; rep < reps; ++rep) {
            RngStream rng = RngStream::derive(ctx.seed, "simulate-forward", static_cast<uint64_t>(rep));
            auto path = simulate_forward(vm, initial, horizon, rng);
            for (size_t g = 0; g < path.size(); ++g) {
                std::vector<std::string> cells{CsvWriter::field(static_cast<int64_t>(rep)),
                                               CsvWriter::field(static_cast<int64_t>(g))};
                for (int v : path[g]) cells.push_back(CsvWriter::field(v));
                csv.row(cells);
            }
        }
    } else if (mode == "backward") {
        FixedModelConfig fm = cfg.fixed_model();
        csv.row({"replicate", "generation", "state"});
        for (int64_t rep = 0; rep < reps; ++rep) {
            RngStream rng = RngStream::derive(ctx.seed, "simulate-backward", static_cast<uint64_t>(rep));
            auto path = simulate_ancestry(fm, horizon, rng);
            for (size_t g = 0; g < path.size(); ++g)
                csv.row({CsvWriter::field(static_cast<int64_t>(rep)),
                         CsvWriter::field(static_cast<int64_t>(g)),
                         CsvWriter::field(path[g].label(cfg.type_names))});
        }
    } else if (mode == "gw") {
        BranchingLaw law = cfg.branching_law();
        if (cfg.gw_start.empty()) throw ValidationError("simulate gw: initial.gw is required");
        std::vector<std::string> header{"replicate", "generation"};
        for (int l = 0; l < law.reduced_types(); ++l)
            header.push_back(CsvWriter::field("z_" + cfg.type_names[static_cast<size_t>(l)]));
        csv.row(header);
        for (int64_t rep = 0; rep < reps; ++rep) {
            RngStream rng = RngStream::derive(ctx.seed, "simulate-gw", static_cast<uint64_t>(rep));
            auto path = simulate_branching(law, cfg.gw_start, horizon, cfg.run.population_cap, rng);
            for (size_t g = 0; g < path.size(); ++g) {
                std::vector<std::string> cells{CsvWriter::field(static_cast<int64_t>(rep)),
                                               CsvWriter::field(static_cast<int64_t>(g))};
                for (int v : path[g]) cells.push_back(CsvWriter::field(v));
                csv.row(cells);
            }
        }
    } else {
        throw ValidationError("simulate: unknown mode '" + mode + "' (forward | backward | gw)");
    }
}

}  // namespace

std::vector<std::string> known_subcommands() {
    return {"exact-forward", "exact-backward", "exact-backward-variable", "simulate",
            "limit-check",   "gw-limit",       "rates",                   "block-gen"};
}

int run_command(const std::string& subcommand, const std::string& config_path,
                const std::string& out_path, const RunOverrides& overrides, std::string* error_out) {
    try {
        std::ifstream in(config_path);
        if (!in) throw ValidationError("cannot open config file '" + config_path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        std::string config_text = ss.str();

        ScenarioConfig cfg = parse_config(config_text);
        if (overrides.seed) cfg.run.seed = *overrides.seed;
        if (overrides.cap) cfg.run.cap = *overrides.cap;
        if (overrides.replicates) cfg.run.replicates = *overrides.replicates;
        if (overrides.horizon) cfg.run.horizon = *overrides.horizon;
        if (out_path.empty()) throw ValidationError("an output path (--out) is required");

        RunContext ctx{std::move(cfg), std::move(config_text), out_path, 0};
        ctx.seed = ctx.cfg.run.seed;

        if (subcommand == "exact-forward") run_exact_forward(ctx);
        else if (subcommand == "exact-backward") run_exact_backward(ctx);
        else if (subcommand == "exact-backward-variable") run_exact_backward_variable(ctx);
        else if (subcommand == "simulate") run_simulate(ctx, overrides);
        else if (subcommand == "limit-check") run_limit_check(ctx, overrides);
        else if (subcommand == "gw-limit") run_gw_limit(ctx, overrides);
        else if (subcommand == "rates") run_rates(ctx);
        else if (subcommand == "block-gen") run_block_gen(ctx);
        else throw ValidationError("unknown subcommand '" + subcommand + "'");

        write_manifest(out_path, ctx.config_text, subcommand, ctx.seed);
        return 0;
    } catch (const CapError& e) {
        if (error_out) *error_out = e.what();
        return 2;
    } catch (const std::exception& e) {
        if (error_out) *error_out = e.what();
        return 1;
    }
}

}  // namespace cannings
