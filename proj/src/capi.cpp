#include "cannings/cannings.h"

#include <cstring>
#include <sstream>
#include <string>

#include "cannings/backward_variable.hpp"
#include "cannings/errors.hpp"
#include "cannings/runner.hpp"
#include "cannings/scenario.hpp"

using namespace cannings;

struct cn_scenario {
    ScenarioConfig cfg;
};

struct cn_matrix {
    LabeledMatrix m;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename Fn>
cn_matrix* guarded_matrix(Fn&& fn) {
    try {
        return new cn_matrix{fn()};
    } catch (const std::exception& e) {
        set_error(e.what());
        return nullptr;
    }
}

template <typename Fn>
int guarded_status(Fn&& fn) {
    try {
        fn();
        return CN_OK;
    } catch (const CapError& e) {
        set_error(e.what());
        return CN_ERR_CAP;
    } catch (const std::exception& e) {
        set_error(e.what());
        return CN_ERR_VALIDATION;
    }
}

OffspringLaw law_from(const char* kind, int population, int c) {
    std::string k = kind ? kind : "";
    if (k == "wright_fisher" || k == "wright-fisher") return OffspringLaw::wright_fisher(population);
    if (k == "kimura") return OffspringLaw::kimura(population, c);
    if (k == "dirac") return OffspringLaw::dirac(population);
    if (k == "extreme_permutation") return OffspringLaw::extreme_permutation(population);
    throw ValidationError("unknown offspring kind '" + k + "'");
}

std::vector<int> parse_int_list(const char* text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stoi(item));
    }
    return out;
}

std::vector<double> parse_double_list(const char* text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

}  // namespace

extern "C" {

const char* cn_version(void) { return kVersion; }

const char* cn_last_error(void) { return g_last_error.c_str(); }

cn_scenario* cn_scenario_load_file(const char* path) {
    try {
        return new cn_scenario{load_config_file(path ? path : "")};
    } catch (const std::exception& e) {
        set_error(e.what());
        return nullptr;
    }
}

cn_scenario* cn_scenario_load_string(const char* text) {
    try {
        return new cn_scenario{parse_config(text ? text : "")};
    } catch (const std::exception& e) {
        set_error(e.what());
        return nullptr;
    }
}

void cn_scenario_free(cn_scenario* scenario) { delete scenario; }

cn_matrix* cn_forward_matrix(const cn_scenario* s) {
    if (!s) {
        set_error("null scenario");
        return nullptr;
    }
    return guarded_matrix(
        [&] { return forward_transition_matrix(s->cfg.variable_model(), s->cfg.run.cap); });
}

cn_matrix* cn_backward_matrix_fixed(const cn_scenario* s) {
    if (!s) {
        set_error("null scenario");
        return nullptr;
    }
    return guarded_matrix([&] { return transition_matrix(s->cfg.fixed_model(), s->cfg.run.cap); });
}

cn_matrix* cn_backward_matrix_variable(const cn_scenario* s) {
    if (!s) {
        set_error("null scenario");
        return nullptr;
    }
    return guarded_matrix([&] { return backward_matrix(s->cfg.variable_model(), s->cfg.run.cap); });
}

cn_matrix* cn_limit_generator(const cn_scenario* s) {
    if (!s) {
        set_error("null scenario");
        return nullptr;
    }
    return guarded_matrix([&] {
        int n = s->cfg.sample_types.empty() ? 1 : static_cast<int>(s->cfg.sample_types.size());
        return q_full(s->cfg.coalescent_spec(), n, s->cfg.run.cap);
    });
}

cn_matrix* cn_block_counting_generator(const cn_scenario* s, int total_cap) {
    if (!s) {
        set_error("null scenario");
        return nullptr;
    }
    return guarded_matrix([&] { return block_counting_generator(s->cfg.coalescent_spec(), total_cap); });
}

cn_matrix* cn_matrix_exponential(const cn_matrix* generator, double t) {
    if (!generator) {
        set_error("null matrix");
        return nullptr;
    }
    return guarded_matrix([&] { return matrix_exponential(generator->m, t); });
}

size_t cn_matrix_size(const cn_matrix* matrix) { return matrix ? matrix->m.size() : 0; }

double cn_matrix_get(const cn_matrix* matrix, size_t row, size_t col) {
    if (!matrix || row >= matrix->m.size() || col >= matrix->m.size()) return 0.0;
    return matrix->m.at(row, col);
}

const char* cn_matrix_label(const cn_matrix* matrix, size_t idx) {
    if (!matrix || idx >= matrix->m.size()) return nullptr;
    return matrix->m.labels[idx].c_str();
}

void cn_matrix_free(cn_matrix* matrix) { delete matrix; }

int cn_phi(const char* kind, int population, int c, const int* counts, size_t num_counts, double* out) {
    return guarded_status([&] {
        if (!counts || !out) throw ValidationError("null argument");
        OffspringLaw law = law_from(kind, population, c);
        *out = law.phi(std::span<const int>(counts, num_counts));
    });
}

int cn_coalescence_probability(const char* kind, int population, int c, double* out) {
    return guarded_status([&] {
        if (!out) throw ValidationError("null argument");
        *out = law_from(kind, population, c).coalescence_probability();
    });
}

int cn_xi_rate(const cn_scenario* s, int type_index, const int* counts, size_t num_counts, double* out) {
    return guarded_status([&] {
        if (!s || !counts || !out) throw ValidationError("null argument");
        CoalescentSpec spec = s->cfg.coalescent_spec();
        if (type_index < 0 || type_index >= spec.num_types())
            throw ValidationError("type index out of range");
        *out = xi_rate_extended(spec.xi[static_cast<size_t>(type_index)],
                                std::span<const int>(counts, num_counts));
    });
}

int cn_run(const char* subcommand, const char* config_path, const char* out_path,
           const cn_run_options* options) {
    RunOverrides ov;
    if (options) {
        if (options->has_seed) ov.seed = static_cast<uint64_t>(options->seed);
        if (options->has_replicates) ov.replicates = options->replicates;
        if (options->has_horizon) ov.horizon = options->horizon;
        if (options->has_cap) ov.cap = options->cap;
        if (options->mode) ov.mode = options->mode;
        try {
            if (options->n_grid) ov.n_grid = parse_int_list(options->n_grid);
            if (options->t_grid) ov.t_grid = parse_double_list(options->t_grid);
        } catch (const std::exception&) {
            set_error("malformed grid override (expected comma-separated numbers)");
            return CN_ERR_VALIDATION;
        }
    }
    std::string err;
    int code = run_command(subcommand ? subcommand : "", config_path ? config_path : "",
                           out_path ? out_path : "", ov, &err);
    if (code != 0) set_error(err);
    return code;
}

}  // extern "C"
