#ifndef CANNINGS_SCENARIO_HPP
#define CANNINGS_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cannings/ancestry_fixed.hpp"
#include "cannings/branching_limit.hpp"
#include "cannings/coalescent_limit.hpp"
#include "cannings/forward_variable.hpp"

namespace cannings {

enum class ModelKind { FixedSubpop, VariableSubpop };

// offspring law description as written in a config file
struct LawSpec {
    OffspringKind kind = OffspringKind::WrightFisher;
    int population = 0;
    int c = 0;  // kimura
    std::vector<std::pair<std::vector<int>, double>> table_rows;

    OffspringLaw build() const;
    OffspringLaw build_at(int population_override) const;
};

struct RunParams {
    uint64_t seed = 1;
    int64_t replicates = 1000;
    int64_t horizon = 10;
    std::vector<int> n_grid;
    std::vector<double> t_grid;
    int64_t cap = 1000000;
    int block_cap = 4;
    int rates_max_total = 6;
    int64_t population_cap = 100000000;  // branching simulation guard
};

// Parsed and validated scenario. Building-block accessors construct the
// module-level model objects.
struct ScenarioConfig {
    ModelKind model = ModelKind::VariableSubpop;
    int num_types = 1;
    std::vector<std::string> type_names;

    std::vector<LawSpec> subpop_laws;          // fixed model, one per type
    std::optional<LawSpec> offspring;          // variable model
    std::vector<long long> mutation_counts;    // fixed model, K*K flat
    std::vector<double> mutation_matrix;       // variable model, K*K flat

    std::vector<int> sample_types;   // ancestral sample (type index per individual)
    std::vector<int> initial_counts; // forward start in Delta_N
    std::vector<int> gw_start;       // branching start over the first K-1 types

    std::optional<CoalescentSpec> limit;
    std::vector<double> c_values;    // explicit calibration per N-grid entry
    bool c_rule_auto = true;         // c_N from the smallest subpopulation's law
    std::vector<double> size_factors;

    RunParams run;

    FixedModelConfig fixed_model() const;
    FixedModelConfig fixed_model_at(int scale) const;  // sizes = round(scale*factor)
    double calibration_of(const FixedModelConfig& cfg) const;

    VariableModelConfig variable_model() const;
    VariableModelConfig variable_model_at(int scale) const;

    CoalescentSpec coalescent_spec() const;
    BranchingLaw branching_law() const;
};

// parses and validates; the error message lists every violation with its key path
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config_file(const std::string& path);

}  // namespace cannings

#endif
