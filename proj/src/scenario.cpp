#include "cannings/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cannings/errors.hpp"
#include "cannings/toml.hpp"

namespace cannings {

OffspringLaw LawSpec::build() const { return build_at(population); }

OffspringLaw LawSpec::build_at(int population_override) const {
    switch (kind) {
        case OffspringKind::WrightFisher: return OffspringLaw::wright_fisher(population_override);
        case OffspringKind::Kimura: return OffspringLaw::kimura(population_override, c);
        case OffspringKind::Dirac: return OffspringLaw::dirac(population_override);
        case OffspringKind::ExtremePermutation:
            return OffspringLaw::extreme_permutation(population_override);
        case OffspringKind::Table:
            if (population_override != population)
                throw ValidationError("offspring: a table law cannot be rescaled to another size");
            return OffspringLaw::table(population, table_rows);
    }
    throw ValidationError("offspring: unknown kind");
}

namespace {

class Collector {
  public:
    void add(const std::string& path, const std::string& msg) { errors_.push_back(path + ": " + msg); }

    void raise_if_any() const {
        if (errors_.empty()) return;
        std::string joined = "invalid scenario:";
        for (const auto& e : errors_) joined += "\n  - " + e;
        throw ValidationError(joined);
    }

    bool empty() const { return errors_.empty(); }

  private:
    std::vector<std::string> errors_;
};

std::optional<OffspringKind> kind_from_string(const std::string& s) {
    if (s == "wright_fisher" || s == "wright-fisher") return OffspringKind::WrightFisher;
    if (s == "kimura") return OffspringKind::Kimura;
    if (s == "dirac") return OffspringKind::Dirac;
    if (s == "extreme_permutation") return OffspringKind::ExtremePermutation;
    if (s == "table") return OffspringKind::Table;
    return std::nullopt;
}

std::optional<long long> get_int(const TomlValue& tv) {
    if (tv.type == TomlValue::Type::Int) return tv.i;
    return std::nullopt;
}

std::vector<double> read_double_list(const TomlValue& tv, const std::string& path, Collector& errs) {
    std::vector<double> out;
    if (!tv.is_array()) {
        errs.add(path, "expected an array of numbers");
        return out;
    }
    for (const auto& e : tv.array) {
        if (!e.is_number()) {
            errs.add(path, "expected numbers");
            return {};
        }
        out.push_back(e.as_double());
    }
    return out;
}

std::vector<int> read_int_list(const TomlValue& tv, const std::string& path, Collector& errs) {
    std::vector<int> out;
    if (!tv.is_array()) {
        errs.add(path, "expected an array of integers");
        return out;
    }
    for (const auto& e : tv.array) {
        auto v = get_int(e);
        if (!v) {
            errs.add(path, "expected integers");
            return {};
        }
        out.push_back(static_cast<int>(*v));
    }
    return out;
}

// K x K matrix given as an array of K rows
template <typename T>
std::vector<T> read_matrix(const TomlValue& tv, int k, const std::string& path, Collector& errs) {
    std::vector<T> flat;
    if (!tv.is_array() || static_cast<int>(tv.array.size()) != k) {
        errs.add(path, "expected " + std::to_string(k) + " rows");
        return flat;
    }
    for (const auto& row : tv.array) {
        if (!row.is_array() || static_cast<int>(row.array.size()) != k) {
            errs.add(path, "each row needs " + std::to_string(k) + " entries");
            return {};
        }
        for (const auto& e : row.array) {
            if (!e.is_number()) {
                errs.add(path, "entries must be numbers");
                return {};
            }
            if constexpr (std::is_same_v<T, long long>) {
                if (e.type != TomlValue::Type::Int) {
                    errs.add(path, "entries must be integers");
                    return {};
                }
                flat.push_back(e.i);
            } else {
                flat.push_back(static_cast<T>(e.as_double()));
            }
        }
    }
    return flat;
}

LawSpec read_law(const TomlValue& tv, const std::string& path, Collector& errs) {
    LawSpec spec;
    if (!tv.is_table()) {
        errs.add(path, "expected a table");
        return spec;
    }
    const TomlValue* kind = tv.find("kind");
    if (!kind || !kind->is_string()) {
        errs.add(path + ".kind", "required (wright_fisher | kimura | dirac | extreme_permutation | table)");
        return spec;
    }
    auto k = kind_from_string(kind->s);
    if (!k) {
        errs.add(path + ".kind", "unknown offspring kind '" + kind->s + "'");
        return spec;
    }
    spec.kind = *k;
    const TomlValue* n = tv.find("N");
    if (!n || n->type != TomlValue::Type::Int || n->i < 1) {
        errs.add(path + ".N", "required positive integer population size");
        return spec;
    }
    spec.population = static_cast<int>(n->i);
    if (spec.kind == OffspringKind::Kimura) {
        const TomlValue* c = tv.find("c");
        if (!c || c->type != TomlValue::Type::Int || c->i < 1) {
            errs.add(path + ".c", "kimura laws need a positive integer parameter c");
            return spec;
        }
        spec.c = static_cast<int>(c->i);
    }
    if (spec.kind == OffspringKind::Table) {
        const TomlValue* support = tv.find("support");
        const TomlValue* probs = tv.find("probs");
        if (!support || !support->is_array() || !probs || !probs->is_array() ||
            support->array.size() != probs->array.size() || support->array.empty()) {
            errs.add(path, "table laws need parallel arrays 'support' and 'probs'");
            return spec;
        }
        for (size_t r = 0; r < support->array.size(); ++r) {
            std::vector<int> comp = read_int_list(support->array[r], path + ".support", errs);
            if (!probs->array[r].is_number()) {
                errs.add(path + ".probs", "expected numbers");
                return spec;
            }
            spec.table_rows.emplace_back(comp, probs->array[r].as_double());
        }
    }
    return spec;
}

int type_index_from(const TomlValue& tv, const std::vector<std::string>& names, const std::string& path,
                    Collector& errs) {
    if (tv.is_string()) {
        for (size_t t = 0; t < names.size(); ++t)
            if (names[t] == tv.s) return static_cast<int>(t);
        errs.add(path, "unknown type name '" + tv.s + "'");
        return -1;
    }
    if (tv.type == TomlValue::Type::Int) {
        if (tv.i < 1 || tv.i > static_cast<long long>(names.size())) {
            errs.add(path, "type index " + std::to_string(tv.i) + " out of range 1.." +
                               std::to_string(names.size()));
            return -1;
        }
        return static_cast<int>(tv.i - 1);
    }
    errs.add(path, "expected a type name or a 1-based type index");
    return -1;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
    TomlValue root = parse_toml(text);
    Collector errs;
    ScenarioConfig cfg;

    // model + types
    const TomlValue* model = root.find("model");
    if (!model || !model->is_string()) {
        errs.add("model", "required: \"fixed_subpop\" or \"variable_subpop\"");
    } else if (model->s == "fixed_subpop") {
        cfg.model = ModelKind::FixedSubpop;
    } else if (model->s == "variable_subpop") {
        cfg.model = ModelKind::VariableSubpop;
    } else {
        errs.add("model", "unknown model '" + model->s + "'");
    }

    const TomlValue* types = root.find("types");
    if (!types || types->type != TomlValue::Type::Int || types->i < 1) {
        errs.add("types", "required positive integer");
        errs.raise_if_any();
    }
    cfg.num_types = static_cast<int>(types->i);

    cfg.type_names = default_type_names(cfg.num_types);
    if (const TomlValue* names = root.find("type_names")) {
        if (!names->is_array() || static_cast<int>(names->array.size()) != cfg.num_types) {
            errs.add("type_names", "need exactly " + std::to_string(cfg.num_types) + " names");
        } else {
            for (int t = 0; t < cfg.num_types; ++t) {
                if (!names->array[static_cast<size_t>(t)].is_string()) {
                    errs.add("type_names", "names must be strings");
                    break;
                }
                cfg.type_names[static_cast<size_t>(t)] = names->array[static_cast<size_t>(t)].s;
            }
        }
    }
    const int K = cfg.num_types;

    // reproduction
    if (cfg.model == ModelKind::FixedSubpop) {
        const TomlValue* subs = root.find("subpopulation");
        if (!subs || !subs->is_array() || static_cast<int>(subs->array.size()) != K) {
            errs.add("subpopulation", "fixed model needs one [[subpopulation]] block per type (" +
                                          std::to_string(K) + " expected)");
        } else {
            for (int t = 0; t < K; ++t)
                cfg.subpop_laws.push_back(
                    read_law(subs->array[static_cast<size_t>(t)],
                             "subpopulation[" + std::to_string(t + 1) + "]", errs));
        }
    } else {
        const TomlValue* off = root.find("offspring");
        if (!off) {
            errs.add("offspring", "variable model needs an [offspring] table");
        } else {
            cfg.offspring = read_law(*off, "offspring", errs);
        }
    }

    // mutation
    const TomlValue* mut = root.find("mutation");
    if (cfg.model == ModelKind::FixedSubpop) {
        if (mut && mut->find("counts")) {
            cfg.mutation_counts = read_matrix<long long>(*mut->find("counts"), K, "mutation.counts", errs);
        } else {
            cfg.mutation_counts.assign(static_cast<size_t>(K) * static_cast<size_t>(K), 0);
        }
    } else {
        if (mut && mut->find("matrix")) {
            cfg.mutation_matrix = read_matrix<double>(*mut->find("matrix"), K, "mutation.matrix", errs);
        } else {
            // identity
            cfg.mutation_matrix.assign(static_cast<size_t>(K) * static_cast<size_t>(K), 0.0);
            for (int t = 0; t < K; ++t) cfg.mutation_matrix[static_cast<size_t>(t * K + t)] = 1.0;
        }
    }

    // sample / initial states
    if (const TomlValue* sample = root.find("sample")) {
        if (const TomlValue* tl = sample->find("types")) {
            if (!tl->is_array()) {
                errs.add("sample.types", "expected an array of types");
            } else {
                for (size_t idx = 0; idx < tl->array.size(); ++idx) {
                    int t = type_index_from(tl->array[idx], cfg.type_names,
                                            "sample.types[" + std::to_string(idx + 1) + "]", errs);
                    if (t >= 0) cfg.sample_types.push_back(t);
                }
            }
        }
        if (const TomlValue* nv = sample->find("n")) {
            auto n = get_int(*nv);
            if (!n || *n < 1) {
                errs.add("sample.n", "expected a positive integer");
            } else if (!cfg.sample_types.empty() &&
                       *n != static_cast<long long>(cfg.sample_types.size())) {
                errs.add("sample.n", "disagrees with the length of sample.types");
            } else if (cfg.sample_types.empty()) {
                // default: all type 1
                cfg.sample_types.assign(static_cast<size_t>(*n), 0);
            }
        }
    }

    if (const TomlValue* initial = root.find("initial")) {
        if (const TomlValue* counts = initial->find("counts"))
            cfg.initial_counts = read_int_list(*counts, "initial.counts", errs);
        if (const TomlValue* gw = initial->find("gw"))
            cfg.gw_start = read_int_list(*gw, "initial.gw", errs);
    }

    // limit spec
    if (const TomlValue* limit = root.find("limit")) {
        CoalescentSpec spec;
        spec.type_names = cfg.type_names;
        if (const TomlValue* d = limit->find("d")) {
            spec.d = read_double_list(*d, "limit.d", errs);
        } else {
            spec.d.assign(static_cast<size_t>(K), 1.0);
        }
        if (static_cast<int>(spec.d.size()) != K) errs.add("limit.d", "need one entry per type");
        if (const TomlValue* rho = limit->find("rho")) {
            spec.rho = read_matrix<double>(*rho, K, "limit.rho", errs);
        } else {
            spec.rho.assign(static_cast<size_t>(K) * static_cast<size_t>(K), 0.0);
        }
        const TomlValue* xi = limit->find("xi");
        if (!xi || !xi->is_array() || static_cast<int>(xi->array.size()) != K) {
            errs.add("limit.xi", "need one [[limit.xi]] block per type");
        } else {
            for (int t = 0; t < K; ++t) {
                const TomlValue& xt = xi->array[static_cast<size_t>(t)];
                XiMeasure m;
                if (const TomlValue* km = xt.find("kingman")) {
                    if (!km->is_number()) {
                        errs.add("limit.xi[" + std::to_string(t + 1) + "].kingman", "expected a number");
                    } else {
                        m.kingman_mass = km->as_double();
                    }
                }
                if (const TomlValue* atoms = xt.find("atoms")) {
                    if (!atoms->is_array()) {
                        errs.add("limit.xi[" + std::to_string(t + 1) + "].atoms", "expected an array");
                    } else {
                        for (size_t a = 0; a < atoms->array.size(); ++a) {
                            const TomlValue& at = atoms->array[a];
                            XiMeasure::Atom atom;
                            const std::string apath = "limit.xi[" + std::to_string(t + 1) + "].atoms[" +
                                                      std::to_string(a + 1) + "]";
                            if (const TomlValue* x = at.find("x")) {
                                atom.x = read_double_list(*x, apath + ".x", errs);
                            } else {
                                errs.add(apath + ".x", "required simplex point");
                            }
                            if (const TomlValue* w = at.find("w")) {
                                if (w->is_number()) atom.weight = w->as_double();
                                else errs.add(apath + ".w", "expected a number");
                            } else {
                                errs.add(apath + ".w", "required weight");
                            }
                            m.atoms.push_back(std::move(atom));
                        }
                    }
                }
                spec.xi.push_back(std::move(m));
            }
        }
        if (const TomlValue* c = limit->find("c_values")) {
            cfg.c_values = read_double_list(*c, "limit.c_values", errs);
            cfg.c_rule_auto = false;
        }
        if (const TomlValue* rule = limit->find("c_rule")) {
            if (!rule->is_string() || rule->s != "auto")
                errs.add("limit.c_rule", "only \"auto\" is understood (or give limit.c_values)");
        }
        if (const TomlValue* sf = limit->find("size_factors"))
            cfg.size_factors = read_double_list(*sf, "limit.size_factors", errs);
        cfg.limit = std::move(spec);
    }
    if (cfg.size_factors.empty()) cfg.size_factors.assign(static_cast<size_t>(K), 1.0);
    if (static_cast<int>(cfg.size_factors.size()) != K)
        errs.add("limit.size_factors", "need one factor per type");

    // run parameters
    if (const TomlValue* runv = root.find("run")) {
        auto read_pos_int = [&](const char* key, auto& slot, long long lo) {
            if (const TomlValue* v = runv->find(key)) {
                auto iv = get_int(*v);
                if (!iv || *iv < lo) {
                    errs.add(std::string("run.") + key, "expected an integer >= " + std::to_string(lo));
                } else {
                    slot = static_cast<std::remove_reference_t<decltype(slot)>>(*iv);
                }
            }
        };
        read_pos_int("seed", cfg.run.seed, 0);
        read_pos_int("replicates", cfg.run.replicates, 1);
        read_pos_int("horizon", cfg.run.horizon, 0);
        read_pos_int("cap", cfg.run.cap, 1);
        read_pos_int("block_cap", cfg.run.block_cap, 1);
        read_pos_int("rates_max_total", cfg.run.rates_max_total, 2);
        read_pos_int("population_cap", cfg.run.population_cap, 1);
        if (const TomlValue* ng = runv->find("N_grid")) cfg.run.n_grid = read_int_list(*ng, "run.N_grid", errs);
        if (const TomlValue* tg = runv->find("t_grid"))
            cfg.run.t_grid = read_double_list(*tg, "run.t_grid", errs);
    }

    errs.raise_if_any();

    // construction-level validation with key paths
    if (cfg.model == ModelKind::FixedSubpop) {
        try {
            FixedModelConfig fm = cfg.fixed_model();
            fm.validate();
        } catch (const ValidationError& e) {
            errs.add("scenario", e.what());
        }
    } else {
        try {
            VariableModelConfig vm = cfg.variable_model();
            vm.validate();
            if (!cfg.initial_counts.empty()) {
                long long total = 0;
                for (int v : cfg.initial_counts) total += v;
                if (static_cast<int>(cfg.initial_counts.size()) != K)
                    errs.add("initial.counts", "need one entry per type");
                else if (total != vm.population_size())
                    errs.add("initial.counts", "must sum to the population size");
            }
        } catch (const ValidationError& e) {
            errs.add("scenario", e.what());
        }
    }
    if (cfg.limit) {
        try {
            cfg.limit->validate();
        } catch (const ValidationError& e) {
            errs.add("limit", e.what());
        }
        if (!cfg.c_rule_auto && !cfg.run.n_grid.empty() &&
            cfg.c_values.size() != cfg.run.n_grid.size())
            errs.add("limit.c_values", "need one value per run.N_grid entry");
    }
    errs.raise_if_any();
    return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

FixedModelConfig ScenarioConfig::fixed_model() const {
    if (model != ModelKind::FixedSubpop)
        throw ValidationError("this operation needs model = \"fixed_subpop\"");
    std::vector<long long> sizes;
    std::vector<OffspringLaw> laws;
    for (const auto& spec : subpop_laws) {
        sizes.push_back(spec.population);
        laws.push_back(spec.build());
    }
    FixedModelConfig cfg{std::move(laws), MutationCountTable(sizes, mutation_counts),
                         sample_types.empty() ? std::vector<int>{0} : sample_types, type_names};
    return cfg;
}

FixedModelConfig ScenarioConfig::fixed_model_at(int scale) const {
    if (model != ModelKind::FixedSubpop)
        throw ValidationError("this operation needs model = \"fixed_subpop\"");
    std::vector<long long> sizes;
    std::vector<OffspringLaw> laws;
    for (size_t t = 0; t < subpop_laws.size(); ++t) {
        int n = static_cast<int>(std::llround(size_factors[t] * scale));
        if (n < 1) throw ValidationError("limit check: scaled subpopulation size fell below 1");
        sizes.push_back(n);
        laws.push_back(subpop_laws[t].build_at(n));
    }
    FixedModelConfig cfg{std::move(laws), MutationCountTable(sizes, mutation_counts),
                         sample_types.empty() ? std::vector<int>{0} : sample_types, type_names};
    return cfg;
}

double ScenarioConfig::calibration_of(const FixedModelConfig& cfg) const {
    // pair-coalescence probability of the smallest subpopulation
    int arg = 0;
    for (int k = 1; k < cfg.num_types(); ++k)
        if (cfg.table.subpop_size(k) < cfg.table.subpop_size(arg)) arg = k;
    return cfg.laws[static_cast<size_t>(arg)].coalescence_probability();
}

VariableModelConfig ScenarioConfig::variable_model() const {
    if (model != ModelKind::VariableSubpop)
        throw ValidationError("this operation needs model = \"variable_subpop\"");
    if (!offspring) throw ValidationError("offspring: missing");
    return VariableModelConfig{offspring->build(), MutationMatrix(num_types, mutation_matrix), type_names};
}

VariableModelConfig ScenarioConfig::variable_model_at(int scale) const {
    if (model != ModelKind::VariableSubpop)
        throw ValidationError("this operation needs model = \"variable_subpop\"");
    if (!offspring) throw ValidationError("offspring: missing");
    return VariableModelConfig{offspring->build_at(scale), MutationMatrix(num_types, mutation_matrix),
                               type_names};
}

CoalescentSpec ScenarioConfig::coalescent_spec() const {
    if (!limit) throw ValidationError("limit: this operation needs a [limit] section");
    return *limit;
}

BranchingLaw ScenarioConfig::branching_law() const {
    VariableModelConfig vm = variable_model();
    if (vm.law.kind() == OffspringKind::Table)
        throw ValidationError("branching limit: table laws have no large-population family");
    BranchingLaw law{limit_law(vm.law.kind(), vm.law.kimura_c()), vm.u};
    law.validate();
    return law;
}

}  // namespace cannings
