#include "cannings/ancestry_fixed.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "cannings/combinatorics.hpp"
#include "cannings/errors.hpp"

namespace cannings {

void FixedModelConfig::validate() const {
    const int K = num_types();
    if (static_cast<int>(laws.size()) != K)
        throw ValidationError("fixed model: need one offspring law per type");
    for (int k = 0; k < K; ++k)
        if (laws[static_cast<size_t>(k)].population_size() != table.subpop_size(k))
            throw ValidationError("fixed model: offspring law size of type " + std::to_string(k) +
                                  " disagrees with the mutation table");
    if (initial_types.empty()) throw ValidationError("fixed model: empty sample");
    std::vector<long long> per_type(static_cast<size_t>(K), 0);
    for (int t : initial_types) {
        if (t < 0 || t >= K) throw ValidationError("fixed model: sample type out of range");
        per_type[static_cast<size_t>(t)] += 1;
    }
    for (int k = 0; k < K; ++k)
        if (per_type[static_cast<size_t>(k)] > table.subpop_size(k))
            throw ValidationError("fixed model: more sampled individuals of type " + std::to_string(k) +
                                  " than the subpopulation holds");
}

void FixedModelConfig::validate_for_matrix() const {
    validate();
    long long min_size = table.subpop_size(0);
    for (int k = 1; k < num_types(); ++k) min_size = std::min(min_size, table.subpop_size(k));
    if (sample_size() > min_size)
        throw ValidationError("fixed model: exact matrices need sample size <= every subpopulation size");
}

namespace {

// group sizes per type when `to` coarsens `from` within types; nullopt if not
std::optional<std::vector<std::vector<int>>> merge_groups(int num_types, const TypedPartition& from,
                                                          const TypedPartition& to) {
    std::vector<int> to_block_of(static_cast<size_t>(from.n), -1);
    for (size_t b = 0; b < to.blocks.size(); ++b)
        for (int e : to.blocks[b]) to_block_of[static_cast<size_t>(e)] = static_cast<int>(b);

    std::vector<int> children(to.blocks.size(), 0);
    for (size_t fb = 0; fb < from.blocks.size(); ++fb) {
        int tb = to_block_of[static_cast<size_t>(from.blocks[fb].front())];
        // every element of the from-block must land in the same to-block
        for (int e : from.blocks[fb])
            if (to_block_of[static_cast<size_t>(e)] != tb) return std::nullopt;
        if (to.types[static_cast<size_t>(tb)] != from.types[fb]) return std::nullopt;
        children[static_cast<size_t>(tb)] += 1;
    }
    std::vector<std::vector<int>> groups(static_cast<size_t>(num_types));
    for (size_t tb = 0; tb < to.blocks.size(); ++tb)
        groups[static_cast<size_t>(to.types[tb])].push_back(children[tb]);
    return groups;
}

}  // namespace

double p_rep_entry(const FixedModelConfig& cfg, const TypedPartition& from, const TypedPartition& to) {
    auto groups = merge_groups(cfg.num_types(), from, to);
    if (!groups) return 0.0;
    double p = 1.0;
    for (int k = 0; k < cfg.num_types(); ++k) {
        const auto& g = (*groups)[static_cast<size_t>(k)];
        if (g.empty()) continue;
        p *= cfg.laws[static_cast<size_t>(k)].phi(g);
        if (p == 0.0) return 0.0;
    }
    return p;
}

double p_mut_entry(const FixedModelConfig& cfg, const TypedPartition& from, const TypedPartition& to) {
    if (from.blocks != to.blocks) return 0.0;
    const int K = cfg.num_types();
    // n_{kl} = blocks typed k in `from` and l in `to`
    std::vector<long long> flows(static_cast<size_t>(K) * static_cast<size_t>(K), 0);
    for (size_t b = 0; b < from.blocks.size(); ++b)
        flows[static_cast<size_t>(from.types[b] * K + to.types[b])] += 1;

    double p = 1.0;
    for (int k = 0; k < K; ++k) {
        long long n_k = 0;
        for (int l = 0; l < K; ++l) n_k += flows[static_cast<size_t>(k * K + l)];
        if (n_k == 0) continue;
        double num = 1.0;
        for (int l = 0; l < K; ++l) {
            long long want = flows[static_cast<size_t>(k * K + l)];
            if (want == 0) continue;
            num *= falling(static_cast<double>(cfg.table.count(l, k)), want);
            if (num == 0.0) return 0.0;
        }
        p *= num / falling(static_cast<double>(cfg.table.subpop_size(k)), n_k);
    }
    return p;
}

LabeledMatrix p_rep_matrix(const FixedModelConfig& cfg, const PartitionSpace& space) {
    LabeledMatrix m(space.labels(cfg.type_names));
    for (size_t r = 0; r < space.states.size(); ++r)
        for (size_t c = 0; c < space.states.size(); ++c)
            m.at(r, c) = p_rep_entry(cfg, space.states[r], space.states[c]);
    return m;
}

LabeledMatrix p_mut_matrix(const FixedModelConfig& cfg, const PartitionSpace& space) {
    LabeledMatrix m(space.labels(cfg.type_names));
    for (size_t r = 0; r < space.states.size(); ++r)
        for (size_t c = 0; c < space.states.size(); ++c)
            m.at(r, c) = p_mut_entry(cfg, space.states[r], space.states[c]);
    return m;
}

LabeledMatrix transition_matrix(const FixedModelConfig& cfg, int64_t cap) {
    cfg.validate_for_matrix();
    PartitionSpace space = PartitionSpace::enumerate(cfg.sample_size(), cfg.num_types(), cap);
    LabeledMatrix rep = p_rep_matrix(cfg, space);
    LabeledMatrix mut = p_mut_matrix(cfg, space);
    return mut.multiply(rep);
}

TypedPartition ancestry_step(const FixedModelConfig& cfg, const TypedPartition& state, RngStream& rng) {
    const int K = cfg.num_types();

    // mutation sub-step: blocks of type k sample their birth types without
    // replacement from the post-mutation composition of subpopulation k
    std::vector<int> birth_types(state.blocks.size(), -1);
    for (int k = 0; k < K; ++k) {
        std::vector<size_t> members;
        for (size_t b = 0; b < state.blocks.size(); ++b)
            if (state.types[b] == k) members.push_back(b);
        if (members.empty()) continue;
        std::vector<long long> avail(static_cast<size_t>(K));
        for (int l = 0; l < K; ++l) avail[static_cast<size_t>(l)] = cfg.table.count(l, k);
        long long pool = cfg.table.subpop_size(k);
        for (size_t b : members) {
            int64_t r = rng.uniform_int(pool);
            for (int l = 0; l < K; ++l) {
                if (r < avail[static_cast<size_t>(l)]) {
                    birth_types[b] = l;
                    avail[static_cast<size_t>(l)] -= 1;
                    break;
                }
                r -= avail[static_cast<size_t>(l)];
            }
            pool -= 1;
        }
    }

    // reproduction sub-step: within each birth subpopulation, place the
    // lineages on distinct child slots and merge those sharing a parent
    TypedPartition next;
    next.n = state.n;
    for (int l = 0; l < K; ++l) {
        std::vector<size_t> members;
        for (size_t b = 0; b < state.blocks.size(); ++b)
            if (birth_types[b] == l) members.push_back(b);
        if (members.empty()) continue;

        const auto& law = cfg.laws[static_cast<size_t>(l)];
        std::vector<int> nu = law.sample(rng);
        const long long n_l = law.population_size();

        // cumulative child-slot intervals per parent
        std::vector<long long> cum(nu.size() + 1, 0);
        for (size_t i = 0; i < nu.size(); ++i) cum[i + 1] = cum[i] + nu[i];

        // distinct uniform slots for the sampled lineages
        std::vector<long long> slots;
        long long remaining = n_l;
        for (size_t idx = 0; idx < members.size(); ++idx) {
            long long pick = rng.uniform_int(remaining);
            std::sort(slots.begin(), slots.end());
            for (long long used : slots)
                if (pick >= used) pick += 1;
            slots.push_back(pick);
            remaining -= 1;
        }

        std::map<int, std::vector<size_t>> by_parent;
        for (size_t idx = 0; idx < members.size(); ++idx) {
            long long slot = slots[idx];
            int parent = static_cast<int>(std::upper_bound(cum.begin(), cum.end(), slot) - cum.begin()) - 1;
            by_parent[parent].push_back(members[idx]);
        }
        for (auto& [parent, group] : by_parent) {
            std::vector<int> merged;
            for (size_t b : group)
                merged.insert(merged.end(), state.blocks[b].begin(), state.blocks[b].end());
            next.blocks.push_back(std::move(merged));
            next.types.push_back(l);
        }
    }
    next.canonicalize();
    return next;
}

std::vector<TypedPartition> simulate_ancestry(const FixedModelConfig& cfg, int64_t horizon, RngStream& rng) {
    cfg.validate();
    std::vector<TypedPartition> path;
    path.push_back(TypedPartition::singletons(cfg.initial_types));
    for (int64_t r = 0; r < horizon; ++r) path.push_back(ancestry_step(cfg, path.back(), rng));
    return path;
}

}  // namespace cannings
