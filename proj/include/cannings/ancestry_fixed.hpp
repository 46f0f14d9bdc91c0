#ifndef CANNINGS_ANCESTRY_FIXED_HPP
#define CANNINGS_ANCESTRY_FIXED_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "cannings/matrix.hpp"
#include "cannings/mutation.hpp"
#include "cannings/offspring.hpp"
#include "cannings/rng.hpp"
#include "cannings/typed_partition.hpp"

namespace cannings {

// Fixed-subpopulation multi-type model: one Cannings law per type plus an
// integer mutation-flow table; the ancestral process runs backward in time
// over typed partitions of the sample.
struct FixedModelConfig {
    std::vector<OffspringLaw> laws;  // one per type, sizes match the table
    MutationCountTable table;
    std::vector<int> initial_types;  // one per sampled individual
    std::vector<std::string> type_names;

    int num_types() const { return table.num_types(); }
    int sample_size() const { return static_cast<int>(initial_types.size()); }

    void validate() const;           // sample feasibility and size agreement
    void validate_for_matrix() const;  // additionally n <= min_k N_k
};

// one backward step factorizes as mutation then reproduction
double p_rep_entry(const FixedModelConfig& cfg, const TypedPartition& from, const TypedPartition& to);
double p_mut_entry(const FixedModelConfig& cfg, const TypedPartition& from, const TypedPartition& to);

LabeledMatrix p_rep_matrix(const FixedModelConfig& cfg, const PartitionSpace& space);
LabeledMatrix p_mut_matrix(const FixedModelConfig& cfg, const PartitionSpace& space);

// P = P_mut * P_rep over the enumerated typed-partition space
LabeledMatrix transition_matrix(const FixedModelConfig& cfg, int64_t cap = 1000000);

// one backward generation applied to a typed partition (mutation sub-step,
// then reproduction sub-step with exchangeable parent assignment)
TypedPartition ancestry_step(const FixedModelConfig& cfg, const TypedPartition& state, RngStream& rng);

// path of length horizon+1 starting from the singleton state
std::vector<TypedPartition> simulate_ancestry(const FixedModelConfig& cfg, int64_t horizon, RngStream& rng);

}  // namespace cannings

#endif
