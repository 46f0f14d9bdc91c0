#ifndef CANNINGS_FORWARD_VARIABLE_HPP
#define CANNINGS_FORWARD_VARIABLE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "cannings/count_states.hpp"
#include "cannings/matrix.hpp"
#include "cannings/mutation.hpp"
#include "cannings/offspring.hpp"
#include "cannings/rng.hpp"

namespace cannings {

// Variable-subpopulation model: one Cannings law for the whole population,
// children mutate independently by the row-stochastic matrix U.
struct VariableModelConfig {
    OffspringLaw law;
    MutationMatrix u;
    std::vector<std::string> type_names;

    int num_types() const { return u.num_types(); }
    int population_size() const { return law.population_size(); }
    void validate() const;
};

// distribution of the per-type offspring totals D(i), as (count vector, prob)
std::vector<std::pair<std::vector<int>, double>> offspring_block_sums(const VariableModelConfig& cfg,
                                                                      std::span<const int> i);

// reproduction-only transition: P(D(i) = j)
double pi_rep_entry(const VariableModelConfig& cfg, std::span<const int> i, std::span<const int> j);

// mutation-only transition: sum over flow tables with margins (i, j)
double pi_mut_entry(const VariableModelConfig& cfg, std::span<const int> i, std::span<const int> j);

LabeledMatrix pi_rep_matrix(const VariableModelConfig& cfg, const CountStateSpace& space);
LabeledMatrix pi_mut_matrix(const VariableModelConfig& cfg, const CountStateSpace& space);

// Pi = Pi_rep * Pi_mut over the compositions of N
LabeledMatrix forward_transition_matrix(const VariableModelConfig& cfg, int64_t cap = 1000000);

// the same entry by the direct single sum over flow tables with column sums j
// (independent evaluation route)
double forward_direct_entry(const VariableModelConfig& cfg, std::span<const int> i, std::span<const int> j);

// one row of the transition matrix, indexed by the delta space
std::vector<double> forward_row(const VariableModelConfig& cfg, const CountStateSpace& space,
                                std::span<const int> i);

// transition probability of the typed-individual chain (type vectors of
// length N); equals pi_{f(x) f(y)} split evenly over the fibre of f(y)
double typed_individual_transition(const VariableModelConfig& cfg, std::span<const int> x,
                                   std::span<const int> y);

// the same probability averaged over parent-slot permutations and offspring
// outcomes (exponential in N; cross-validation route for small N)
double typed_individual_permutation_formula(const VariableModelConfig& cfg, std::span<const int> x,
                                            std::span<const int> y);

// one forward generation: reproduction block sums, then per-type multinomial
// mutation
std::vector<int> forward_step(const VariableModelConfig& cfg, std::span<const int> state, RngStream& rng);

std::vector<std::vector<int>> simulate_forward(const VariableModelConfig& cfg, std::span<const int> initial,
                                               int64_t horizon, RngStream& rng);

}  // namespace cannings

#endif
