#ifndef CANNINGS_BACKWARD_VARIABLE_HPP
#define CANNINGS_BACKWARD_VARIABLE_HPP

#include <cstdint>
#include <span>

#include "cannings/count_states.hpp"
#include "cannings/forward_variable.hpp"
#include "cannings/matrix.hpp"

namespace cannings {

// Backward quantities of the variable-subpopulation model over count
// vectors with total at most N. The combined matrix P = P_mut * P_rep is
// in general not stochastic; row sums are reported, never normalized away.

// probability that the i_k sampled type-k individuals have exactly j_k
// parents, for every type, in the absence of mutation
double p_rep_backward(const VariableModelConfig& cfg, std::span<const int> i, std::span<const int> j);

// mutational backward weight: flow-table sum with the transposed mutation
// probabilities; zero unless |i| = |j|
double p_mut_backward(const VariableModelConfig& cfg, std::span<const int> i, std::span<const int> j);

LabeledMatrix p_rep_backward_matrix(const VariableModelConfig& cfg, const CountStateSpace& space);
LabeledMatrix p_mut_backward_matrix(const VariableModelConfig& cfg, const CountStateSpace& space);

LabeledMatrix backward_matrix(const VariableModelConfig& cfg, int64_t cap = 1000000);

}  // namespace cannings

#endif
