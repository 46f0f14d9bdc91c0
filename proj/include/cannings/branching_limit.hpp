#ifndef CANNINGS_BRANCHING_LIMIT_HPP
#define CANNINGS_BRANCHING_LIMIT_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "cannings/forward_variable.hpp"
#include "cannings/mutation.hpp"
#include "cannings/offspring.hpp"
#include "cannings/rng.hpp"

namespace cannings {

// Offspring law of the limiting multi-type branching process: a type-k
// parent begets the typed vector Y_k obtained by thinning the limit
// variable xi through row k of the mutation matrix. Requires u_KK = 1 so
// type-K children never flow back.
struct BranchingLaw {
    LimitOffspringLaw xi;
    MutationMatrix u;

    int num_types() const { return u.num_types(); }          // K
    int reduced_types() const { return u.num_types() - 1; }  // L
    void validate() const;                                   // checks u_KK = 1 and K >= 2
};

// P(Y_k = j) for j over the first L types
double yk_pmf(const BranchingLaw& law, int k, std::span<const int> j);

// E[ prod_l (Y_{kl})_{m_l} ] = E[(xi)_{|m|}] * prod_l u_{kl}^{m_l}
double yk_factorial_moment(const BranchingLaw& law, int k, std::span<const int> m);

// Cov(Y_{k,l1}, Y_{k,l2}) for l1 != l2
double yk_covariance(const BranchingLaw& law, int k, int l1, int l2);

// one draw of Y_k
std::vector<int> yk_sample(const BranchingLaw& law, int k, RngStream& rng);

// distribution of sum_k Y_k^{*i_k} (the one-generation law from counts i),
// truncated where the xi tail is below `tail`
std::map<std::vector<int>, double> branching_one_step_pmf(const BranchingLaw& law, std::span<const int> i,
                                                          double tail = 1e-14);

// population path; throws CapError when the total grows past `cap`
std::vector<std::vector<int>> simulate_branching(const BranchingLaw& law, std::span<const int> initial,
                                                 int64_t horizon, int64_t cap, RngStream& rng);

// finite-population one-step law of the first L coordinates, for comparison
// against the branching limit
std::map<std::vector<int>, double> finite_first_marginal(const VariableModelConfig& cfg,
                                                         std::span<const int> i_first);

struct GwDiagnosticRow {
    int scale = 0;  // N
    std::vector<int> start;
    std::vector<int> target;
    double p_finite = 0.0;
    double p_limit = 0.0;
};

// per-state errors between the finite one-step law and the branching limit
std::vector<GwDiagnosticRow> gw_convergence_table(const BranchingLaw& law,
                                                  const std::function<VariableModelConfig(int)>& family,
                                                  const std::vector<int>& n_grid,
                                                  std::span<const int> start);

// total variation distance between the two laws at one population size
double gw_total_variation(const BranchingLaw& law, const VariableModelConfig& cfg,
                          std::span<const int> start);

struct GwFailureRow {
    int scale = 0;
    double mean_first_type = 0.0;  // N * pi_1
};

// mean of the first coordinate across N when back-mutation from the last
// type is allowed; grows linearly, so no weak limit exists
std::vector<GwFailureRow> gw_failure_diagnostic(const std::function<VariableModelConfig(int)>& family,
                                                const std::vector<int>& n_grid, std::span<const int> start);

}  // namespace cannings

#endif
