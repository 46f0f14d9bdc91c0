#ifndef CANNINGS_COALESCENT_LIMIT_HPP
#define CANNINGS_COALESCENT_LIMIT_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cannings/ancestry_fixed.hpp"
#include "cannings/matrix.hpp"
#include "cannings/typed_partition.hpp"
#include "cannings/xi.hpp"

namespace cannings {

// Limiting multi-type coalescent: per-type driving measure and calibration
// constant, plus block retyping rates.
struct CoalescentSpec {
    std::vector<XiMeasure> xi;   // one per type
    std::vector<double> d;       // calibration constants, >= 0
    std::vector<double> rho;     // K x K retyping rates, diagonal ignored
    std::vector<std::string> type_names;

    int num_types() const { return static_cast<int>(xi.size()); }
    double rho_at(int k, int l) const { return rho[static_cast<size_t>(k * num_types() + l)]; }
    double rho_total(int k) const;
    void validate() const;
};

// generator of within-type mergers over typed partitions of [n]
LabeledMatrix q_rep(const CoalescentSpec& spec, int n, int64_t cap = 1000000);

// generator of single-block retyping events
LabeledMatrix q_mut(const CoalescentSpec& spec, int n, int64_t cap = 1000000);

// Q = q_rep + q_mut
LabeledMatrix q_full(const CoalescentSpec& spec, int n, int64_t cap = 1000000);

// Discrete-time limit for a coalescence probability tending to c > 0.
struct DiscreteLimit {
    LabeledMatrix a_mut;
    LabeledMatrix a_rep;
    LabeledMatrix a;  // a_mut * a_rep
};
DiscreteLimit discrete_limit_matrices(const CoalescentSpec& spec, double c, int n, int64_t cap = 1000000);

// block counting generator over type-count vectors with 1 <= total <= cap
LabeledMatrix block_counting_generator(const CoalescentSpec& spec, int cap);

// e^{tG} by uniformization; preserves row stochasticity up to the Poisson
// tail truncation (< 1e-12)
LabeledMatrix matrix_exponential(const LabeledMatrix& generator, double t);

// Finite-size family for convergence diagnostics: the same model built at
// any population scale.
struct FixedModelFamily {
    std::function<FixedModelConfig(int)> config_at;  // model at scale N
    std::function<double(int, const FixedModelConfig&)> calibration;  // c_N at scale N
};

struct DiagnosticRow {
    int scale = 0;  // N
    double t = 0.0;
    double c_n = 0.0;
    double sup_norm_error = 0.0;
};

// sup-norm distance between the rescaled finite transition semigroup and
// the limit semigroup on the shared typed-partition space
std::vector<DiagnosticRow> convergence_diagnostic(const FixedModelFamily& family,
                                                  const CoalescentSpec& spec,
                                                  const std::vector<int>& n_grid,
                                                  const std::vector<double>& t_grid,
                                                  int64_t cap = 1000000);

}  // namespace cannings

#endif
