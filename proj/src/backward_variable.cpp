#include "cannings/backward_variable.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "cannings/combinatorics.hpp"
#include "cannings/errors.hpp"

namespace cannings {

double p_rep_backward(const VariableModelConfig& cfg, std::span<const int> i, std::span<const int> j) {
    const int K = cfg.num_types();
    const int N = cfg.population_size();
    long long ti = 0, tj = 0;
    for (int v : i) {
        if (v < 0) throw std::domain_error("backward: negative count");
        ti += v;
    }
    for (int v : j) {
        if (v < 0) throw std::domain_error("backward: negative count");
        tj += v;
    }
    if (ti > N || tj > N) throw std::domain_error("backward: sample larger than the population");

    for (int k = 0; k < K; ++k) {
        int ik = i[static_cast<size_t>(k)], jk = j[static_cast<size_t>(k)];
        if ((ik == 0) != (jk == 0)) return 0.0;
        if (jk > ik) return 0.0;
    }
    if (tj == 0) return ti == 0 ? 1.0 : 0.0;

    // sum over concatenated positive compositions: the j_k parents of the
    // type-k sample carry a composition of i_k
    double prefactor = 1.0;
    for (int k = 0; k < K; ++k)
        prefactor *= factorial(i[static_cast<size_t>(k)]) / factorial(j[static_cast<size_t>(k)]);

    std::vector<int> counts(static_cast<size_t>(tj), 0);
    CompensatedSum sum;
    std::function<void(int, int)> per_type = [&](int k, int offset) {
        if (k == K) {
            double term = cfg.law.phi(counts);
            if (term != 0.0) {
                for (int v : counts) term /= factorial(v);
                sum.add(term);
            }
            return;
        }
        int ik = i[static_cast<size_t>(k)], jk = j[static_cast<size_t>(k)];
        if (jk == 0) {
            per_type(k + 1, offset);
            return;
        }
        for_each_composition(ik, jk, 1, [&](std::span<const int> comp) {
            for (int t = 0; t < jk; ++t) counts[static_cast<size_t>(offset + t)] = comp[static_cast<size_t>(t)];
            per_type(k + 1, offset + jk);
        });
    };
    per_type(0, 0);
    return prefactor * sum.value();
}

double p_mut_backward(const VariableModelConfig& cfg, std::span<const int> i, std::span<const int> j) {
    const int K = cfg.num_types();
    double total = 0.0;
    for_each_contingency_table(i, j, [&](const std::vector<std::vector<int>>& m) {
        double term = 1.0;
        for (int k = 0; k < K; ++k) {
            term *= factorial(i[static_cast<size_t>(k)]);
            for (int l = 0; l < K; ++l) {
                int flow = m[static_cast<size_t>(k)][static_cast<size_t>(l)];
                double ul = cfg.u(l, k);  // transposed direction backward in time
                if (flow > 0 && ul == 0.0) {
                    term = 0.0;
                    break;
                }
                term *= std::pow(ul, static_cast<double>(flow)) / factorial(flow);
            }
            if (term == 0.0) break;
        }
        total += term;
    });
    return total;
}

LabeledMatrix p_rep_backward_matrix(const VariableModelConfig& cfg, const CountStateSpace& space) {
    LabeledMatrix m(space.labels());
    for (size_t r = 0; r < space.states.size(); ++r)
        for (size_t c = 0; c < space.states.size(); ++c)
            m.at(r, c) = p_rep_backward(cfg, space.states[r], space.states[c]);
    return m;
}

LabeledMatrix p_mut_backward_matrix(const VariableModelConfig& cfg, const CountStateSpace& space) {
    LabeledMatrix m(space.labels());
    if (cfg.u.is_identity()) return LabeledMatrix::identity(space.labels());
    for (size_t r = 0; r < space.states.size(); ++r)
        for (size_t c = 0; c < space.states.size(); ++c)
            m.at(r, c) = p_mut_backward(cfg, space.states[r], space.states[c]);
    return m;
}

LabeledMatrix backward_matrix(const VariableModelConfig& cfg, int64_t cap) {
    cfg.validate();
    CountStateSpace space = CountStateSpace::simplex(cfg.population_size(), cfg.num_types(), cap);
    LabeledMatrix rep = p_rep_backward_matrix(cfg, space);
    LabeledMatrix mut = p_mut_backward_matrix(cfg, space);
    return mut.multiply(rep);
}

}  // namespace cannings
