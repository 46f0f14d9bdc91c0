#include "cannings/coalescent_limit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>

#include "cannings/combinatorics.hpp"
#include "cannings/errors.hpp"

namespace cannings {

double CoalescentSpec::rho_total(int k) const {
    double s = 0.0;
    for (int l = 0; l < num_types(); ++l)
        if (l != k) s += rho_at(k, l);
    return s;
}

void CoalescentSpec::validate() const {
    const int K = num_types();
    if (K < 1) throw ValidationError("limit: at least one type is required");
    if (static_cast<int>(d.size()) != K)
        throw ValidationError("limit.d: need one calibration constant per type");
    for (double v : d)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ValidationError("limit.d: constants must be finite and >= 0");
    if (rho.size() != static_cast<size_t>(K) * static_cast<size_t>(K))
        throw ValidationError("limit.rho: expected a " + std::to_string(K) + "x" + std::to_string(K) +
                              " rate matrix");
    for (int k = 0; k < K; ++k)
        for (int l = 0; l < K; ++l)
            if (k != l && (!(rho_at(k, l) >= 0.0) || !std::isfinite(rho_at(k, l))))
                throw ValidationError("limit.rho: rates must be finite and >= 0");
    for (const auto& m : xi) m.validate();
}

namespace {

// group sizes per type for a within-type coarsening, as in the finite model
std::optional<std::vector<std::vector<int>>> merge_groups_typed(int num_types, const TypedPartition& from,
                                                                const TypedPartition& to) {
    std::vector<int> to_block_of(static_cast<size_t>(from.n), -1);
    for (size_t b = 0; b < to.blocks.size(); ++b)
        for (int e : to.blocks[b]) to_block_of[static_cast<size_t>(e)] = static_cast<int>(b);
    std::vector<int> children(to.blocks.size(), 0);
    for (size_t fb = 0; fb < from.blocks.size(); ++fb) {
        int tb = to_block_of[static_cast<size_t>(from.blocks[fb].front())];
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

LabeledMatrix q_rep(const CoalescentSpec& spec, int n, int64_t cap) {
    spec.validate();
    PartitionSpace space = PartitionSpace::enumerate(n, spec.num_types(), cap);
    LabeledMatrix q(space.labels(spec.type_names));
    for (size_t r = 0; r < space.states.size(); ++r) {
        double out = 0.0;
        for (size_t c = 0; c < space.states.size(); ++c) {
            if (r == c) continue;
            auto groups = merge_groups_typed(spec.num_types(), space.states[r], space.states[c]);
            if (!groups) continue;
            // rate is nonzero only for a merger in exactly one type
            int merging_type = -1;
            bool simultaneous = false;
            for (int k = 0; k < spec.num_types(); ++k) {
                const auto& g = (*groups)[static_cast<size_t>(k)];
                long long src = 0;
                for (int v : g) src += v;
                if (src > static_cast<long long>(g.size())) {
                    if (merging_type >= 0) simultaneous = true;
                    merging_type = k;
                }
            }
            if (simultaneous || merging_type < 0) continue;
            const auto& g = (*groups)[static_cast<size_t>(merging_type)];
            double rate = spec.d[static_cast<size_t>(merging_type)] *
                          xi_rate_extended(spec.xi[static_cast<size_t>(merging_type)], g);
            if (rate < 0.0 && rate > -1e-12) rate = 0.0;
            q.at(r, c) = rate;
            out += rate;
        }
        q.at(r, r) = -out;
    }
    return q;
}

LabeledMatrix q_mut(const CoalescentSpec& spec, int n, int64_t cap) {
    spec.validate();
    PartitionSpace space = PartitionSpace::enumerate(n, spec.num_types(), cap);
    LabeledMatrix q(space.labels(spec.type_names));
    for (size_t r = 0; r < space.states.size(); ++r) {
        const TypedPartition& from = space.states[r];
        double out = 0.0;
        for (size_t b = 0; b < from.blocks.size(); ++b) {
            for (int l = 0; l < spec.num_types(); ++l) {
                if (l == from.types[b]) continue;
                double rate = spec.rho_at(from.types[b], l);
                if (rate == 0.0) continue;
                TypedPartition to = from;
                to.types[b] = l;
                q.at(r, static_cast<size_t>(space.index_of(to))) += rate;
                out += rate;
            }
        }
        q.at(r, r) = -out;
    }
    return q;
}

LabeledMatrix q_full(const CoalescentSpec& spec, int n, int64_t cap) {
    LabeledMatrix rep = q_rep(spec, n, cap);
    LabeledMatrix mut = q_mut(spec, n, cap);
    LabeledMatrix q = rep;
    for (size_t i = 0; i < q.a.size(); ++i) q.a[i] += mut.a[i];
    return q;
}

DiscreteLimit discrete_limit_matrices(const CoalescentSpec& spec, double c, int n, int64_t cap) {
    spec.validate();
    if (!(c > 0.0)) throw std::domain_error("discrete limit: c must be positive");
    const int K = spec.num_types();
    for (int k = 0; k < K; ++k) {
        for (int l = 0; l < K; ++l)
            if (k != l && c * spec.rho_at(k, l) > 1.0 + 1e-12)
                throw std::domain_error("discrete limit: c*rho exceeds 1, rows cannot be stochastic");
        if (c * spec.rho_total(k) > 1.0 + 1e-12)
            throw std::domain_error("discrete limit: total retyping probability of type " +
                                    std::to_string(k) + " exceeds 1");
    }

    PartitionSpace space = PartitionSpace::enumerate(n, K, cap);
    DiscreteLimit out{LabeledMatrix(space.labels(spec.type_names)),
                      LabeledMatrix(space.labels(spec.type_names)), LabeledMatrix()};

    // retyping step: blocks change type independently; the stay probability
    // per block is 1 - c*rho_k, the unique completion keeping rows stochastic
    for (size_t r = 0; r < space.states.size(); ++r) {
        const TypedPartition& from = space.states[r];
        for (size_t cidx = 0; cidx < space.states.size(); ++cidx) {
            const TypedPartition& to = space.states[cidx];
            if (from.blocks != to.blocks) continue;
            double p = 1.0;
            for (size_t b = 0; b < from.blocks.size(); ++b) {
                int k = from.types[b], l = to.types[b];
                p *= (k == l) ? (1.0 - c * spec.rho_total(k)) : c * spec.rho_at(k, l);
                if (p == 0.0) break;
            }
            out.a_mut.at(r, cidx) = p;
        }
    }

    // merger step: independent factors per type; an unchanged type contributes
    // its stay probability 1 + c*d_k*phi(1,...,1)
    std::vector<double> stay(static_cast<size_t>(K) * static_cast<size_t>(n + 1), 1.0);
    for (int k = 0; k < K; ++k)
        for (int b = 1; b <= n; ++b) {
            std::vector<int> ones(static_cast<size_t>(b), 1);
            double s = 1.0 + c * spec.d[static_cast<size_t>(k)] *
                                 xi_rate_extended(spec.xi[static_cast<size_t>(k)], ones);
            if (s < -1e-12)
                throw std::domain_error("discrete limit: c exceeds the merger budget of type " +
                                        std::to_string(k));
            stay[static_cast<size_t>(k * (n + 1) + b)] = std::max(s, 0.0);
        }

    for (size_t r = 0; r < space.states.size(); ++r) {
        double off_total = 0.0;
        for (size_t cidx = 0; cidx < space.states.size(); ++cidx) {
            if (cidx == r) continue;
            auto groups = merge_groups_typed(K, space.states[r], space.states[cidx]);
            if (!groups) continue;
            double p = 1.0;
            for (int k = 0; k < K; ++k) {
                const auto& g = (*groups)[static_cast<size_t>(k)];
                if (g.empty()) continue;
                long long src = 0;
                for (int v : g) src += v;
                if (src > static_cast<long long>(g.size())) {
                    double f = c * spec.d[static_cast<size_t>(k)] *
                               xi_rate_extended(spec.xi[static_cast<size_t>(k)], g);
                    if (f > 1.0 + 1e-12)
                        throw std::domain_error("discrete limit: a merger factor exceeds 1");
                    p *= std::max(f, 0.0);
                } else {
                    p *= stay[static_cast<size_t>(k * (n + 1) + static_cast<int>(g.size()))];
                }
                if (p == 0.0) break;
            }
            out.a_rep.at(r, cidx) = p;
            off_total += p;
        }
        if (off_total > 1.0 + 1e-9)
            throw std::domain_error("discrete limit: row mass exceeds 1, c is too large");
        out.a_rep.at(r, r) = 1.0 - off_total;
    }

    out.a = out.a_mut.multiply(out.a_rep);
    return out;
}

namespace {

std::string count_label(std::span<const int> counts) {
    std::string s;
    for (size_t i = 0; i < counts.size(); ++i) {
        if (i > 0) s += "|";
        s += std::to_string(counts[i]);
    }
    return s;
}

void enumerate_count_states(int num_types, int total_cap, std::vector<std::vector<int>>& out) {
    std::vector<int> cur(static_cast<size_t>(num_types), 0);
    std::function<void(int, int)> rec = [&](int k, int used) {
        if (k == num_types) {
            if (used >= 1) out.push_back(cur);
            return;
        }
        for (int v = 0; v + used <= total_cap; ++v) {
            cur[static_cast<size_t>(k)] = v;
            rec(k + 1, used + v);
        }
        cur[static_cast<size_t>(k)] = 0;
    };
    rec(0, 0);
}

}  // namespace

LabeledMatrix block_counting_generator(const CoalescentSpec& spec, int cap) {
    spec.validate();
    if (cap < 1) throw ValidationError("block counting: cap must be >= 1");
    const int K = spec.num_types();

    std::vector<std::vector<int>> states;
    enumerate_count_states(K, cap, states);
    std::map<std::vector<int>, size_t> index;
    std::vector<std::string> labels;
    for (size_t i = 0; i < states.size(); ++i) {
        index[states[i]] = i;
        labels.push_back(count_label(states[i]));
    }

    LabeledMatrix g(labels);
    for (size_t r = 0; r < states.size(); ++r) {
        const auto& i = states[r];

        // merger events: one type k drops from i_k to j_k
        for (int k = 0; k < K; ++k) {
            const int ik = i[static_cast<size_t>(k)];
            if (ik < 2 || spec.d[static_cast<size_t>(k)] == 0.0) continue;
            for (int jk = 1; jk < ik; ++jk) {
                CompensatedSum sum;
                for_each_composition(ik, jk, 1, [&](std::span<const int> comp) {
                    double term = xi_rate_extended(spec.xi[static_cast<size_t>(k)], comp);
                    for (int v : comp) term /= factorial(v);
                    sum.add(term);
                });
                double rate = spec.d[static_cast<size_t>(k)] * factorial(ik) / factorial(jk) * sum.value();
                if (rate < 0.0 && rate > -1e-12) rate = 0.0;
                std::vector<int> j = i;
                j[static_cast<size_t>(k)] = jk;
                g.at(r, index.at(j)) = rate;
            }
        }

        // retyping events
        for (int k = 0; k < K; ++k) {
            const int ik = i[static_cast<size_t>(k)];
            if (ik == 0) continue;
            for (int l = 0; l < K; ++l) {
                if (l == k || spec.rho_at(k, l) == 0.0) continue;
                std::vector<int> j = i;
                j[static_cast<size_t>(k)] -= 1;
                j[static_cast<size_t>(l)] += 1;
                g.at(r, index.at(j)) += static_cast<double>(ik) * spec.rho_at(k, l);
            }
        }

        // diagonal: merger part from the all-ones rate, retyping part as -i_k rho_k
        double diag = 0.0;
        for (int k = 0; k < K; ++k) {
            const int ik = i[static_cast<size_t>(k)];
            if (ik >= 2 && spec.d[static_cast<size_t>(k)] > 0.0) {
                std::vector<int> ones(static_cast<size_t>(ik), 1);
                diag += spec.d[static_cast<size_t>(k)] *
                        xi_rate_extended(spec.xi[static_cast<size_t>(k)], ones);
            }
            diag -= static_cast<double>(ik) * spec.rho_total(k);
        }
        g.at(r, r) = diag;
    }
    return g;
}

LabeledMatrix matrix_exponential(const LabeledMatrix& generator, double t) {
    const size_t n = generator.size();
    if (t < 0.0) throw std::domain_error("matrix exponential: t must be >= 0");
    double lambda = 0.0;
    for (size_t i = 0; i < n; ++i) lambda = std::max(lambda, -generator.at(i, i));
    if (lambda == 0.0 || t == 0.0) return LabeledMatrix::identity(generator.labels);

    // uniformized kernel I + G/lambda
    LabeledMatrix kernel = LabeledMatrix::identity(generator.labels);
    for (size_t i = 0; i < n * n; ++i) kernel.a[i] += generator.a[i] / lambda;

    const double mu = lambda * t;
    LabeledMatrix term = LabeledMatrix::identity(generator.labels);
    LabeledMatrix result(generator.labels);
    double weight = std::exp(-mu);  // Poisson(mu) pmf at 0
    double cum = 0.0;
    int m = 0;
    while (cum < 1.0 - 1e-12) {
        for (size_t i = 0; i < n * n; ++i) result.a[i] += weight * term.a[i];
        cum += weight;
        ++m;
        term = term.multiply(kernel);
        weight *= mu / static_cast<double>(m);
        if (m > 100000) break;
    }
    return result;
}

std::vector<DiagnosticRow> convergence_diagnostic(const FixedModelFamily& family,
                                                  const CoalescentSpec& spec,
                                                  const std::vector<int>& n_grid,
                                                  const std::vector<double>& t_grid, int64_t cap) {
    std::vector<DiagnosticRow> rows;
    if (n_grid.empty() || t_grid.empty()) return rows;

    FixedModelConfig probe = family.config_at(n_grid.front());
    LabeledMatrix q = q_full(spec, probe.sample_size(), cap);

    for (int scale : n_grid) {
        FixedModelConfig cfg = family.config_at(scale);
        LabeledMatrix p = transition_matrix(cfg, cap);
        if (p.size() != q.size())
            throw ValidationError("limit check: finite and limit state spaces differ");
        double c_n = family.calibration(scale, cfg);
        if (!(c_n > 0.0)) throw ValidationError("limit check: calibration c_N must be positive");
        for (double t : t_grid) {
            auto steps = static_cast<uint64_t>(std::floor(t / c_n));
            LabeledMatrix finite = p.power(steps);
            LabeledMatrix limit = matrix_exponential(q, t);
            rows.push_back({scale, t, c_n, finite.sup_row_norm_diff(limit)});
        }
    }
    return rows;
}

}  // namespace cannings
