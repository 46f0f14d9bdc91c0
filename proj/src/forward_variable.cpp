#include "cannings/forward_variable.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "cannings/combinatorics.hpp"
#include "cannings/errors.hpp"

namespace cannings {

void VariableModelConfig::validate() const {
    if (num_types() < 1) throw ValidationError("variable model: at least one type is required");
}

std::vector<std::pair<std::vector<int>, double>> offspring_block_sums(const VariableModelConfig& cfg,
                                                                      std::span<const int> i) {
    const int K = cfg.num_types();
    const int N = cfg.population_size();
    long long total = 0;
    for (int v : i) total += v;
    if (total != N) throw ValidationError("variable model: state does not sum to the population size");

    std::vector<std::pair<std::vector<int>, double>> out;
    switch (cfg.law.kind()) {
        case OffspringKind::Dirac:
            out.emplace_back(std::vector<int>(i.begin(), i.end()), 1.0);
            return out;
        case OffspringKind::ExtremePermutation: {
            for (int k = 0; k < K; ++k) {
                if (i[static_cast<size_t>(k)] == 0) continue;
                std::vector<int> j(static_cast<size_t>(K), 0);
                j[static_cast<size_t>(k)] = N;
                out.emplace_back(std::move(j), static_cast<double>(i[static_cast<size_t>(k)]) / N);
            }
            return out;
        }
        case OffspringKind::WrightFisher: {
            CountStateSpace delta = CountStateSpace::delta(N, K);
            for (const auto& j : delta.states) {
                double p = factorial(N);
                bool zero = false;
                for (int k = 0; k < K; ++k) {
                    int jk = j[static_cast<size_t>(k)];
                    if (jk == 0) continue;
                    if (i[static_cast<size_t>(k)] == 0) {
                        zero = true;
                        break;
                    }
                    p *= std::pow(static_cast<double>(i[static_cast<size_t>(k)]) / N,
                                  static_cast<double>(jk)) /
                         factorial(jk);
                }
                if (!zero && p > 0.0) out.emplace_back(j, p);
            }
            return out;
        }
        case OffspringKind::Kimura: {
            const int c = cfg.law.kimura_c();
            CountStateSpace delta = CountStateSpace::delta(N, K);
            const bool log_space = static_cast<long long>(c) * N > 60;
            for (const auto& j : delta.states) {
                if (log_space) {
                    double lg = -log_binom(static_cast<long long>(c) * N, N);
                    bool infeasible = false;
                    for (int k = 0; k < K; ++k) {
                        if (j[static_cast<size_t>(k)] > c * i[static_cast<size_t>(k)]) {
                            infeasible = true;
                            break;
                        }
                        lg += log_binom(static_cast<long long>(c) * i[static_cast<size_t>(k)],
                                        j[static_cast<size_t>(k)]);
                    }
                    if (!infeasible && std::isfinite(lg)) out.emplace_back(j, std::exp(lg));
                } else {
                    double p = 1.0 / binom(static_cast<long long>(c) * N, N);
                    for (int k = 0; k < K; ++k)
                        p *= binom(static_cast<long long>(c) * i[static_cast<size_t>(k)],
                                   j[static_cast<size_t>(k)]);
                    if (p > 0.0) out.emplace_back(j, p);
                }
            }
            return out;
        }
        case OffspringKind::Table: {
            // distribute the value classes of each orbit over the type blocks
            std::map<std::vector<int>, double> acc;
            for (const auto& orbit : cfg.law.orbits()) {
                std::vector<std::pair<int, int>> classes;
                {
                    int idx = 0;
                    const auto& p = orbit.parts;
                    while (idx < static_cast<int>(p.size())) {
                        int v = p[static_cast<size_t>(idx)];
                        int cnt = 0;
                        while (idx < static_cast<int>(p.size()) && p[static_cast<size_t>(idx)] == v) {
                            ++cnt;
                            ++idx;
                        }
                        classes.emplace_back(v, cnt);
                    }
                    int zeros = N - static_cast<int>(p.size());
                    if (zeros > 0) classes.emplace_back(0, zeros);
                }
                // P(per-block class counts A) =
                //   prod_k i_k!/prod_t a_{t,k}!  /  (N!/prod_t mult_t!)
                std::vector<int> cap(i.begin(), i.end());
                std::vector<int> sums(static_cast<size_t>(K), 0);
                double arrangements = factorial(N);
                for (const auto& [v, cnt] : classes) arrangements /= factorial(cnt);

                std::function<void(size_t, double)> rec = [&](size_t t, double ways) {
                    if (t == classes.size()) {
                        bool full = true;
                        for (int k = 0; k < K; ++k)
                            if (cap[static_cast<size_t>(k)] != 0) full = false;
                        if (full) acc[sums] += orbit.prob * ways / arrangements;
                        return;
                    }
                    auto [value, mult] = classes[t];
                    std::vector<int> split(static_cast<size_t>(K), 0);
                    std::function<void(int, int, double)> place = [&](int k, int left, double w) {
                        if (k == K - 1) {
                            if (left > cap[static_cast<size_t>(k)]) return;
                            split[static_cast<size_t>(k)] = left;
                            double w2 = w / factorial(left);
                            for (int kk = 0; kk < K; ++kk) {
                                cap[static_cast<size_t>(kk)] -= split[static_cast<size_t>(kk)];
                                sums[static_cast<size_t>(kk)] += value * split[static_cast<size_t>(kk)];
                            }
                            rec(t + 1, ways * w2);
                            for (int kk = 0; kk < K; ++kk) {
                                cap[static_cast<size_t>(kk)] += split[static_cast<size_t>(kk)];
                                sums[static_cast<size_t>(kk)] -= value * split[static_cast<size_t>(kk)];
                            }
                            split[static_cast<size_t>(k)] = 0;
                            return;
                        }
                        for (int v2 = 0; v2 <= std::min(left, cap[static_cast<size_t>(k)]); ++v2) {
                            split[static_cast<size_t>(k)] = v2;
                            place(k + 1, left - v2, w / factorial(v2));
                            split[static_cast<size_t>(k)] = 0;
                        }
                    };
                    place(0, mult, ways);
                };
                double block_positions = 1.0;
                for (int k = 0; k < K; ++k) block_positions *= factorial(i[static_cast<size_t>(k)]);
                rec(0, block_positions);
            }
            out.assign(acc.begin(), acc.end());
            return out;
        }
    }
    return out;
}

double pi_rep_entry(const VariableModelConfig& cfg, std::span<const int> i, std::span<const int> j) {
    for (const auto& [state, prob] : offspring_block_sums(cfg, i))
        if (std::equal(state.begin(), state.end(), j.begin(), j.end())) return prob;
    return 0.0;
}

double pi_mut_entry(const VariableModelConfig& cfg, std::span<const int> i, std::span<const int> j) {
    const int K = cfg.num_types();
    double total = 0.0;
    for_each_contingency_table(i, j, [&](const std::vector<std::vector<int>>& m) {
        double term = 1.0;
        for (int k = 0; k < K; ++k) {
            term *= factorial(i[static_cast<size_t>(k)]);
            for (int l = 0; l < K; ++l) {
                int flow = m[static_cast<size_t>(k)][static_cast<size_t>(l)];
                double ul = cfg.u(k, l);
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

LabeledMatrix pi_rep_matrix(const VariableModelConfig& cfg, const CountStateSpace& space) {
    LabeledMatrix m(space.labels());
    for (size_t r = 0; r < space.states.size(); ++r) {
        for (const auto& [j, prob] : offspring_block_sums(cfg, space.states[r]))
            m.at(r, static_cast<size_t>(space.index_of(j))) = prob;
    }
    return m;
}

LabeledMatrix pi_mut_matrix(const VariableModelConfig& cfg, const CountStateSpace& space) {
    LabeledMatrix m(space.labels());
    if (cfg.u.is_identity()) return LabeledMatrix::identity(space.labels());
    for (size_t r = 0; r < space.states.size(); ++r)
        for (size_t c = 0; c < space.states.size(); ++c)
            m.at(r, c) = pi_mut_entry(cfg, space.states[r], space.states[c]);
    return m;
}

LabeledMatrix forward_transition_matrix(const VariableModelConfig& cfg, int64_t cap) {
    cfg.validate();
    CountStateSpace space = CountStateSpace::delta(cfg.population_size(), cfg.num_types(), cap);
    LabeledMatrix rep = pi_rep_matrix(cfg, space);
    LabeledMatrix mut = pi_mut_matrix(cfg, space);
    return rep.multiply(mut);
}

double forward_direct_entry(const VariableModelConfig& cfg, std::span<const int> i, std::span<const int> j) {
    const int K = cfg.num_types();
    const int N = cfg.population_size();

    // index the block-sum distribution of i
    std::map<std::vector<int>, double> dsums;
    for (auto& [state, prob] : offspring_block_sums(cfg, i)) dsums[state] = prob;

    // enumerate flow tables column by column with free row sums
    std::vector<std::vector<int>> m(static_cast<size_t>(K), std::vector<int>(static_cast<size_t>(K), 0));
    std::vector<int> rowsum(static_cast<size_t>(K), 0);
    double total = 0.0;
    std::function<void(int)> fill_col = [&](int col) {
        if (col == K) {
            auto it = dsums.find(rowsum);
            if (it == dsums.end()) return;
            double term = it->second;
            for (int k = 0; k < K; ++k) {
                term *= factorial(rowsum[static_cast<size_t>(k)]);
                for (int l = 0; l < K; ++l) {
                    int flow = m[static_cast<size_t>(k)][static_cast<size_t>(l)];
                    double ul = cfg.u(k, l);
                    if (flow > 0 && ul == 0.0) {
                        term = 0.0;
                        break;
                    }
                    term *= std::pow(ul, static_cast<double>(flow)) / factorial(flow);
                }
                if (term == 0.0) break;
            }
            total += term;
            return;
        }
        std::function<void(int, int)> fill_cell = [&](int row, int left) {
            if (row == K - 1) {
                if (rowsum[static_cast<size_t>(row)] + left <= N) {
                    m[static_cast<size_t>(row)][static_cast<size_t>(col)] = left;
                    rowsum[static_cast<size_t>(row)] += left;
                    fill_col(col + 1);
                    rowsum[static_cast<size_t>(row)] -= left;
                    m[static_cast<size_t>(row)][static_cast<size_t>(col)] = 0;
                }
                return;
            }
            for (int v = 0; v <= left && rowsum[static_cast<size_t>(row)] + v <= N; ++v) {
                m[static_cast<size_t>(row)][static_cast<size_t>(col)] = v;
                rowsum[static_cast<size_t>(row)] += v;
                fill_cell(row + 1, left - v);
                rowsum[static_cast<size_t>(row)] -= v;
                m[static_cast<size_t>(row)][static_cast<size_t>(col)] = 0;
            }
        };
        fill_cell(0, j[static_cast<size_t>(col)]);
    };
    fill_col(0);
    return total;
}

std::vector<double> forward_row(const VariableModelConfig& cfg, const CountStateSpace& space,
                                std::span<const int> i) {
    std::vector<double> row(space.states.size(), 0.0);
    if (cfg.u.is_identity()) {
        for (const auto& [state, prob] : offspring_block_sums(cfg, i))
            row[static_cast<size_t>(space.index_of(state))] += prob;
        return row;
    }
    for (const auto& [d, prob] : offspring_block_sums(cfg, i))
        for (size_t c = 0; c < space.states.size(); ++c) {
            double p = pi_mut_entry(cfg, d, space.states[c]);
            if (p > 0.0) row[c] += prob * p;
        }
    return row;
}

namespace {

std::vector<int> type_counts(std::span<const int> x, int num_types) {
    std::vector<int> c(static_cast<size_t>(num_types), 0);
    for (int v : x) c[static_cast<size_t>(v)] += 1;
    return c;
}

}  // namespace

double typed_individual_transition(const VariableModelConfig& cfg, std::span<const int> x,
                                   std::span<const int> y) {
    const int K = cfg.num_types();
    const int N = cfg.population_size();
    if (static_cast<int>(x.size()) != N || static_cast<int>(y.size()) != N)
        throw ValidationError("typed chain: type vectors must have length N");
    std::vector<int> i = type_counts(x, K);
    std::vector<int> j = type_counts(y, K);

    double pij = 0.0;
    for (const auto& [d, prob] : offspring_block_sums(cfg, i)) pij += prob * pi_mut_entry(cfg, d, j);

    double fibre = factorial(N);
    for (int k = 0; k < K; ++k) fibre /= factorial(j[static_cast<size_t>(k)]);
    return pij / fibre;
}

double typed_individual_permutation_formula(const VariableModelConfig& cfg, std::span<const int> x,
                                            std::span<const int> y) {
    const int N = cfg.population_size();
    if (N > 7) throw CapError("permutation-average route is exponential in N; use N <= 7");

    // ordered offspring outcomes with probabilities
    std::vector<std::pair<std::vector<int>, double>> outcomes;
    for (const auto& orbit : cfg.law.orbits()) {
        std::vector<int> padded = orbit.parts;
        padded.resize(static_cast<size_t>(N), 0);
        std::sort(padded.begin(), padded.end());
        double arrangements = factorial(N);
        int run = 1;
        for (size_t t = 1; t <= padded.size(); ++t) {
            if (t < padded.size() && padded[t] == padded[t - 1]) {
                ++run;
            } else {
                arrangements /= factorial(run);
                run = 1;
            }
        }
        do {
            outcomes.emplace_back(padded, orbit.prob / arrangements);
        } while (std::next_permutation(padded.begin(), padded.end()));
    }

    std::vector<int> perm(static_cast<size_t>(N));
    std::iota(perm.begin(), perm.end(), 0);
    double total = 0.0;
    do {
        for (const auto& [nu, prob] : outcomes) {
            double w = prob;
            int slot = 0;
            for (int parent = 0; parent < N && w != 0.0; ++parent) {
                for (int s = 0; s < nu[static_cast<size_t>(parent)]; ++s, ++slot)
                    w *= cfg.u(x[static_cast<size_t>(parent)],
                               y[static_cast<size_t>(perm[static_cast<size_t>(slot)])]);
            }
            total += w;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total / factorial(N);
}

std::vector<int> forward_step(const VariableModelConfig& cfg, std::span<const int> state, RngStream& rng) {
    const int K = cfg.num_types();
    const int N = cfg.population_size();

    std::vector<int> nu = cfg.law.sample(rng);
    std::vector<long long> d(static_cast<size_t>(K), 0);
    int pos = 0;
    for (int k = 0; k < K; ++k)
        for (int s = 0; s < state[static_cast<size_t>(k)]; ++s, ++pos) d[static_cast<size_t>(k)] += nu[static_cast<size_t>(pos)];
    (void)N;

    std::vector<int> next(static_cast<size_t>(K), 0);
    for (int k = 0; k < K; ++k) {
        if (d[static_cast<size_t>(k)] == 0) continue;
        std::vector<double> rowp(static_cast<size_t>(K));
        for (int l = 0; l < K; ++l) rowp[static_cast<size_t>(l)] = cfg.u(k, l);
        std::vector<int64_t> m = rng.multinomial(d[static_cast<size_t>(k)], rowp);
        for (int l = 0; l < K; ++l) next[static_cast<size_t>(l)] += static_cast<int>(m[static_cast<size_t>(l)]);
    }
    return next;
}

std::vector<std::vector<int>> simulate_forward(const VariableModelConfig& cfg, std::span<const int> initial,
                                               int64_t horizon, RngStream& rng) {
    cfg.validate();
    long long total = 0;
    for (int v : initial) total += v;
    if (static_cast<int>(initial.size()) != cfg.num_types() || total != cfg.population_size())
        throw ValidationError("forward simulation: initial state must be a composition of N over the types");
    std::vector<std::vector<int>> path;
    path.emplace_back(initial.begin(), initial.end());
    for (int64_t r = 0; r < horizon; ++r) path.push_back(forward_step(cfg, path.back(), rng));
    return path;
}

}  // namespace cannings
