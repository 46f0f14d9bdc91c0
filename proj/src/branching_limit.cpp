#include "cannings/branching_limit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "cannings/combinatorics.hpp"
#include "cannings/errors.hpp"

namespace cannings {

void BranchingLaw::validate() const {
    const int K = num_types();
    if (K < 2) throw ValidationError("branching limit: needs at least two types");
    if (std::fabs(u(K - 1, K - 1) - 1.0) > 1e-12)
        throw ValidationError(
            "branching limit: the last type must not mutate back (u_KK = 1); "
            "see the failure diagnostic for u_KK < 1");
}

double yk_pmf(const BranchingLaw& law, int k, std::span<const int> j) {
    law.validate();
    const int L = law.reduced_types();
    if (static_cast<int>(j.size()) != L)
        throw ValidationError("branching limit: target vector must have length K-1");
    int total = 0;
    for (int v : j) {
        if (v < 0) return 0.0;
        total += v;
    }
    double p = law.xi.weighted_factorial_moment(total, law.u(k, L));
    for (int l = 0; l < L; ++l) {
        int jl = j[static_cast<size_t>(l)];
        double ul = law.u(k, l);
        if (jl > 0 && ul == 0.0) return 0.0;
        p *= std::pow(ul, static_cast<double>(jl)) / factorial(jl);
    }
    return p;
}

double yk_factorial_moment(const BranchingLaw& law, int k, std::span<const int> m) {
    law.validate();
    const int L = law.reduced_types();
    int total = 0;
    for (int v : m) total += v;
    double r = law.xi.factorial_moment(total);
    for (int l = 0; l < L; ++l)
        r *= std::pow(law.u(k, l), static_cast<double>(m[static_cast<size_t>(l)]));
    return r;
}

double yk_covariance(const BranchingLaw& law, int k, int l1, int l2) {
    law.validate();
    if (l1 == l2) throw ValidationError("branching limit: covariance needs two distinct types");
    double e2 = law.xi.factorial_moment(2);
    double e1 = law.xi.factorial_moment(1);
    return (e2 - e1 * e1) * law.u(k, l1) * law.u(k, l2);
}

std::vector<int> yk_sample(const BranchingLaw& law, int k, RngStream& rng) {
    const int K = law.num_types();
    const int L = law.reduced_types();
    int xi = law.xi.sample(rng);
    std::vector<double> row(static_cast<size_t>(K));
    for (int l = 0; l < K; ++l) row[static_cast<size_t>(l)] = law.u(k, l);
    std::vector<int64_t> split = rng.multinomial(xi, row);
    std::vector<int> out(static_cast<size_t>(L));
    for (int l = 0; l < L; ++l) out[static_cast<size_t>(l)] = static_cast<int>(split[static_cast<size_t>(l)]);
    return out;
}

namespace {

// pmf of Y_k as a map over L-vectors, truncated at the xi support bound
std::map<std::vector<int>, double> yk_pmf_map(const BranchingLaw& law, int k, double tail) {
    const int L = law.reduced_types();
    const int max_total = law.xi.truncated_support(tail);
    std::map<std::vector<int>, double> out;
    std::vector<int> j(static_cast<size_t>(L), 0);
    std::function<void(int, int)> rec = [&](int l, int used) {
        if (l == L) {
            double p = yk_pmf(law, k, j);
            if (p > 0.0) out[j] = p;
            return;
        }
        for (int v = 0; v + used <= max_total; ++v) {
            j[static_cast<size_t>(l)] = v;
            rec(l + 1, used + v);
        }
        j[static_cast<size_t>(l)] = 0;
    };
    rec(0, 0);
    return out;
}

std::map<std::vector<int>, double> convolve(const std::map<std::vector<int>, double>& a,
                                            const std::map<std::vector<int>, double>& b) {
    std::map<std::vector<int>, double> out;
    for (const auto& [va, pa] : a)
        for (const auto& [vb, pb] : b) {
            std::vector<int> v = va;
            for (size_t t = 0; t < v.size(); ++t) v[t] += vb[t];
            out[v] += pa * pb;
        }
    return out;
}

}  // namespace

std::map<std::vector<int>, double> branching_one_step_pmf(const BranchingLaw& law, std::span<const int> i,
                                                          double tail) {
    law.validate();
    const int L = law.reduced_types();
    if (static_cast<int>(i.size()) != L)
        throw ValidationError("branching limit: start vector must have length K-1");
    std::map<std::vector<int>, double> dist;
    dist[std::vector<int>(static_cast<size_t>(L), 0)] = 1.0;
    for (int k = 0; k < L; ++k) {
        if (i[static_cast<size_t>(k)] == 0) continue;
        auto yk = yk_pmf_map(law, k, tail);
        for (int rep = 0; rep < i[static_cast<size_t>(k)]; ++rep) dist = convolve(dist, yk);
    }
    return dist;
}

std::vector<std::vector<int>> simulate_branching(const BranchingLaw& law, std::span<const int> initial,
                                                 int64_t horizon, int64_t cap, RngStream& rng) {
    law.validate();
    const int L = law.reduced_types();
    if (static_cast<int>(initial.size()) != L)
        throw ValidationError("branching limit: initial state must have length K-1");
    std::vector<std::vector<int>> path;
    path.emplace_back(initial.begin(), initial.end());
    for (int64_t r = 0; r < horizon; ++r) {
        const auto& cur = path.back();
        std::vector<int> next(static_cast<size_t>(L), 0);
        long long total = 0;
        for (int k = 0; k < L; ++k) {
            for (int ind = 0; ind < cur[static_cast<size_t>(k)]; ++ind) {
                std::vector<int> y = yk_sample(law, k, rng);
                for (int l = 0; l < L; ++l) next[static_cast<size_t>(l)] += y[static_cast<size_t>(l)];
            }
        }
        for (int v : next) total += v;
        if (total > cap)
            throw CapError("branching simulation: population " + std::to_string(total) +
                           " exceeded the cap " + std::to_string(cap));
        path.push_back(std::move(next));
    }
    return path;
}

std::map<std::vector<int>, double> finite_first_marginal(const VariableModelConfig& cfg,
                                                         std::span<const int> i_first) {
    const int K = cfg.num_types();
    const int L = K - 1;
    const int N = cfg.population_size();
    if (static_cast<int>(i_first.size()) != L)
        throw ValidationError("finite marginal: start vector must have length K-1");
    long long head = 0;
    for (int v : i_first) head += v;
    if (head > N) throw ValidationError("finite marginal: start vector exceeds the population size");

    std::vector<int> full(i_first.begin(), i_first.end());
    full.push_back(static_cast<int>(N - head));

    // children of the last type never leave it when u_KK = 1, so only the
    // first L block sums feed the first L coordinates
    if (std::fabs(cfg.u(K - 1, K - 1) - 1.0) > 1e-12)
        throw ValidationError("finite marginal: needs u_KK = 1");

    std::map<std::vector<int>, double> out;
    for (const auto& [d, prob] : offspring_block_sums(cfg, full)) {
        // thin each of the first L block sums through row k of U restricted
        // to the first L types plus the absorbing remainder
        std::map<std::vector<int>, double> dist;
        dist[std::vector<int>(static_cast<size_t>(L), 0)] = 1.0;
        for (int k = 0; k < L; ++k) {
            const int dk = d[static_cast<size_t>(k)];
            if (dk == 0) continue;
            std::map<std::vector<int>, double> thin;
            std::vector<int> m(static_cast<size_t>(L), 0);
            std::function<void(int, int, double)> rec = [&](int l, int left, double w) {
                if (l == L) {
                    double wk = w * std::pow(cfg.u(k, K - 1), static_cast<double>(left)) / factorial(left);
                    if (wk > 0.0) thin[m] += wk;
                    return;
                }
                for (int v = 0; v <= left; ++v) {
                    double ul = cfg.u(k, l);
                    if (v > 0 && ul == 0.0) break;
                    m[static_cast<size_t>(l)] = v;
                    rec(l + 1, left - v, w * std::pow(ul, static_cast<double>(v)) / factorial(v));
                    m[static_cast<size_t>(l)] = 0;
                }
            };
            rec(0, dk, factorial(dk));
            dist = convolve(dist, thin);
        }
        for (const auto& [v, p] : dist) out[v] += prob * p;
    }
    return out;
}

std::vector<GwDiagnosticRow> gw_convergence_table(const BranchingLaw& law,
                                                  const std::function<VariableModelConfig(int)>& family,
                                                  const std::vector<int>& n_grid,
                                                  std::span<const int> start) {
    law.validate();
    auto limit = branching_one_step_pmf(law, start);
    std::vector<GwDiagnosticRow> rows;
    for (int scale : n_grid) {
        VariableModelConfig cfg = family(scale);
        auto finite = finite_first_marginal(cfg, start);
        // union of supports
        std::map<std::vector<int>, std::pair<double, double>> joined;
        for (const auto& [v, p] : finite) joined[v].first = p;
        for (const auto& [v, p] : limit) joined[v].second = p;
        for (const auto& [v, pq] : joined)
            rows.push_back({scale, std::vector<int>(start.begin(), start.end()), v, pq.first, pq.second});
    }
    return rows;
}

double gw_total_variation(const BranchingLaw& law, const VariableModelConfig& cfg,
                          std::span<const int> start) {
    auto limit = branching_one_step_pmf(law, start);
    auto finite = finite_first_marginal(cfg, start);
    std::map<std::vector<int>, std::pair<double, double>> joined;
    for (const auto& [v, p] : finite) joined[v].first = p;
    for (const auto& [v, p] : limit) joined[v].second = p;
    double tv = 0.0;
    for (const auto& [v, pq] : joined) tv += std::fabs(pq.first - pq.second);
    return 0.5 * tv;
}

std::vector<GwFailureRow> gw_failure_diagnostic(const std::function<VariableModelConfig(int)>& family,
                                                const std::vector<int>& n_grid, std::span<const int> start) {
    std::vector<GwFailureRow> rows;
    for (int scale : n_grid) {
        VariableModelConfig cfg = family(scale);
        const int K = cfg.num_types();
        const int N = cfg.population_size();
        long long head = 0;
        for (int v : start) head += v;
        std::vector<int> full(start.begin(), start.end());
        full.push_back(static_cast<int>(N - head));
        // E[X_1(1)] = sum_k u_{k1} i_k for exchangeable reproduction
        double mean = 0.0;
        for (int k = 0; k < K; ++k) mean += cfg.u(k, 0) * full[static_cast<size_t>(k)];
        rows.push_back({scale, mean});
    }
    return rows;
}

}  // namespace cannings
