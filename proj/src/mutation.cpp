#include "cannings/mutation.hpp"

#include <cmath>
#include <string>

#include "cannings/combinatorics.hpp"
#include "cannings/errors.hpp"

namespace cannings {

MutationCountTable::MutationCountTable(std::vector<long long> subpop_sizes,
                                       std::vector<long long> counts_flat)
    : k_(static_cast<int>(subpop_sizes.size())), sizes_(std::move(subpop_sizes)), counts_(std::move(counts_flat)) {
    if (k_ < 1) throw ValidationError("mutation.counts: at least one type is required");
    if (counts_.size() != static_cast<size_t>(k_) * static_cast<size_t>(k_))
        throw ValidationError("mutation.counts: expected a " + std::to_string(k_) + "x" +
                              std::to_string(k_) + " table");
    for (int k = 0; k < k_; ++k)
        if (sizes_[static_cast<size_t>(k)] < 1)
            throw ValidationError("mutation.counts: subpopulation size of type " + std::to_string(k) +
                                  " must be positive");
    for (int k = 0; k < k_; ++k) {
        long long out = 0, in = 0;
        for (int l = 0; l < k_; ++l) {
            if (l == k) continue;
            long long v = counts_[static_cast<size_t>(k * k_ + l)];
            if (v < 0)
                throw ValidationError("mutation.counts: negative count at (" + std::to_string(k) + "," +
                                      std::to_string(l) + ")");
            out += v;
            in += counts_[static_cast<size_t>(l * k_ + k)];
        }
        if (out > sizes_[static_cast<size_t>(k)])
            throw ValidationError("mutation.counts: type " + std::to_string(k) +
                                  " sends out more children than its subpopulation size");
        if (out != in)
            throw ValidationError("mutation.counts: conservation fails for type " + std::to_string(k) +
                                  " (outflow " + std::to_string(out) + ", inflow " + std::to_string(in) + ")");
        counts_[static_cast<size_t>(k * k_ + k)] = sizes_[static_cast<size_t>(k)] - out;
    }
}

long long MutationCountTable::count(int k, int l) const {
    return counts_[static_cast<size_t>(k * k_ + l)];
}

double MutationCountTable::backward_rate(int k, int l) const {
    return static_cast<double>(count(l, k)) / static_cast<double>(sizes_[static_cast<size_t>(k)]);
}

double MutationCountTable::hypergeometric_pmf(int k, long long n_k, std::span<const long long> n) const {
    const long long nk_pop = sizes_[static_cast<size_t>(k)];
    if (n_k < 0 || n_k > nk_pop) return 0.0;
    long long mutants = 0;
    for (int l = 0; l < k_; ++l) {
        if (l == k) continue;
        if (n[static_cast<size_t>(l)] < 0) return 0.0;
        mutants += n[static_cast<size_t>(l)];
    }
    if (mutants > n_k) return 0.0;
    const long long n_kk = n_k - mutants;

    bool log_space = nk_pop > 60;
    if (!log_space) {
        double num = binom(count(k, k), n_kk);
        for (int l = 0; l < k_; ++l) {
            if (l == k) continue;
            num *= binom(count(k, l), n[static_cast<size_t>(l)]);
        }
        return num / binom(nk_pop, n_k);
    }
    double lg = log_binom(count(k, k), n_kk) - log_binom(nk_pop, n_k);
    for (int l = 0; l < k_; ++l) {
        if (l == k) continue;
        lg += log_binom(count(k, l), n[static_cast<size_t>(l)]);
    }
    return std::isfinite(lg) ? std::exp(lg) : 0.0;
}

bool MutationCountTable::has_mutation() const {
    for (int k = 0; k < k_; ++k)
        for (int l = 0; l < k_; ++l)
            if (k != l && count(k, l) != 0) return true;
    return false;
}

MutationMatrix MutationMatrix::identity(int k) {
    std::vector<double> u(static_cast<size_t>(k) * static_cast<size_t>(k), 0.0);
    for (int i = 0; i < k; ++i) u[static_cast<size_t>(i * k + i)] = 1.0;
    return MutationMatrix(k, std::move(u));
}

MutationMatrix::MutationMatrix(int k, std::vector<double> rows_flat) : k_(k), u_(std::move(rows_flat)) {
    if (k_ < 1) throw ValidationError("mutation.matrix: at least one type is required");
    if (u_.size() != static_cast<size_t>(k_) * static_cast<size_t>(k_))
        throw ValidationError("mutation.matrix: expected a " + std::to_string(k_) + "x" +
                              std::to_string(k_) + " matrix");
    for (int r = 0; r < k_; ++r) {
        double s = 0.0;
        for (int c = 0; c < k_; ++c) {
            double v = u_[static_cast<size_t>(r * k_ + c)];
            if (v < 0.0)
                throw ValidationError("mutation.matrix: negative entry in row " + std::to_string(r));
            s += v;
        }
        if (std::fabs(s - 1.0) > 1e-12)
            throw ValidationError("mutation.matrix: row " + std::to_string(r) + " sums to " +
                                  std::to_string(s) + ", expected 1 within 1e-12");
    }
}

bool MutationMatrix::is_identity() const {
    for (int r = 0; r < k_; ++r)
        for (int c = 0; c < k_; ++c)
            if ((*this)(r, c) != (r == c ? 1.0 : 0.0)) return false;
    return true;
}

double multinomial_mutation_pmf(const MutationMatrix& u, int k, long long i_k,
                                std::span<const long long> j) {
    long long total = 0;
    for (long long v : j) {
        if (v < 0) return 0.0;
        total += v;
    }
    if (total != i_k) return 0.0;
    double p = factorial(i_k);
    for (size_t l = 0; l < j.size(); ++l) {
        long long jl = j[l];
        double ul = u(k, static_cast<int>(l));
        if (jl > 0 && ul == 0.0) return 0.0;
        p *= std::pow(ul, static_cast<double>(jl)) / factorial(jl);
    }
    return p;
}

}  // namespace cannings
