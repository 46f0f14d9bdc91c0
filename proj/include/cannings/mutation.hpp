#ifndef CANNINGS_MUTATION_HPP
#define CANNINGS_MUTATION_HPP

#include <span>
#include <vector>

namespace cannings {

// Integer mutation flows between subpopulations of fixed sizes. counts(k,l)
// for k != l is the number of children born in subpopulation k that mutate
// to type l; the diagonal is derived. Conservation (outflow == inflow per
// type) is required so the subpopulation sizes stay constant.
class MutationCountTable {
  public:
    MutationCountTable(std::vector<long long> subpop_sizes, std::vector<long long> counts_flat);

    int num_types() const { return k_; }
    long long subpop_size(int k) const { return sizes_[static_cast<size_t>(k)]; }
    long long count(int k, int l) const;  // diagonal returns the derived stay count

    // m_{kl} = N_{lk} / N_k, the fraction of post-mutation type-k individuals
    // born in subpopulation l; rows sum to 1
    double backward_rate(int k, int l) const;

    // probability that a size-n_k sample of the type-k children contains
    // n[l] mutants to type l for each l != k (n[k] is derived);
    // out-of-range counts give probability 0
    double hypergeometric_pmf(int k, long long n_k, std::span<const long long> n) const;

    bool has_mutation() const;

  private:
    int k_ = 0;
    std::vector<long long> sizes_;
    std::vector<long long> counts_;  // row-major K x K, diagonal stores the stay count
};

// Row-stochastic forward mutation matrix.
class MutationMatrix {
  public:
    static MutationMatrix identity(int k);
    MutationMatrix(int k, std::vector<double> rows_flat);

    int num_types() const { return k_; }
    double operator()(int k, int l) const { return u_[static_cast<size_t>(k * k_ + l)]; }
    bool is_identity() const;

  private:
    int k_;
    std::vector<double> u_;
};

// i_k! * prod_l u_{kl}^{j_l} / j_l!; zero unless sum j = i_k and j >= 0
double multinomial_mutation_pmf(const MutationMatrix& u, int k, long long i_k,
                                std::span<const long long> j);

}  // namespace cannings

#endif
