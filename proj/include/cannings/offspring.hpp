#ifndef CANNINGS_OFFSPRING_HPP
#define CANNINGS_OFFSPRING_HPP

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "cannings/rng.hpp"

namespace cannings {

enum class OffspringKind { WrightFisher, Kimura, Dirac, ExtremePermutation, Table };

std::string kind_name(OffspringKind k);

// One exchangeability orbit of an offspring outcome: parts sorted in
// non-increasing order (zeros stripped), with the total orbit probability.
struct OffspringOrbit {
    std::vector<int> parts;
    double prob;
};

// Exchangeable law of (nu_1, ..., nu_N) with sum N. Immutable after
// construction; the memo used by the table-law moment kernel is mutex
// guarded so concurrent reads stay safe.
class OffspringLaw {
  public:
    static OffspringLaw wright_fisher(int n);
    static OffspringLaw kimura(int n, int c);
    static OffspringLaw dirac(int n);
    static OffspringLaw extreme_permutation(int n);
    // rows are (composition of N, probability); compositions are sorted and
    // duplicates merged, probabilities must sum to 1 within 1e-9
    static OffspringLaw table(int n, std::vector<std::pair<std::vector<int>, double>> rows);

    OffspringKind kind() const { return kind_; }
    int population_size() const { return n_; }
    int kimura_c() const { return c_; }

    // scaled joint descending factorial moment
    //   (N)_j / (N)_k * E[(nu_1)_{k_1} ... (nu_j)_{k_j}],  k = sum k_i
    // requires j <= N and k <= N, all k_i >= 1
    double phi(std::span<const int> counts) const;

    // pair coalescence probability Phi_1(2) = Var(nu_1)/(N-1); requires N >= 2
    double coalescence_probability() const;

    // Phi_j(k) - Phi_{j+1}(k,1) - sum_i Phi_j(..., k_i+1, ...); requires sum k_i < N
    double consistency_residual(std::span<const int> counts) const;

    // one draw of the full offspring vector (N entries summing to N)
    std::vector<int> sample(RngStream& rng) const;

    // the same law represented by its exchangeability orbits; exact closed
    // forms feed the probabilities for the parametric kinds
    std::vector<OffspringOrbit> orbits() const;

    // law of the same kind converted to an explicit table (independent
    // evaluation path for the closed-form moments)
    OffspringLaw to_table() const;

  private:
    struct MomentMemo {
        std::mutex mu;
        std::map<std::vector<int>, double> vals;
    };

    OffspringLaw(OffspringKind kind, int n, int c)
        : kind_(kind), n_(n), c_(c), memo_(std::make_shared<MomentMemo>()) {}

    double phi_table(std::span<const int> counts) const;

    OffspringKind kind_;
    int n_ = 0;
    int c_ = 0;  // Kimura parameter
    std::vector<OffspringOrbit> rows_;
    std::shared_ptr<MomentMemo> memo_;  // shared by copies of the same law
};

// Limit of nu_1 as N grows for the parametric families.
class LimitOffspringLaw {
  public:
    enum class Kind { PoissonOne, Binomial, DiracOne, DiracZero };

    static LimitOffspringLaw poisson_one() { return LimitOffspringLaw(Kind::PoissonOne, 0); }
    static LimitOffspringLaw binomial(int c) { return LimitOffspringLaw(Kind::Binomial, c); }
    static LimitOffspringLaw dirac_one() { return LimitOffspringLaw(Kind::DiracOne, 0); }
    static LimitOffspringLaw dirac_zero() { return LimitOffspringLaw(Kind::DiracZero, 0); }

    Kind kind() const { return kind_; }
    double pmf(int m) const;
    double mean() const;
    // E[(xi)_n]
    double factorial_moment(int n) const;
    // E[(xi)_n x^(xi-n)], the thinning kernel of the branching limit
    double weighted_factorial_moment(int n, double x) const;
    // smallest m with P(xi > m) < tail
    int truncated_support(double tail = 1e-14) const;
    int sample(RngStream& rng) const;

  private:
    LimitOffspringLaw(Kind kind, int c) : kind_(kind), c_(c) {}
    Kind kind_;
    int c_;
};

// limiting single-offspring law of the family; Table has no such family
LimitOffspringLaw limit_law(OffspringKind kind, int c = 0);

}  // namespace cannings

#endif
