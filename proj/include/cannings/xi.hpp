#ifndef CANNINGS_XI_HPP
#define CANNINGS_XI_HPP

#include <span>
#include <vector>

namespace cannings {

// Finite-atom coalescent driving measure: Kingman mass at the origin plus
// finitely many weighted simplex points with finite support.
struct XiMeasure {
    struct Atom {
        std::vector<double> x;  // non-increasing, positive, sum <= 1
        double weight = 0.0;
    };

    double kingman_mass = 0.0;
    std::vector<Atom> atoms;

    void validate() const;

    static XiMeasure kingman(double mass = 1.0) {
        XiMeasure m;
        m.kingman_mass = mass;
        return m;
    }
};

// merger rate for group sizes all >= 2:
//   a * 1{j=1, i_1=2} + sum_atoms w/(x,x) * sum over distinct indices of
//   x_{m_1}^{i_1} ... x_{m_j}^{i_j}
double xi_rate(const XiMeasure& m, std::span<const int> counts);

// rates for count vectors containing 1's, extended through the consistency
// recursion; an all-ones vector gives the (negative) total merger rate out
// of that many lineages
double xi_rate_extended(const XiMeasure& m, std::span<const int> counts);

// left side minus right side of the consistency relation at the limit
double xi_consistency_residual(const XiMeasure& m, std::span<const int> counts);

}  // namespace cannings

#endif
