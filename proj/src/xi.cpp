#include "cannings/xi.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "cannings/combinatorics.hpp"
#include "cannings/errors.hpp"

namespace cannings {

void XiMeasure::validate() const {
    if (kingman_mass < 0.0) throw ValidationError("xi: kingman mass must be >= 0");
    for (size_t a = 0; a < atoms.size(); ++a) {
        const auto& atom = atoms[a];
        if (atom.weight <= 0.0)
            throw ValidationError("xi.atoms[" + std::to_string(a) + "]: weight must be > 0");
        if (atom.x.empty())
            throw ValidationError("xi.atoms[" + std::to_string(a) + "]: empty simplex point");
        double sum = 0.0, sumsq = 0.0;
        for (size_t i = 0; i < atom.x.size(); ++i) {
            double v = atom.x[i];
            if (v <= 0.0)
                throw ValidationError("xi.atoms[" + std::to_string(a) + "]: entries must be positive");
            if (i > 0 && v > atom.x[i - 1] + 1e-15)
                throw ValidationError("xi.atoms[" + std::to_string(a) + "]: entries must be non-increasing");
            sum += v;
            sumsq += v * v;
        }
        if (sum > 1.0 + 1e-12)
            throw ValidationError("xi.atoms[" + std::to_string(a) + "]: entries sum beyond 1");
        if (sumsq <= 0.0)
            throw ValidationError("xi.atoms[" + std::to_string(a) + "]: (x,x) must be positive");
    }
}

double xi_rate(const XiMeasure& m, std::span<const int> counts) {
    const int j = static_cast<int>(counts.size());
    if (j < 1) throw std::domain_error("xi rate: at least one count is required");
    for (int v : counts)
        if (v < 2) throw std::domain_error("xi rate: counts must be >= 2 (see the extended rate)");

    double rate = 0.0;
    if (j == 1 && counts[0] == 2) rate += m.kingman_mass;

    for (const auto& atom : m.atoms) {
        const int s = static_cast<int>(atom.x.size());
        if (j > s) continue;
        double sumsq = 0.0;
        for (double v : atom.x) sumsq += v * v;
        // ordered tuples of distinct support indices
        std::vector<bool> used(static_cast<size_t>(s), false);
        std::function<double(int)> rec = [&](int slot) -> double {
            if (slot == j) return 1.0;
            double acc = 0.0;
            for (int idx = 0; idx < s; ++idx) {
                if (used[static_cast<size_t>(idx)]) continue;
                used[static_cast<size_t>(idx)] = true;
                acc += std::pow(atom.x[static_cast<size_t>(idx)],
                                static_cast<double>(counts[static_cast<size_t>(slot)])) *
                       rec(slot + 1);
                used[static_cast<size_t>(idx)] = false;
            }
            return acc;
        };
        rate += atom.weight / sumsq * rec(0);
    }
    return rate;
}

namespace {

double extended_impl(const XiMeasure& m, std::vector<int>& counts);

// total rate of leaving a state of j exchangeable lineages: sum over all
// non-trivial merge configurations, counted as set partitions of the lineages
double total_outflow(const XiMeasure& m, int j) {
    if (j <= 1) return 0.0;
    double total = 0.0;
    for (const auto& part : integer_partitions(j)) {
        if (static_cast<int>(part.size()) == j) continue;  // all singletons
        // number of set partitions with these block sizes
        double ways = factorial(j);
        for (int v : part) ways /= factorial(v);
        int run = 1;
        for (size_t i = 1; i <= part.size(); ++i) {
            if (i < part.size() && part[i] == part[i - 1]) {
                ++run;
            } else {
                ways /= factorial(run);
                run = 1;
            }
        }
        std::vector<int> sizes = part;
        total += ways * extended_impl(m, sizes);
    }
    return total;
}

double extended_impl(const XiMeasure& m, std::vector<int>& counts) {
    const int j = static_cast<int>(counts.size());
    int ones = 0;
    long long total = 0;
    for (int v : counts) {
        if (v == 1) ++ones;
        total += v;
    }
    if (ones == 0) return xi_rate(m, counts);
    if (ones == j) return -total_outflow(m, j);
    if (total <= j) throw std::domain_error("xi rate: counts must describe a merger or be all ones");

    // peel one singleton off via the consistency relation
    std::vector<int> rest;
    rest.reserve(static_cast<size_t>(j - 1));
    bool peeled = false;
    for (int v : counts) {
        if (!peeled && v == 1) {
            peeled = true;
            continue;
        }
        rest.push_back(v);
    }
    double value = extended_impl(m, rest);
    for (size_t i = 0; i < rest.size(); ++i) {
        rest[i] += 1;
        value -= extended_impl(m, rest);
        rest[i] -= 1;
    }
    return value;
}

}  // namespace

double xi_rate_extended(const XiMeasure& m, std::span<const int> counts) {
    std::vector<int> c(counts.begin(), counts.end());
    for (int v : c)
        if (v < 1) throw std::domain_error("xi rate: counts must be positive");
    if (c.empty()) return 0.0;
    return extended_impl(m, c);
}

double xi_consistency_residual(const XiMeasure& m, std::span<const int> counts) {
    std::vector<int> c(counts.begin(), counts.end());
    double lhs = xi_rate_extended(m, c);
    c.push_back(1);
    double rhs = xi_rate_extended(m, c);
    c.pop_back();
    for (size_t i = 0; i < c.size(); ++i) {
        c[i] += 1;
        rhs += xi_rate_extended(m, c);
        c[i] -= 1;
    }
    return lhs - rhs;
}

}  // namespace cannings
