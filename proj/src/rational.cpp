#include "cannings/rational.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

#include "cannings/combinatorics.hpp"
#include "cannings/errors.hpp"

namespace cannings {

Rational falling_rational(const BigInt& x, int n) {
    BigInt r = 1;
    for (int i = 0; i < n; ++i) r *= (x - i);
    return Rational(r);
}

Rational binom_rational(const BigInt& n, int k) {
    if (k < 0 || n < k) return Rational(0);
    BigInt num = 1, den = 1;
    for (int i = 1; i <= k; ++i) {
        num *= (n - k + i);
        den *= i;
    }
    return Rational(num, den);
}

Rational phi_rational(const OffspringLaw& law, std::span<const int> counts) {
    const int n = law.population_size();
    const int j = static_cast<int>(counts.size());
    long long k = 0;
    for (int v : counts) {
        if (v < 1) throw std::domain_error("phi: counts must be positive");
        k += v;
    }
    if (j > n || k > n) throw std::domain_error("phi: counts out of range");

    switch (law.kind()) {
        case OffspringKind::WrightFisher: {
            BigInt nk = 1;
            for (long long i = 0; i < k; ++i) nk *= n;
            return falling_rational(n, j) / Rational(nk);
        }
        case OffspringKind::Kimura: {
            Rational num = falling_rational(n, j);
            for (int v : counts) num *= falling_rational(law.kimura_c(), v);
            if (num == 0) return Rational(0);
            return num / falling_rational(BigInt(law.kimura_c()) * n, static_cast<int>(k));
        }
        case OffspringKind::Dirac: {
            for (int v : counts)
                if (v >= 2) return Rational(0);
            return Rational(1);
        }
        case OffspringKind::ExtremePermutation:
            return j == 1 ? Rational(1) : Rational(0);
        case OffspringKind::Table:
            throw std::domain_error("phi_rational: table laws have float probabilities");
    }
    return Rational(0);
}

std::vector<std::pair<std::vector<int>, Rational>> orbits_rational(const OffspringLaw& law) {
    const int n = law.population_size();
    std::vector<std::pair<std::vector<int>, Rational>> out;

    auto arrangements = [n](const std::vector<int>& parts) {
        std::vector<int> padded = parts;
        padded.resize(static_cast<size_t>(n), 0);
        BigInt arr = 1;
        for (int i = 2; i <= n; ++i) arr *= i;
        int run = 1;
        for (size_t i = 1; i <= padded.size(); ++i) {
            if (i < padded.size() && padded[i] == padded[i - 1]) {
                ++run;
            } else {
                BigInt rf = 1;
                for (int t = 2; t <= run; ++t) rf *= t;
                arr /= rf;
                run = 1;
            }
        }
        return arr;
    };

    switch (law.kind()) {
        case OffspringKind::Dirac:
            out.push_back({std::vector<int>(static_cast<size_t>(n), 1), Rational(1)});
            return out;
        case OffspringKind::ExtremePermutation:
            out.push_back({{n}, Rational(1)});
            return out;
        case OffspringKind::WrightFisher: {
            BigInt nn = 1;
            for (int i = 0; i < n; ++i) nn *= n;
            for (const auto& p : integer_partitions(n)) {
                if (static_cast<int>(p.size()) > n) continue;
                BigInt fact_n = 1;
                for (int i = 2; i <= n; ++i) fact_n *= i;
                BigInt denom = 1;
                for (int v : p)
                    for (int t = 2; t <= v; ++t) denom *= t;
                Rational placement = Rational(fact_n, denom) / Rational(nn);
                out.push_back({p, Rational(arrangements(p)) * placement});
            }
            return out;
        }
        case OffspringKind::Kimura: {
            const int c = law.kimura_c();
            Rational denom = binom_rational(BigInt(c) * n, n);
            for (const auto& p : integer_partitions(n)) {
                if (static_cast<int>(p.size()) > n) continue;
                bool feasible = true;
                for (int v : p)
                    if (v > c) feasible = false;
                if (!feasible) continue;
                std::vector<int> padded = p;
                padded.resize(static_cast<size_t>(n), 0);
                Rational one = 1;
                for (int v : padded) one *= binom_rational(c, v);
                out.push_back({p, Rational(arrangements(p)) * one / denom});
            }
            return out;
        }
        case OffspringKind::Table:
            throw std::domain_error("orbits_rational: table laws have float probabilities");
    }
    return out;
}

Rational phi_enumerated_rational(const OffspringLaw& law, std::span<const int> counts) {
    const int n = law.population_size();
    const int j = static_cast<int>(counts.size());
    long long k = 0;
    for (int v : counts) k += v;
    if (j > n || k > n) throw std::domain_error("phi: counts out of range");

    Rational moment = 0;
    for (const auto& [parts, prob] : orbits_rational(law)) {
        std::vector<std::pair<int, int>> classes;
        {
            int i = 0;
            while (i < static_cast<int>(parts.size())) {
                int v = parts[static_cast<size_t>(i)];
                int c = 0;
                while (i < static_cast<int>(parts.size()) && parts[static_cast<size_t>(i)] == v) {
                    ++c;
                    ++i;
                }
                classes.emplace_back(v, c);
            }
            int zeros = n - static_cast<int>(parts.size());
            if (zeros > 0) classes.emplace_back(0, zeros);
        }
        std::vector<int> avail(classes.size());
        for (size_t t = 0; t < classes.size(); ++t) avail[t] = classes[t].second;
        std::function<Rational(int)> rec = [&](int slot) -> Rational {
            if (slot == j) return Rational(1);
            Rational s = 0;
            for (size_t t = 0; t < classes.size(); ++t) {
                if (avail[t] == 0) continue;
                Rational f = falling_rational(classes[t].first, counts[static_cast<size_t>(slot)]);
                if (f == 0) continue;
                avail[t] -= 1;
                s += Rational(avail[t] + 1) * f * rec(slot + 1);
                avail[t] += 1;
            }
            return s;
        };
        moment += prob * rec(0) / falling_rational(n, j);
    }
    return falling_rational(n, j) / falling_rational(n, static_cast<int>(k)) * moment;
}

Rational variance_rational(const OffspringLaw& law) {
    const int n = law.population_size();
    // Var = E[(nu)_2] + E[nu] - E[nu]^2 with E[nu] = 1
    Rational e2 = 0;
    for (const auto& [parts, prob] : orbits_rational(law)) {
        Rational sum2 = 0;
        for (int v : parts) sum2 += falling_rational(v, 2);
        e2 += prob * sum2 / n;
    }
    return e2;  // + 1 - 1
}

}  // namespace cannings
