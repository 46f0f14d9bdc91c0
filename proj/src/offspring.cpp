#include "cannings/offspring.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "cannings/combinatorics.hpp"
#include "cannings/errors.hpp"

namespace cannings {

std::string kind_name(OffspringKind k) {
    switch (k) {
        case OffspringKind::WrightFisher: return "wright_fisher";
        case OffspringKind::Kimura: return "kimura";
        case OffspringKind::Dirac: return "dirac";
        case OffspringKind::ExtremePermutation: return "extreme_permutation";
        case OffspringKind::Table: return "table";
    }
    return "?";
}

OffspringLaw OffspringLaw::wright_fisher(int n) {
    if (n < 1) throw ValidationError("offspring: population size must be >= 1");
    return OffspringLaw(OffspringKind::WrightFisher, n, 0);
}

OffspringLaw OffspringLaw::kimura(int n, int c) {
    if (n < 1) throw ValidationError("offspring: population size must be >= 1");
    if (c < 1) throw ValidationError("offspring: kimura parameter c must be a positive integer");
    return OffspringLaw(OffspringKind::Kimura, n, c);
}

OffspringLaw OffspringLaw::dirac(int n) {
    if (n < 1) throw ValidationError("offspring: population size must be >= 1");
    return OffspringLaw(OffspringKind::Dirac, n, 0);
}

OffspringLaw OffspringLaw::extreme_permutation(int n) {
    if (n < 1) throw ValidationError("offspring: population size must be >= 1");
    return OffspringLaw(OffspringKind::ExtremePermutation, n, 0);
}

OffspringLaw OffspringLaw::table(int n, std::vector<std::pair<std::vector<int>, double>> rows) {
    if (n < 1) throw ValidationError("offspring: population size must be >= 1");
    OffspringLaw law(OffspringKind::Table, n, 0);
    std::map<std::vector<int>, double> merged;
    for (auto& [parts, prob] : rows) {
        if (prob < 0.0) throw ValidationError("offspring: table probability is negative");
        std::vector<int> p = parts;
        for (int v : p)
            if (v < 0) throw ValidationError("offspring: table composition has a negative part");
        std::sort(p.begin(), p.end(), std::greater<int>());
        while (!p.empty() && p.back() == 0) p.pop_back();
        long long total = std::accumulate(p.begin(), p.end(), 0LL);
        if (total != n)
            throw ValidationError("offspring: table composition does not sum to the population size");
        if (static_cast<int>(p.size()) > n)
            throw ValidationError("offspring: table composition has more than N parts");
        merged[p] += prob;
    }
    double mass = 0.0;
    for (auto& [p, prob] : merged) mass += prob;
    if (std::fabs(mass - 1.0) > 1e-9)
        throw ValidationError("offspring: table probabilities sum to " + std::to_string(mass) +
                              ", expected 1 within 1e-9");
    for (auto& [p, prob] : merged) law.rows_.push_back({p, prob});
    return law;
}

namespace {

void check_phi_domain(int n, std::span<const int> counts) {
    const int j = static_cast<int>(counts.size());
    if (j < 1) throw std::domain_error("phi: at least one count is required");
    if (j > n) throw std::domain_error("phi: more groups than individuals");
    long long k = 0;
    for (int v : counts) {
        if (v < 1) throw std::domain_error("phi: counts must be positive");
        k += v;
    }
    if (k > n) throw std::domain_error("phi: counts sum beyond the population size");
}

}  // namespace

double OffspringLaw::phi(std::span<const int> counts) const {
    check_phi_domain(n_, counts);
    const int j = static_cast<int>(counts.size());
    long long k = 0;
    for (int v : counts) k += v;
    const double dn = static_cast<double>(n_);

    switch (kind_) {
        case OffspringKind::WrightFisher:
            // (N)_j / N^k
            return falling(dn, j) / std::pow(dn, static_cast<double>(k));
        case OffspringKind::Kimura: {
            // (N)_j * prod (c)_{k_i} / (cN)_k
            double num = falling(dn, j);
            for (int v : counts) num *= falling(static_cast<double>(c_), v);
            if (num == 0.0) return 0.0;
            return num / falling(static_cast<double>(c_) * dn, k);
        }
        case OffspringKind::Dirac: {
            for (int v : counts)
                if (v >= 2) return 0.0;
            return 1.0;  // all counts are 1, k = j
        }
        case OffspringKind::ExtremePermutation: {
            // a single individual carries all N offspring
            if (j == 1) return 1.0;
            return 0.0;
        }
        case OffspringKind::Table:
            return phi_table(counts);
    }
    return 0.0;
}

double OffspringLaw::phi_table(std::span<const int> counts) const {
    const int j = static_cast<int>(counts.size());
    long long k = 0;
    for (int v : counts) k += v;

    std::vector<int> key(counts.begin(), counts.end());
    std::sort(key.begin(), key.end(), std::greater<int>());
    {
        std::lock_guard<std::mutex> lock(memo_->mu);
        auto it = memo_->vals.find(key);
        if (it != memo_->vals.end()) return it->second;
    }

    // E[(nu_1)_{k_1} ... (nu_j)_{k_j}] for an exchangeable law: average over
    // ordered assignments of the j slots to distinct coordinates of the orbit
    CompensatedSum moment;
    for (const auto& orbit : rows_) {
        // value classes of the padded composition (explicit zero class)
        std::vector<std::pair<int, int>> classes;  // (value, multiplicity)
        {
            int i = 0;
            const auto& p = orbit.parts;
            while (i < static_cast<int>(p.size())) {
                int v = p[static_cast<size_t>(i)];
                int c = 0;
                while (i < static_cast<int>(p.size()) && p[static_cast<size_t>(i)] == v) {
                    ++c;
                    ++i;
                }
                classes.emplace_back(v, c);
            }
            int zeros = n_ - static_cast<int>(p.size());
            if (zeros > 0) classes.emplace_back(0, zeros);
        }
        std::vector<int> avail(classes.size());
        for (size_t t = 0; t < classes.size(); ++t) avail[t] = classes[t].second;

        // sum over ordered choices of distinct coordinates, slot by slot
        std::function<double(int)> rec = [&](int slot) -> double {
            if (slot == j) return 1.0;
            double s = 0.0;
            for (size_t t = 0; t < classes.size(); ++t) {
                if (avail[t] == 0) continue;
                double f = falling(static_cast<double>(classes[t].first), key[static_cast<size_t>(slot)]);
                if (f == 0.0) continue;
                avail[t] -= 1;
                s += static_cast<double>(avail[t] + 1) * f * rec(slot + 1);
                avail[t] += 1;
            }
            return s;
        };
        moment.add(orbit.prob * rec(0) / falling(static_cast<double>(n_), j));
    }

    double result = falling(static_cast<double>(n_), j) / falling(static_cast<double>(n_), k) * moment.value();
    {
        std::lock_guard<std::mutex> lock(memo_->mu);
        memo_->vals[key] = result;
    }
    return result;
}

double OffspringLaw::coalescence_probability() const {
    if (n_ < 2) throw std::domain_error("coalescence probability needs N >= 2");
    const int two[1] = {2};
    return phi(two);
}

double OffspringLaw::consistency_residual(std::span<const int> counts) const {
    long long k = 0;
    for (int v : counts) k += v;
    if (k >= n_) throw std::domain_error("consistency residual needs sum of counts < N");
    double lhs = phi(counts);
    std::vector<int> ext(counts.begin(), counts.end());
    ext.push_back(1);
    double rhs = phi(ext);
    std::vector<int> bumped(counts.begin(), counts.end());
    for (size_t i = 0; i < bumped.size(); ++i) {
        bumped[i] += 1;
        rhs += phi(bumped);
        bumped[i] -= 1;
    }
    return lhs - rhs;
}

std::vector<int> OffspringLaw::sample(RngStream& rng) const {
    std::vector<int> out(static_cast<size_t>(n_), 0);
    switch (kind_) {
        case OffspringKind::WrightFisher: {
            // symmetric multinomial via sequential binomials
            int left = n_;
            for (int i = 0; i < n_ - 1 && left > 0; ++i) {
                int64_t v = rng.binomial(left, 1.0 / static_cast<double>(n_ - i));
                out[static_cast<size_t>(i)] = static_cast<int>(v);
                left -= static_cast<int>(v);
            }
            out[static_cast<size_t>(n_ - 1)] += left;
            return out;
        }
        case OffspringKind::Kimura: {
            // draw N of the cN gamete slots without replacement, c per parent
            std::vector<int> taken(static_cast<size_t>(n_), 0);
            int64_t pool = static_cast<int64_t>(c_) * n_;
            for (int d = 0; d < n_; ++d) {
                int64_t r = rng.uniform_int(pool);
                for (int p = 0; p < n_; ++p) {
                    int64_t free_here = c_ - taken[static_cast<size_t>(p)];
                    if (r < free_here) {
                        taken[static_cast<size_t>(p)] += 1;
                        out[static_cast<size_t>(p)] += 1;
                        break;
                    }
                    r -= free_here;
                }
                pool -= 1;
            }
            return out;
        }
        case OffspringKind::Dirac:
            std::fill(out.begin(), out.end(), 1);
            return out;
        case OffspringKind::ExtremePermutation:
            out[static_cast<size_t>(rng.uniform_int(n_))] = n_;
            return out;
        case OffspringKind::Table: {
            std::vector<double> w(rows_.size());
            for (size_t i = 0; i < rows_.size(); ++i) w[i] = rows_[i].prob;
            const auto& parts = rows_[rng.discrete(w)].parts;
            std::copy(parts.begin(), parts.end(), out.begin());
            rng.shuffle(out);
            return out;
        }
    }
    return out;
}

std::vector<OffspringOrbit> OffspringLaw::orbits() const {
    if (kind_ == OffspringKind::Table) return rows_;
    std::vector<OffspringOrbit> out;
    switch (kind_) {
        case OffspringKind::Dirac:
            out.push_back({std::vector<int>(static_cast<size_t>(n_), 1), 1.0});
            break;
        case OffspringKind::ExtremePermutation:
            out.push_back({{n_}, 1.0});
            break;
        case OffspringKind::WrightFisher: {
            for (const auto& p : integer_partitions(n_)) {
                if (static_cast<int>(p.size()) > n_) continue;
                // orbit mass = #arrangements * multinomial placement probability
                std::vector<int> padded = p;
                padded.resize(static_cast<size_t>(n_), 0);
                double arrangements = factorial(n_);
                int run = 1;
                for (size_t i = 1; i <= padded.size(); ++i) {
                    if (i < padded.size() && padded[i] == padded[i - 1]) {
                        ++run;
                    } else {
                        arrangements /= factorial(run);
                        run = 1;
                    }
                }
                double placement = factorial(n_);
                for (int v : p) placement /= factorial(v);
                placement /= std::pow(static_cast<double>(n_), n_);
                out.push_back({p, arrangements * placement});
            }
            break;
        }
        case OffspringKind::Kimura: {
            const double denom = binom(static_cast<int64_t>(c_) * n_, n_);
            for (const auto& p : integer_partitions(n_)) {
                if (static_cast<int>(p.size()) > n_) continue;
                bool feasible = true;
                for (int v : p)
                    if (v > c_) feasible = false;
                if (!feasible) continue;
                std::vector<int> padded = p;
                padded.resize(static_cast<size_t>(n_), 0);
                double arrangements = factorial(n_);
                int run = 1;
                for (size_t i = 1; i <= padded.size(); ++i) {
                    if (i < padded.size() && padded[i] == padded[i - 1]) {
                        ++run;
                    } else {
                        arrangements /= factorial(run);
                        run = 1;
                    }
                }
                double one = 1.0;
                for (int v : padded) one *= binom(c_, v);
                out.push_back({p, arrangements * one / denom});
            }
            break;
        }
        case OffspringKind::Table:
            break;
    }
    return out;
}

OffspringLaw OffspringLaw::to_table() const {
    if (kind_ == OffspringKind::Table) return *this;
    std::vector<std::pair<std::vector<int>, double>> rows;
    for (const auto& o : orbits()) rows.emplace_back(o.parts, o.prob);
    return table(n_, std::move(rows));
}

// ---- limiting single-offspring law ----

double LimitOffspringLaw::pmf(int m) const {
    if (m < 0) return 0.0;
    switch (kind_) {
        case Kind::PoissonOne: {
            double lf = 0.0;
            for (int i = 2; i <= m; ++i) lf += std::log(static_cast<double>(i));
            return std::exp(-1.0 - lf);
        }
        case Kind::Binomial:
            if (m > c_) return 0.0;
            return binom(c_, m) * std::pow(1.0 / c_, m) * std::pow(1.0 - 1.0 / c_, c_ - m);
        case Kind::DiracOne:
            return m == 1 ? 1.0 : 0.0;
        case Kind::DiracZero:
            return m == 0 ? 1.0 : 0.0;
    }
    return 0.0;
}

double LimitOffspringLaw::mean() const {
    switch (kind_) {
        case Kind::PoissonOne: return 1.0;
        case Kind::Binomial: return 1.0;
        case Kind::DiracOne: return 1.0;
        case Kind::DiracZero: return 0.0;
    }
    return 0.0;
}

double LimitOffspringLaw::factorial_moment(int n) const {
    if (n == 0) return 1.0;
    switch (kind_) {
        case Kind::PoissonOne:
            return 1.0;  // E[(xi)_n] = lambda^n with lambda = 1
        case Kind::Binomial:
            return falling(static_cast<double>(c_), n) * std::pow(1.0 / c_, n);
        case Kind::DiracOne:
            return n <= 1 ? 1.0 : 0.0;
        case Kind::DiracZero:
            return 0.0;
    }
    return 0.0;
}

double LimitOffspringLaw::weighted_factorial_moment(int n, double x) const {
    switch (kind_) {
        case Kind::PoissonOne:
            // sum_{m>=n} (m)_n x^(m-n) e^{-1}/m! = e^{x-1}
            return std::exp(x - 1.0);
        case Kind::Binomial: {
            if (n > c_) return 0.0;
            return falling(static_cast<double>(c_), n) * std::pow(1.0 / c_, n) *
                   std::pow(1.0 - (1.0 - x) / c_, c_ - n);
        }
        case Kind::DiracOne:
            if (n == 0) return x;
            if (n == 1) return 1.0;
            return 0.0;
        case Kind::DiracZero:
            return n == 0 ? 1.0 : 0.0;  // x^0 = 1, also at x = 0
    }
    return 0.0;
}

int LimitOffspringLaw::truncated_support(double tail) const {
    switch (kind_) {
        case Kind::PoissonOne: {
            double cum = 0.0;
            for (int m = 0; m < 200; ++m) {
                cum += pmf(m);
                if (1.0 - cum < tail) return m;
            }
            return 200;
        }
        case Kind::Binomial: return c_;
        case Kind::DiracOne: return 1;
        case Kind::DiracZero: return 0;
    }
    return 0;
}

int LimitOffspringLaw::sample(RngStream& rng) const {
    switch (kind_) {
        case Kind::PoissonOne: return static_cast<int>(rng.poisson(1.0));
        case Kind::Binomial: return static_cast<int>(rng.binomial(c_, 1.0 / c_));
        case Kind::DiracOne: return 1;
        case Kind::DiracZero: return 0;
    }
    return 0;
}

LimitOffspringLaw limit_law(OffspringKind kind, int c) {
    switch (kind) {
        case OffspringKind::WrightFisher: return LimitOffspringLaw::poisson_one();
        case OffspringKind::Kimura:
            if (c < 1) throw ValidationError("limit law: kimura parameter c must be >= 1");
            return LimitOffspringLaw::binomial(c);
        case OffspringKind::Dirac: return LimitOffspringLaw::dirac_one();
        case OffspringKind::ExtremePermutation: return LimitOffspringLaw::dirac_zero();
        case OffspringKind::Table:
            throw ValidationError("limit law: a table law has no large-population family");
    }
    throw ValidationError("limit law: unknown offspring kind");
}

}  // namespace cannings
