#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "cannings/combinatorics.hpp"
#include "cannings/errors.hpp"
#include "cannings/offspring.hpp"
#include "cannings/rational.hpp"

using namespace cannings;

namespace {

double phi_of(const OffspringLaw& law, std::initializer_list<int> counts) {
    std::vector<int> c(counts);
    return law.phi(c);
}

// joint pmf of the first coordinates from the orbit representation
double joint_pmf(const OffspringLaw& law, const std::vector<int>& values) {
    const int n = law.population_size();
    const int j = static_cast<int>(values.size());
    double total = 0.0;
    for (const auto& orbit : law.orbits()) {
        std::vector<int> padded = orbit.parts;
        padded.resize(static_cast<size_t>(n), 0);
        // ordered selections of distinct positions matching `values`
        std::map<int, int> avail;
        for (int v : padded) avail[v] += 1;
        double ways = 1.0;
        bool ok = true;
        for (int v : values) {
            auto it = avail.find(v);
            if (it == avail.end() || it->second == 0) {
                ok = false;
                break;
            }
            ways *= it->second;
            it->second -= 1;
        }
        if (ok) total += orbit.prob * ways / falling(n, j);
    }
    return total;
}

bool within_three_sigma(long long hits, long long total, double p) {
    double emp = static_cast<double>(hits) / static_cast<double>(total);
    double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(total));
    return std::fabs(emp - p) <= 3.0 * sigma;
}

}  // namespace

TEST_CASE("phi closed forms at pinned values") {
    CHECK(phi_of(OffspringLaw::wright_fisher(3), {2}) == doctest::Approx(1.0 / 3).epsilon(1e-14));
    CHECK(phi_of(OffspringLaw::dirac(5), {2}) == 0.0);
    CHECK(phi_of(OffspringLaw::kimura(2, 2), {2}) == doctest::Approx(1.0 / 3).epsilon(1e-14));
    // the pair rate of the kimura family is (c-1)/(cN-1)
    for (int c = 2; c <= 4; ++c)
        for (int n = 2; n <= 6; ++n)
            CHECK(phi_of(OffspringLaw::kimura(n, c), {2}) ==
                  doctest::Approx(static_cast<double>(c - 1) / (c * n - 1)).epsilon(1e-13));
    CHECK(phi_of(OffspringLaw::wright_fisher(5), {1}) == 1.0);
}

TEST_CASE("phi rejects out-of-range counts") {
    OffspringLaw law = OffspringLaw::wright_fisher(3);
    std::vector<int> too_many{1, 1, 1, 1};
    CHECK_THROWS_AS(law.phi(too_many), std::domain_error);
    std::vector<int> too_big{4};
    CHECK_THROWS_AS(law.phi(too_big), std::domain_error);
    std::vector<int> nonpositive{0};
    CHECK_THROWS_AS(law.phi(nonpositive), std::domain_error);
}

TEST_CASE("closed forms agree with the orbit-enumeration oracle") {
    for (int n = 2; n <= 8; ++n) {
        std::vector<OffspringLaw> laws{OffspringLaw::wright_fisher(n), OffspringLaw::kimura(n, 2),
                                       OffspringLaw::kimura(n, 3), OffspringLaw::dirac(n),
                                       OffspringLaw::extreme_permutation(n)};
        for (const auto& law : laws) {
            OffspringLaw table = law.to_table();
            // all ordered count vectors with sum <= n
            std::vector<std::vector<int>> stack{{}};
            while (!stack.empty()) {
                std::vector<int> cur = stack.back();
                stack.pop_back();
                if (!cur.empty()) {
                    CHECK(law.phi(cur) == doctest::Approx(table.phi(cur)).epsilon(1e-10));
                }
                int used = 0;
                for (int v : cur) used += v;
                if (static_cast<int>(cur.size()) < n) {
                    for (int next = 1; next + used <= n; ++next) {
                        std::vector<int> ext = cur;
                        ext.push_back(next);
                        stack.push_back(ext);
                    }
                }
            }
        }
    }
}

TEST_CASE("coalescence probability") {
    CHECK(OffspringLaw::wright_fisher(2).coalescence_probability() == 0.5);
    CHECK(OffspringLaw::dirac(7).coalescence_probability() == 0.0);
    CHECK(OffspringLaw::extreme_permutation(5).coalescence_probability() == 1.0);
    CHECK_THROWS_AS(OffspringLaw::wright_fisher(1).coalescence_probability(), std::domain_error);
    // equals phi(2) by definition
    for (int n = 2; n <= 6; ++n) {
        OffspringLaw law = OffspringLaw::kimura(n, 3);
        CHECK(law.coalescence_probability() == phi_of(law, {2}));
    }
}

TEST_CASE("consistency residuals vanish") {
    std::vector<int> single{2};
    CHECK(std::fabs(OffspringLaw::wright_fisher(5).consistency_residual(single)) < 1e-12);
    std::vector<int> pair_ones{1, 1};
    CHECK(OffspringLaw::dirac(4).consistency_residual(pair_ones) == 0.0);
    std::vector<int> pair_twos{2, 2};
    CHECK(std::fabs(OffspringLaw::kimura(6, 3).consistency_residual(pair_twos)) < 1e-10);
}

TEST_CASE("monotonicity of the moment functions") {
    // phi_j(k) <= phi_l(m) when l <= j and k dominates m componentwise
    for (int n = 2; n <= 6; ++n) {
        std::vector<OffspringLaw> laws{OffspringLaw::wright_fisher(n), OffspringLaw::kimura(n, 2)};
        for (const auto& law : laws) {
            std::vector<std::vector<int>> vectors;
            std::vector<std::vector<int>> stack{{}};
            while (!stack.empty()) {
                std::vector<int> cur = stack.back();
                stack.pop_back();
                if (!cur.empty()) vectors.push_back(cur);
                int used = 0;
                for (int v : cur) used += v;
                if (static_cast<int>(cur.size()) < n)
                    for (int next = 1; next + used <= n; ++next) {
                        std::vector<int> ext = cur;
                        ext.push_back(next);
                        stack.push_back(ext);
                    }
            }
            for (const auto& big : vectors)
                for (const auto& small : vectors) {
                    if (small.size() > big.size()) continue;
                    bool dominated = true;
                    for (size_t t = 0; t < small.size(); ++t)
                        if (big[t] < small[t]) dominated = false;
                    if (!dominated) continue;
                    CHECK(law.phi(big) <= law.phi(small) + 1e-12);
                }
        }
    }
}

TEST_CASE("table law validation and exchangeability") {
    CHECK_THROWS_AS(OffspringLaw::table(4, {{{3, 1}, 0.5}}), ValidationError);           // mass 0.5
    CHECK_THROWS_AS(OffspringLaw::table(4, {{{3, 2}, 1.0}}), ValidationError);           // sums to 5
    CHECK_THROWS_AS(OffspringLaw::table(4, {{{3, 1}, -1.0}, {{4}, 2.0}}), ValidationError);

    OffspringLaw law = OffspringLaw::table(4, {{{2, 1, 1}, 0.25}, {{4}, 0.25}, {{2, 2}, 0.5}});
    // joint pmf symmetric in its arguments
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; a + b <= 4; ++b)
            CHECK(joint_pmf(law, {a, b}) == doctest::Approx(joint_pmf(law, {b, a})).epsilon(1e-12));
    // sums to one over pairs
    double total = 0.0;
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; b <= 4; ++b) total += joint_pmf(law, {a, b});
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    // duplicate orbit rows merge
    OffspringLaw merged = OffspringLaw::table(3, {{{1, 1, 1}, 0.5}, {{1, 1, 1}, 0.5}});
    CHECK(merged.orbits().size() == 1);
}

TEST_CASE("sampling support and marginals") {
    RngStream rng = RngStream::derive(7, "offspring-tests");

    std::vector<int> dirac = OffspringLaw::dirac(4).sample(rng);
    CHECK(dirac == std::vector<int>{1, 1, 1, 1});

    for (int rep = 0; rep < 50; ++rep) {
        std::vector<int> ep = OffspringLaw::extreme_permutation(3).sample(rng);
        int nonzero = 0, total = 0;
        for (int v : ep) {
            if (v != 0) ++nonzero;
            total += v;
        }
        CHECK(total == 3);
        CHECK(nonzero == 1);
    }

    // nu_1 of the symmetric multinomial is Binomial(N, 1/N)
    OffspringLaw wf = OffspringLaw::wright_fisher(6);
    const long long reps = 100000;
    std::vector<long long> hits(7, 0);
    for (long long rep = 0; rep < reps; ++rep) {
        std::vector<int> nu = wf.sample(rng);
        long long sum = 0;
        for (int v : nu) sum += v;
        REQUIRE(sum == 6);
        hits[static_cast<size_t>(nu[0])] += 1;
    }
    for (int m = 0; m <= 6; ++m) {
        double p = binom(6, m) * std::pow(1.0 / 6, m) * std::pow(5.0 / 6, 6 - m);
        CHECK(within_three_sigma(hits[static_cast<size_t>(m)], reps, p));
    }

    // kimura sampling stays on multisets of binomial(c, .) support and keeps the total
    OffspringLaw km = OffspringLaw::kimura(5, 2);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<int> nu = km.sample(rng);
        int total = 0;
        for (int v : nu) {
            CHECK(v <= 2);
            total += v;
        }
        CHECK(total == 5);
    }
}

TEST_CASE("limit laws of the parametric families") {
    LimitOffspringLaw wf = limit_law(OffspringKind::WrightFisher);
    CHECK(wf.pmf(0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(wf.pmf(3) == doctest::Approx(std::exp(-1.0) / 6.0).epsilon(1e-14));
    CHECK(wf.mean() == 1.0);
    CHECK(wf.factorial_moment(4) == 1.0);

    LimitOffspringLaw km = limit_law(OffspringKind::Kimura, 2);
    CHECK(km.pmf(0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(km.pmf(1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(km.pmf(2) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(km.factorial_moment(2) == doctest::Approx(0.5).epsilon(1e-14));

    CHECK(limit_law(OffspringKind::Dirac).pmf(1) == 1.0);
    CHECK(limit_law(OffspringKind::ExtremePermutation).pmf(0) == 1.0);
    CHECK_THROWS_AS(limit_law(OffspringKind::Table), ValidationError);

    // pmf sums to one and the mean stays at or below one
    for (const auto& law : {wf, km, limit_law(OffspringKind::Dirac), limit_law(OffspringKind::ExtremePermutation)}) {
        double total = 0.0, mean = 0.0;
        for (int m = 0; m <= law.truncated_support(1e-16); ++m) {
            total += law.pmf(m);
            mean += m * law.pmf(m);
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(mean <= 1.0 + 1e-12);
    }

    // weighted factorial moments against direct truncated sums
    for (double x : {0.0, 0.3, 1.0}) {
        for (int n = 0; n <= 3; ++n) {
            for (const auto& law : {wf, km}) {
                double direct = 0.0;
                for (int m = n; m <= law.truncated_support(1e-16) + 5; ++m)
                    direct += falling(m, n) * std::pow(x, static_cast<double>(m - n)) * law.pmf(m);
                if (x == 0.0) direct = factorial(n) * law.pmf(n);  // only the 0^0 = 1 term
                CHECK(law.weighted_factorial_moment(n, x) == doctest::Approx(direct).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("exact rational mode matches and sharpens the identities") {
    for (int n = 2; n <= 8; ++n) {
        for (const auto& law : {OffspringLaw::wright_fisher(n), OffspringLaw::kimura(n, 2),
                                OffspringLaw::kimura(n, 3), OffspringLaw::dirac(n),
                                OffspringLaw::extreme_permutation(n)}) {
            std::vector<int> two{2};
            Rational closed = phi_rational(law, two);
            if (law.kind() != OffspringKind::Dirac) {
                Rational enumerated = phi_enumerated_rational(law, two);
                CHECK(closed == enumerated);
            }
            // pair rate equals Var(nu_1)/(N-1) exactly
            CHECK(closed == variance_rational(law) / (n - 1));
            // the double path rounds the same value
            CHECK(law.phi(two) == doctest::Approx(static_cast<double>(closed)).epsilon(1e-14));
        }
    }
}
