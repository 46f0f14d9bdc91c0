#include <doctest.h>

#include <functional>
#include <vector>

#include "cannings/errors.hpp"
#include "cannings/mutation.hpp"

using namespace cannings;

TEST_CASE("count table validation") {
    // conservation violated: type 0 sends 5, receives 3
    CHECK_THROWS_WITH_AS(MutationCountTable({100, 50}, {0, 5, 3, 0}),
                         doctest::Contains("conservation fails for type 0"), ValidationError);
    // outflow beyond the subpopulation
    CHECK_THROWS_AS(MutationCountTable({4, 50}, {0, 5, 5, 0}), ValidationError);
    CHECK_THROWS_AS(MutationCountTable({4, 4}, {0, -1, -1, 0}), ValidationError);
    // derived stay counts
    MutationCountTable t({10, 10}, {0, 2, 2, 0});
    CHECK(t.count(0, 0) == 8);
    CHECK(t.count(1, 1) == 8);
    CHECK(t.has_mutation());
    CHECK_FALSE(MutationCountTable({3, 3}, {0, 0, 0, 0}).has_mutation());
}

TEST_CASE("backward rates") {
    MutationCountTable t({100, 50}, {0, 5, 5, 0});
    CHECK(t.backward_rate(0, 1) == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(t.backward_rate(1, 0) == doctest::Approx(0.1).epsilon(1e-15));

    MutationCountTable none({100, 50}, {0, 0, 0, 0});
    CHECK(none.backward_rate(0, 0) == 1.0);
    CHECK(none.backward_rate(0, 1) == 0.0);

    MutationCountTable sym({10, 10}, {0, 2, 2, 0});
    CHECK(sym.backward_rate(0, 0) == doctest::Approx(0.8).epsilon(1e-15));

    // rows are probability vectors
    for (const auto& table : {t, none, sym})
        for (int k = 0; k < 2; ++k) {
            double s = 0.0;
            for (int l = 0; l < 2; ++l) s += table.backward_rate(k, l);
            CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
        }
}

TEST_CASE("sample mutation law") {
    // N_1 = 4 children of type a, one mutates away; sample 2, ask for 1 mutant
    MutationCountTable t({4, 4}, {0, 1, 1, 0});
    std::vector<long long> one_mutant{0, 1};
    CHECK(t.hypergeometric_pmf(0, 2, one_mutant) == doctest::Approx(0.5).epsilon(1e-15));
    std::vector<long long> two_mutants{0, 2};
    CHECK(t.hypergeometric_pmf(0, 2, two_mutants) == 0.0);

    MutationCountTable none({4, 4}, {0, 0, 0, 0});
    std::vector<long long> no_mutants{0, 0};
    CHECK(none.hypergeometric_pmf(0, 2, no_mutants) == 1.0);

    // sums to one over feasible counts, small and large regimes
    for (long long size : {12LL, 80LL}) {
        MutationCountTable table({size, size}, {0, 3, 3, 0});
        for (long long draw = 0; draw <= 5; ++draw) {
            double total = 0.0;
            for (long long m = 0; m <= draw; ++m) {
                std::vector<long long> v{0, m};
                total += table.hypergeometric_pmf(0, draw, v);
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("multinomial mutation law") {
    MutationMatrix id = MutationMatrix::identity(3);
    std::vector<long long> all_stay{3, 0, 0};
    CHECK(multinomial_mutation_pmf(id, 0, 3, all_stay) == 1.0);

    MutationMatrix half(2, {0.5, 0.5, 0.5, 0.5});
    std::vector<long long> split{1, 1};
    CHECK(multinomial_mutation_pmf(half, 0, 2, split) == doctest::Approx(0.5).epsilon(1e-15));

    std::vector<long long> negative{-1, 3};
    CHECK(multinomial_mutation_pmf(half, 0, 2, negative) == 0.0);
    std::vector<long long> wrong_total{2, 1};
    CHECK(multinomial_mutation_pmf(half, 0, 2, wrong_total) == 0.0);

    // sums to one over compositions, K up to 4, i_k up to 10
    MutationMatrix u(4, {0.7, 0.1, 0.1, 0.1, 0.25, 0.25, 0.25, 0.25, 0.0, 0.0, 1.0, 0.0, 0.5, 0.0, 0.0, 0.5});
    for (long long total : {1LL, 4LL, 10LL}) {
        double sum = 0.0;
        std::vector<long long> j(4, 0);
        std::function<void(int, long long)> rec = [&](int idx, long long left) {
            if (idx == 3) {
                j[3] = left;
                sum += multinomial_mutation_pmf(u, 1, total, j);
                return;
            }
            for (long long v = 0; v <= left; ++v) {
                j[static_cast<size_t>(idx)] = v;
                rec(idx + 1, left - v);
            }
        };
        rec(0, total);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("mutation matrix validation") {
    CHECK_THROWS_WITH_AS(MutationMatrix(2, {0.5, 0.4, 0.0, 1.0}), doctest::Contains("row 0"),
                         ValidationError);
    CHECK_THROWS_AS(MutationMatrix(2, {1.5, -0.5, 0.0, 1.0}), ValidationError);
    CHECK(MutationMatrix::identity(2).is_identity());
    CHECK_FALSE(MutationMatrix(2, {0.9, 0.1, 0.0, 1.0}).is_identity());
}
