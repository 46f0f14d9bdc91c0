#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "cannings/ancestry_fixed.hpp"
#include "cannings/errors.hpp"

using namespace cannings;

namespace {

FixedModelConfig two_type_wf(long long n0, long long n1, long long flow,
                             std::vector<int> sample) {
    std::vector<OffspringLaw> laws{OffspringLaw::wright_fisher(static_cast<int>(n0)),
                                   OffspringLaw::wright_fisher(static_cast<int>(n1))};
    MutationCountTable table({n0, n1}, {0, flow, flow, 0});
    return FixedModelConfig{std::move(laws), std::move(table), std::move(sample), {"a", "b"}};
}

TypedPartition make_partition(int n, std::vector<std::vector<int>> blocks, std::vector<int> types) {
    TypedPartition p;
    p.n = n;
    p.blocks = std::move(blocks);
    p.types = std::move(types);
    p.canonicalize();
    return p;
}

}  // namespace

TEST_CASE("reproduction entries") {
    FixedModelConfig cfg = two_type_wf(10, 10, 0, {0, 0});

    TypedPartition singles = make_partition(2, {{0}, {1}}, {0, 0});
    CHECK(p_rep_entry(cfg, singles, singles) == doctest::Approx(0.9).epsilon(1e-14));

    TypedPartition merged_a = make_partition(2, {{0, 1}}, {0});
    TypedPartition merged_b = make_partition(2, {{0, 1}}, {1});
    CHECK(p_rep_entry(cfg, singles, merged_a) == doctest::Approx(0.1).epsilon(1e-14));
    // a merged block cannot carry another type
    CHECK(p_rep_entry(cfg, singles, merged_b) == 0.0);
    TypedPartition mixed = make_partition(2, {{0}, {1}}, {0, 1});
    CHECK(p_rep_entry(cfg, mixed, merged_a) == 0.0);

    FixedModelConfig tiny = two_type_wf(2, 2, 0, {0, 0});
    CHECK(p_rep_entry(tiny, singles, merged_a) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("mutation entries") {
    FixedModelConfig cfg = two_type_wf(10, 10, 2, {0, 0});

    TypedPartition block_a = make_partition(3, {{0, 1, 2}}, {0});
    TypedPartition block_b = make_partition(3, {{0, 1, 2}}, {1});
    CHECK(p_mut_entry(cfg, block_a, block_b) ==
          doctest::Approx(cfg.table.backward_rate(0, 1)).epsilon(1e-14));
    CHECK(p_mut_entry(cfg, block_a, block_a) ==
          doctest::Approx(cfg.table.backward_rate(0, 0)).epsilon(1e-14));

    TypedPartition split = make_partition(3, {{0, 1}, {2}}, {0, 0});
    CHECK(p_mut_entry(cfg, block_a, split) == 0.0);

    FixedModelConfig none = two_type_wf(10, 10, 0, {0, 0});
    CHECK(p_mut_entry(none, block_a, block_a) == 1.0);
    CHECK(p_mut_entry(none, block_a, block_b) == 0.0);
}

TEST_CASE("transition matrix structure") {
    // frozen reproduction and no mutation keep every state in place
    std::vector<OffspringLaw> laws{OffspringLaw::dirac(5), OffspringLaw::dirac(5)};
    FixedModelConfig frozen{std::move(laws), MutationCountTable({5, 5}, {0, 0, 0, 0}), {0, 1}, {"a", "b"}};
    LabeledMatrix p = transition_matrix(frozen);
    for (size_t r = 0; r < p.size(); ++r)
        for (size_t c = 0; c < p.size(); ++c) CHECK(p.at(r, c) == (r == c ? 1.0 : 0.0));

    // single type: pair merge probability is 1/N
    std::vector<OffspringLaw> wf{OffspringLaw::wright_fisher(4)};
    FixedModelConfig single{std::move(wf), MutationCountTable({4}, {0}), {0, 0}, {"a"}};
    PartitionSpace space = PartitionSpace::enumerate(2, 1);
    LabeledMatrix ps = transition_matrix(single);
    TypedPartition apart = make_partition(2, {{0}, {1}}, {0, 0});
    TypedPartition together = make_partition(2, {{0, 1}}, {0});
    CHECK(ps.at(static_cast<size_t>(space.index_of(apart)), static_cast<size_t>(space.index_of(together))) ==
          doctest::Approx(0.25).epsilon(1e-14));

    // stochastic rows on a mixed model
    FixedModelConfig cfg = two_type_wf(5, 5, 1, {0, 1});
    LabeledMatrix pm = transition_matrix(cfg);
    CHECK(pm.max_row_sum_deviation(1.0) < 1e-10);
    CHECK(pm.min_off_diagonal() >= 0.0);

    // factors are stochastic too
    PartitionSpace space2 = PartitionSpace::enumerate(2, 2);
    CHECK(p_rep_matrix(cfg, space2).max_row_sum_deviation(1.0) < 1e-10);
    CHECK(p_mut_matrix(cfg, space2).max_row_sum_deviation(1.0) < 1e-10);

    // sample larger than a subpopulation cannot be enumerated exactly
    FixedModelConfig too_big = two_type_wf(2, 5, 0, {0, 0, 0});
    CHECK_THROWS_AS(transition_matrix(too_big), ValidationError);
}

TEST_CASE("relabelling invariance") {
    FixedModelConfig cfg = two_type_wf(6, 5, 1, {0, 0, 1});
    PartitionSpace space = PartitionSpace::enumerate(3, 2);
    LabeledMatrix p = transition_matrix(cfg);

    std::vector<int> perm{0, 1, 2};
    std::sort(perm.begin(), perm.end());
    do {
        for (size_t r = 0; r < space.states.size(); ++r) {
            for (size_t c = 0; c < space.states.size(); ++c) {
                size_t rr = static_cast<size_t>(space.index_of(space.states[r].relabelled(perm)));
                size_t cc = static_cast<size_t>(space.index_of(space.states[c].relabelled(perm)));
                CHECK(p.at(r, c) == doctest::Approx(p.at(rr, cc)).epsilon(1e-12));
            }
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST_CASE("projection consistency from three to two individuals") {
    FixedModelConfig cfg3 = two_type_wf(6, 5, 1, {0, 1, 0});
    FixedModelConfig cfg2 = two_type_wf(6, 5, 1, {0, 1});
    PartitionSpace space3 = PartitionSpace::enumerate(3, 2);
    PartitionSpace space2 = PartitionSpace::enumerate(2, 2);
    LabeledMatrix p3 = transition_matrix(cfg3);
    LabeledMatrix p2 = transition_matrix(cfg2);

    for (size_t r3 = 0; r3 < space3.states.size(); ++r3) {
        size_t r2 = static_cast<size_t>(space2.index_of(space3.states[r3].restricted(2)));
        for (size_t c2 = 0; c2 < space2.states.size(); ++c2) {
            double marginal = 0.0;
            for (size_t c3 = 0; c3 < space3.states.size(); ++c3)
                if (space2.index_of(space3.states[c3].restricted(2)) == static_cast<int>(c2))
                    marginal += p3.at(r3, c3);
            CHECK(marginal == doctest::Approx(p2.at(r2, c2)).epsilon(1e-12));
        }
    }
}

TEST_CASE("simulation matches the exact one-step law") {
    FixedModelConfig cfg = two_type_wf(5, 5, 1, {0, 1});
    PartitionSpace space = PartitionSpace::enumerate(2, 2);
    LabeledMatrix p = transition_matrix(cfg);
    TypedPartition start = TypedPartition::singletons(cfg.initial_types);
    size_t row = static_cast<size_t>(space.index_of(start));

    const long long reps = 100000;
    std::vector<long long> hits(space.states.size(), 0);
    for (long long rep = 0; rep < reps; ++rep) {
        RngStream rng = RngStream::derive(11, "ancestry-onestep", static_cast<uint64_t>(rep));
        TypedPartition next = ancestry_step(cfg, start, rng);
        hits[static_cast<size_t>(space.index_of(next))] += 1;
    }
    for (size_t c = 0; c < space.states.size(); ++c) {
        double prob = p.at(row, c);
        double emp = static_cast<double>(hits[c]) / reps;
        double sigma = std::sqrt(std::max(prob * (1.0 - prob), 1e-12) / reps);
        CHECK(std::fabs(emp - prob) <= 3.5 * sigma + 1e-12);
    }
}

TEST_CASE("paths only merge and dirac paths are constant") {
    std::vector<OffspringLaw> laws{OffspringLaw::dirac(4), OffspringLaw::dirac(4)};
    FixedModelConfig frozen{std::move(laws), MutationCountTable({4, 4}, {0, 0, 0, 0}), {0, 1, 1}, {"a", "b"}};
    RngStream rng = RngStream::derive(3, "ancestry-paths");
    auto path = simulate_ancestry(frozen, 5, rng);
    for (const auto& state : path) CHECK(state == path.front());

    FixedModelConfig cfg = two_type_wf(5, 5, 1, {0, 0, 1});
    for (uint64_t rep = 0; rep < 200; ++rep) {
        RngStream r = RngStream::derive(17, "ancestry-paths", rep);
        auto pth = simulate_ancestry(cfg, 6, r);
        for (size_t g = 1; g < pth.size(); ++g) CHECK(pth[g].num_blocks() <= pth[g - 1].num_blocks());
    }

    // identical seeds reproduce identical paths
    RngStream r1 = RngStream::derive(23, "ancestry-paths", 7);
    RngStream r2 = RngStream::derive(23, "ancestry-paths", 7);
    auto p1 = simulate_ancestry(cfg, 8, r1);
    auto p2 = simulate_ancestry(cfg, 8, r2);
    REQUIRE(p1.size() == p2.size());
    for (size_t g = 0; g < p1.size(); ++g) CHECK(p1[g] == p2[g]);
}
