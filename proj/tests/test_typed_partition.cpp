#include <doctest.h>

#include <vector>

#include "cannings/errors.hpp"
#include "cannings/typed_partition.hpp"

using namespace cannings;

TEST_CASE("typed partition space sizes") {
    CHECK(PartitionSpace::enumerate(1, 2).states.size() == 2);
    CHECK(PartitionSpace::enumerate(2, 2).states.size() == 6);
    CHECK(PartitionSpace::enumerate(4, 2).states.size() == 94);
    CHECK(PartitionSpace::enumerate(3, 1).states.size() == 5);  // set partitions of 3
    CHECK_THROWS_AS(PartitionSpace::enumerate(4, 2, 50), CapError);
}

TEST_CASE("canonical order and labels") {
    PartitionSpace space = PartitionSpace::enumerate(2, 2);
    std::vector<std::string> names{"a", "b"};
    // single-block typings first (RGS 00), then the four singleton typings
    CHECK(space.states[0].label(names) == "{1,2}:a");
    CHECK(space.states[1].label(names) == "{1,2}:b");
    CHECK(space.states[2].label(names) == "{1}:a|{2}:a");
    CHECK(space.states[3].label(names) == "{1}:a|{2}:b");
    CHECK(space.states[4].label(names) == "{1}:b|{2}:a");
    CHECK(space.states[5].label(names) == "{1}:b|{2}:b");
    for (size_t idx = 0; idx < space.states.size(); ++idx)
        CHECK(space.index_of(space.states[idx]) == static_cast<int>(idx));
}

TEST_CASE("canonicalization, restriction, relabelling") {
    TypedPartition p;
    p.n = 4;
    p.blocks = {{3, 1}, {0, 2}};
    p.types = {1, 0};
    p.canonicalize();
    CHECK(p.blocks == std::vector<std::vector<int>>{{0, 2}, {1, 3}});
    CHECK(p.types == std::vector<int>{0, 1});

    TypedPartition r = p.restricted(2);
    CHECK(r.n == 2);
    CHECK(r.blocks == std::vector<std::vector<int>>{{0}, {1}});
    CHECK(r.types == std::vector<int>{0, 1});

    std::vector<int> swap{1, 0, 2, 3};
    TypedPartition q = p.relabelled(swap);
    CHECK(q.blocks == std::vector<std::vector<int>>{{0, 3}, {1, 2}});
    CHECK(q.types == std::vector<int>{1, 0});

    CHECK(p.count_vector(2) == std::vector<int>{1, 1});
}
