#ifndef CANNINGS_COUNT_STATES_HPP
#define CANNINGS_COUNT_STATES_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace cannings {

// Enumerated type-count state space, lexicographically ordered.
struct CountStateSpace {
    std::vector<std::vector<int>> states;
    std::map<std::vector<int>, int> index;

    // compositions of exactly `total` into `num_types` parts
    static CountStateSpace delta(int total, int num_types, int64_t cap = 1000000);
    // all count vectors with sum between 0 and `total`
    static CountStateSpace simplex(int total, int num_types, int64_t cap = 1000000);

    int index_of(std::span<const int> state) const;
    std::vector<std::string> labels() const;
};

std::string count_state_label(std::span<const int> counts);

}  // namespace cannings

#endif
