#include "cannings/count_states.hpp"

#include <functional>
#include <stdexcept>

#include "cannings/combinatorics.hpp"
#include "cannings/errors.hpp"

namespace cannings {

std::string count_state_label(std::span<const int> counts) {
    std::string s;
    for (size_t i = 0; i < counts.size(); ++i) {
        if (i > 0) s += "|";
        s += std::to_string(counts[i]);
    }
    return s;
}

namespace {

CountStateSpace enumerate(int total, int num_types, bool exact_total, int64_t cap) {
    if (total < 0) throw ValidationError("count states: total must be >= 0");
    if (num_types < 1) throw ValidationError("count states: at least one type is required");
    double size = exact_total ? binom(total + num_types - 1, num_types - 1)
                              : binom(total + num_types, num_types);
    if (size > static_cast<double>(cap))
        throw CapError("count state space has " + std::to_string(static_cast<long long>(size)) +
                       " states, cap is " + std::to_string(cap));

    CountStateSpace space;
    std::vector<int> cur(static_cast<size_t>(num_types), 0);
    std::function<void(int, int)> rec = [&](int k, int used) {
        if (k == num_types - 1) {
            if (exact_total) {
                cur[static_cast<size_t>(k)] = total - used;
                space.index.emplace(cur, static_cast<int>(space.states.size()));
                space.states.push_back(cur);
            } else {
                for (int v = 0; v + used <= total; ++v) {
                    cur[static_cast<size_t>(k)] = v;
                    space.index.emplace(cur, static_cast<int>(space.states.size()));
                    space.states.push_back(cur);
                }
                cur[static_cast<size_t>(k)] = 0;
            }
            return;
        }
        for (int v = 0; v + used <= total; ++v) {
            cur[static_cast<size_t>(k)] = v;
            rec(k + 1, used + v);
        }
        cur[static_cast<size_t>(k)] = 0;
    };
    rec(0, 0);
    return space;
}

}  // namespace

CountStateSpace CountStateSpace::delta(int total, int num_types, int64_t cap) {
    return enumerate(total, num_types, true, cap);
}

CountStateSpace CountStateSpace::simplex(int total, int num_types, int64_t cap) {
    return enumerate(total, num_types, false, cap);
}

int CountStateSpace::index_of(std::span<const int> state) const {
    auto it = index.find(std::vector<int>(state.begin(), state.end()));
    if (it == index.end()) throw std::out_of_range("count state not in the enumerated space");
    return it->second;
}

std::vector<std::string> CountStateSpace::labels() const {
    std::vector<std::string> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(count_state_label(s));
    return out;
}

}  // namespace cannings
