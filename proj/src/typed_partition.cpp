#include "cannings/typed_partition.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "cannings/combinatorics.hpp"
#include "cannings/errors.hpp"

namespace cannings {

TypedPartition TypedPartition::singletons(std::span<const int> individual_types) {
    TypedPartition p;
    p.n = static_cast<int>(individual_types.size());
    for (int i = 0; i < p.n; ++i) {
        p.blocks.push_back({i});
        p.types.push_back(individual_types[static_cast<size_t>(i)]);
    }
    return p;
}

void TypedPartition::canonicalize() {
    for (auto& b : blocks) std::sort(b.begin(), b.end());
    std::vector<size_t> order(blocks.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [this](size_t a, size_t b) { return blocks[a].front() < blocks[b].front(); });
    std::vector<std::vector<int>> nb;
    std::vector<int> nt;
    nb.reserve(blocks.size());
    nt.reserve(blocks.size());
    for (size_t idx : order) {
        nb.push_back(std::move(blocks[idx]));
        nt.push_back(types[idx]);
    }
    blocks = std::move(nb);
    types = std::move(nt);
}

std::vector<int> TypedPartition::count_vector(int num_types) const {
    std::vector<int> c(static_cast<size_t>(num_types), 0);
    for (int t : types) c[static_cast<size_t>(t)] += 1;
    return c;
}

std::string TypedPartition::label(std::span<const std::string> type_names) const {
    std::string s;
    for (size_t b = 0; b < blocks.size(); ++b) {
        if (b > 0) s += "|";
        s += "{";
        for (size_t i = 0; i < blocks[b].size(); ++i) {
            if (i > 0) s += ",";
            s += std::to_string(blocks[b][i] + 1);
        }
        s += "}:";
        s += type_names[static_cast<size_t>(types[b])];
    }
    return s;
}

std::string TypedPartition::key() const {
    // restricted growth string + block types
    std::string s;
    std::vector<int> block_of(static_cast<size_t>(n), -1);
    for (size_t b = 0; b < blocks.size(); ++b)
        for (int e : blocks[b]) block_of[static_cast<size_t>(e)] = static_cast<int>(b);
    for (int i = 0; i < n; ++i) {
        s += static_cast<char>('0' + block_of[static_cast<size_t>(i)]);
        if (block_of[static_cast<size_t>(i)] > 92) throw CapError("partition key overflow");
    }
    s += '/';
    for (int t : types) s += static_cast<char>('0' + t);
    return s;
}

TypedPartition TypedPartition::relabelled(std::span<const int> perm) const {
    TypedPartition out;
    out.n = n;
    out.types = types;
    out.blocks.reserve(blocks.size());
    for (const auto& b : blocks) {
        std::vector<int> nb;
        nb.reserve(b.size());
        for (int e : b) nb.push_back(perm[static_cast<size_t>(e)]);
        out.blocks.push_back(std::move(nb));
    }
    out.canonicalize();
    return out;
}

TypedPartition TypedPartition::restricted(int m) const {
    TypedPartition out;
    out.n = m;
    for (size_t b = 0; b < blocks.size(); ++b) {
        std::vector<int> nb;
        for (int e : blocks[b])
            if (e < m) nb.push_back(e);
        if (!nb.empty()) {
            out.blocks.push_back(std::move(nb));
            out.types.push_back(types[b]);
        }
    }
    out.canonicalize();
    return out;
}

PartitionSpace PartitionSpace::enumerate(int n, int num_types, int64_t cap) {
    if (n < 1) throw ValidationError("typed partitions: sample size must be >= 1");
    if (num_types < 1) throw ValidationError("typed partitions: at least one type is required");

    // count states before materializing
    double total = 0.0;
    for_each_set_partition(n, [&](std::span<const int> rgs) {
        int nb = *std::max_element(rgs.begin(), rgs.end()) + 1;
        total += std::pow(static_cast<double>(num_types), nb);
    });
    if (total > static_cast<double>(cap))
        throw CapError("typed partition space has " + std::to_string(static_cast<long long>(total)) +
                       " states, cap is " + std::to_string(cap));

    PartitionSpace space;
    space.n = n;
    space.num_types = num_types;
    for_each_set_partition(n, [&](std::span<const int> rgs) {
        int nb = *std::max_element(rgs.begin(), rgs.end()) + 1;
        std::vector<std::vector<int>> blocks(static_cast<size_t>(nb));
        for (int i = 0; i < n; ++i) blocks[static_cast<size_t>(rgs[static_cast<size_t>(i)])].push_back(i);
        std::vector<int> types(static_cast<size_t>(nb), 0);
        // lexicographic type assignments
        while (true) {
            TypedPartition p;
            p.n = n;
            p.blocks = blocks;
            p.types = types;
            space.index.emplace(p.key(), static_cast<int>(space.states.size()));
            space.states.push_back(std::move(p));
            int pos = nb - 1;
            while (pos >= 0 && types[static_cast<size_t>(pos)] == num_types - 1) {
                types[static_cast<size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
            types[static_cast<size_t>(pos)] += 1;
        }
    });
    return space;
}

int PartitionSpace::index_of(const TypedPartition& p) const {
    auto it = index.find(p.key());
    if (it == index.end()) throw std::out_of_range("typed partition not in the enumerated space");
    return it->second;
}

std::vector<std::string> PartitionSpace::labels(std::span<const std::string> type_names) const {
    std::vector<std::string> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(s.label(type_names));
    return out;
}

std::vector<std::string> default_type_names(int num_types) {
    std::vector<std::string> names;
    for (int i = 0; i < num_types; ++i) {
        if (num_types <= 26) {
            names.push_back(std::string(1, static_cast<char>('a' + i)));
        } else {
            names.push_back("t" + std::to_string(i + 1));
        }
    }
    return names;
}

}  // namespace cannings
