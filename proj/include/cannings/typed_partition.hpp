#ifndef CANNINGS_TYPED_PARTITION_HPP
#define CANNINGS_TYPED_PARTITION_HPP

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace cannings {

// Partition of {0..n-1} whose blocks each carry a type index. Canonical
// form: blocks sorted by minimal element, elements sorted within blocks.
struct TypedPartition {
    int n = 0;
    std::vector<std::vector<int>> blocks;
    std::vector<int> types;  // one per block

    static TypedPartition singletons(std::span<const int> individual_types);

    void canonicalize();

    size_t num_blocks() const { return blocks.size(); }
    std::vector<int> count_vector(int num_types) const;

    // e.g. "{1,3}:a|{2}:b" (elements printed 1-based)
    std::string label(std::span<const std::string> type_names) const;

    // compact encoding usable as a hash key
    std::string key() const;

    bool operator==(const TypedPartition& other) const {
        return n == other.n && blocks == other.blocks && types == other.types;
    }

    // image under a relabelling of the individuals
    TypedPartition relabelled(std::span<const int> perm) const;

    // restriction to {0..m-1}, empty blocks dropped
    TypedPartition restricted(int m) const;
};

// Deterministically ordered enumeration of all typed partitions, with an
// index map. Order: set partitions in restricted-growth-string order, type
// assignments in lexicographic order.
struct PartitionSpace {
    int n = 0;
    int num_types = 0;
    std::vector<TypedPartition> states;
    std::unordered_map<std::string, int> index;

    // throws CapError if sum over partitions of K^{#blocks} exceeds `cap`
    static PartitionSpace enumerate(int n, int num_types, int64_t cap = 1000000);

    int index_of(const TypedPartition& p) const;
    std::vector<std::string> labels(std::span<const std::string> type_names) const;
};

std::vector<std::string> default_type_names(int num_types);

}  // namespace cannings

#endif
