#pragma once

#include <cstddef>
#include <map>
#include <vector>

namespace bellman::detail {

/// Groups outcomes by key; outcomes with equal keys receive equal labels.
template <typename Key>
std::vector<std::size_t> group_by_key(const std::vector<Key>& keys) {
    std::map<Key, std::size_t> ids;
    std::vector<std::size_t> labels;
    labels.reserve(keys.size());
    for (const auto& key : keys) {
        auto [it, inserted] = ids.try_emplace(key, ids.size());
        labels.push_back(it->second);
    }
    return labels;
}

}  // namespace bellman::detail
