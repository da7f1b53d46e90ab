#pragma once

#include "chemotaxis/qnet.hpp"
#include "chemotaxis/random.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace chemotaxis {

/// Bounded FIFO store of transitions; the oldest entry is evicted first.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(Experience e);

    std::size_t size() const { return count_; }
    std::size_t capacity() const { return storage_.size(); }
    bool empty() const { return count_ == 0; }

    // age 0 = oldest retained entry
    const Experience& at(std::size_t age) const;

    // Uniform sample without replacement. nullopt when fewer than `size`
    // entries are stored (the caller defers learning).
    std::optional<std::vector<Experience>> sample(std::size_t size, Rng& rng) const;

private:
    std::vector<Experience> storage_;
    std::size_t start_ = 0;  // index of the oldest entry
    std::size_t count_ = 0;
};

}  // namespace chemotaxis
