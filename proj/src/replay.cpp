#include "chemotaxis/replay.hpp"

#include "chemotaxis/errors.hpp"

#include <stdexcept>
#include <unordered_set>
#include <utility>

namespace chemotaxis {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : storage_(capacity) {
    if (capacity == 0) throw ConfigError("replay buffer capacity must be positive");
}

void ReplayBuffer::push(Experience e) {
    const std::size_t cap = storage_.size();
    if (count_ < cap) {
        storage_[(start_ + count_) % cap] = std::move(e);
        ++count_;
    } else {
        storage_[start_] = std::move(e);
        start_ = (start_ + 1) % cap;
    }
}

const Experience& ReplayBuffer::at(std::size_t age) const {
    if (age >= count_) throw std::out_of_range("replay buffer index out of range");
    return storage_[(start_ + age) % storage_.size()];
}

std::optional<std::vector<Experience>> ReplayBuffer::sample(std::size_t size, Rng& rng) const {
    if (size > count_) return std::nullopt;

    // Floyd's algorithm: O(size) draws regardless of buffer size.
    std::vector<std::size_t> picked;
    picked.reserve(size);
    std::unordered_set<std::size_t> seen;
    for (std::size_t j = count_ - size; j < count_; ++j) {
        const std::size_t t = rng.below(j + 1);
        const std::size_t choice = seen.contains(t) ? j : t;
        seen.insert(choice);
        picked.push_back(choice);
    }
    // Floyd's output order is not uniform; shuffle it.
    for (std::size_t i = picked.size(); i > 1; --i) {
        std::swap(picked[i - 1], picked[rng.below(i)]);
    }

    std::vector<Experience> batch;
    batch.reserve(size);
    for (std::size_t age : picked) batch.push_back(at(age));
    return batch;
}

}  // namespace chemotaxis
