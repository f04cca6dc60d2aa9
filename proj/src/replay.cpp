#include "edgetwin/replay.hpp"

#include <algorithm>

namespace edgetwin {

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t batch, Rng& rng) const {
    if (batch > slots_.size())
        throw ContractError("replay sample: batch larger than buffer");
    // Floyd's algorithm: distinct indices, O(batch) draws
    std::vector<std::size_t> picked;
    picked.reserve(batch);
    for (std::size_t j = slots_.size() - batch; j < slots_.size(); ++j) {
        const std::size_t t =
            static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(j)));
        if (std::find(picked.begin(), picked.end(), t) != picked.end())
            picked.push_back(j);
        else
            picked.push_back(t);
    }
    return picked;
}

}  // namespace edgetwin
