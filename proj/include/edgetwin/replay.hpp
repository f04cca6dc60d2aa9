#pragma once

#include <cstddef>
#include <vector>

#include "edgetwin/error.hpp"
#include "edgetwin/policy.hpp"
#include "edgetwin/rng.hpp"

namespace edgetwin {

// Fixed-capacity ring of transitions with uniform batch sampling; indices
// within one batch are distinct.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
        if (capacity == 0) throw ValidationError("replay capacity must be > 0");
        slots_.reserve(capacity);
    }

    void push(Transition t) {
        if (slots_.size() < capacity_) {
            slots_.push_back(std::move(t));
        } else {
            slots_[write_] = std::move(t);
        }
        write_ = (write_ + 1) % capacity_;
    }

    std::size_t size() const { return slots_.size(); }
    std::size_t capacity() const { return capacity_; }
    const Transition& at(std::size_t i) const { return slots_.at(i); }

    std::vector<std::size_t> sample_indices(std::size_t batch, Rng& rng) const;

private:
    std::size_t capacity_;
    std::size_t write_ = 0;
    std::vector<Transition> slots_;
};

}  // namespace edgetwin
