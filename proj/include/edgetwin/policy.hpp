#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edgetwin/env.hpp"
#include "edgetwin/rng.hpp"

namespace edgetwin {

struct Transition {
    std::vector<double> state;  // normalized observation
    int action = 0;
    double reward = 0.0;
    std::vector<double> next_state;
    bool terminal = false;
};

class Policy {
public:
    virtual ~Policy() = default;

    virtual int act(const MdpState& state, bool explore) = 0;
    virtual void observe(const Transition& transition) { (void)transition; }
    virtual void save(const std::string& path) const { (void)path; }
    virtual void load(const std::string& path) { (void)path; }
    virtual std::string name() const = 0;
};

// Uniform server choice from the policy's own seeded generator.
class RandomPolicy : public Policy {
public:
    explicit RandomPolicy(std::uint64_t seed) : rng_(seed) {}

    int act(const MdpState& state, bool /*explore*/) override {
        return static_cast<int>(
            rng_.uniform_int(0, static_cast<std::int64_t>(state.server_count()) - 1));
    }
    std::string name() const override { return "random"; }

private:
    Rng rng_;
};

// First-fit in server index order, gated on residual capacity; when nothing
// fits it returns the last index and lets the env record the drop.
class GreedyPolicy : public Policy {
public:
    explicit GreedyPolicy(double nominal_service_time_s)
        : nominal_service_time_s_(nominal_service_time_s) {}

    int act(const MdpState& state, bool /*explore*/) override;
    std::string name() const override { return "greedy"; }

private:
    double nominal_service_time_s_;
};

}  // namespace edgetwin
