#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "edgetwin/error.hpp"

namespace edgetwin {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(Vec2 a, Vec2 b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

// One value per computing dimension (CPU, GPU, storage). Units are
// operations or operations/second depending on context.
struct ResourceVec {
    double cpu = 0.0;
    double gpu = 0.0;
    double store = 0.0;

    bool fits_within(const ResourceVec& cap) const {
        return cpu <= cap.cpu && gpu <= cap.gpu && store <= cap.store;
    }
};

inline ResourceVec operator+(const ResourceVec& a, const ResourceVec& b) {
    return {a.cpu + b.cpu, a.gpu + b.gpu, a.store + b.store};
}

inline ResourceVec operator/(const ResourceVec& a, double s) {
    return {a.cpu / s, a.gpu / s, a.store / s};
}

// Edge server with per-dimension execution capability (ops/second), a
// reserved floor for background duties, and live counters for resources
// held by running DT tasks. The live counters are owned by the simulation
// loop; everything else is immutable after construction.
class EdgeServer {
public:
    EdgeServer(std::size_t id, ResourceVec capacity, ResourceVec reserved)
        : id_(id), capacity_(capacity), reserved_(reserved) {
        auto check = [&](double cap, double res, const char* dim) {
            if (!(cap > 0.0))
                throw ValidationError("server " + std::to_string(id) + ": " + dim +
                                      " capacity must be > 0");
            if (!(res >= 0.0) || res > cap)
                throw ValidationError("server " + std::to_string(id) + ": " + dim +
                                      " reserved must be in [0, capacity]");
        };
        check(capacity.cpu, reserved.cpu, "cpu");
        check(capacity.gpu, reserved.gpu, "gpu");
        check(capacity.store, reserved.store, "store");
    }

    std::size_t id() const { return id_; }
    const ResourceVec& capacity() const { return capacity_; }
    const ResourceVec& reserved() const { return reserved_; }

    // sum of demands of live assignments, maintained by tasking::TaskBoard
    const ResourceVec& held() const { return held_; }
    void set_held(const ResourceVec& held) { held_ = held; }

    ResourceVec used() const { return reserved_ + held_; }

private:
    std::size_t id_;
    ResourceVec capacity_;
    ResourceVec reserved_;
    ResourceVec held_{};
};

// Wireless ingress point, wired to every edge server over a hop-counted
// backhaul. hops_to is indexed by server id.
struct AccessPoint {
    std::size_t id = 0;
    std::size_t owner = 0;
    Vec2 position;
    double range = 0.0;
    std::vector<int> hops_to;

    int hops(std::size_t server_id) const { return hops_to.at(server_id); }
};

struct NetworkParams {
    double bandwidth_hz = 1.0e7;
    double noise_power_w = 4.0e-13;
    double path_loss_exponent = 2.0;
    double per_hop_delay_s_per_bit = 3.0e-9;
    double sync_threshold_s = 0.025;
    // floor on vehicle-AP distance; avoids an infinite SNR at zero range
    double min_distance_m = 1.0;
};

struct Topology {
    std::vector<EdgeServer> servers;
    std::vector<AccessPoint> aps;
    NetworkParams params;

    void validate() const;
};

struct UtilizationRates {
    double cpu = 0.0;
    double gpu = 0.0;
    double store = 0.0;
};

// Per-dimension used/capacity. "Used" includes the reserved floor.
UtilizationRates utilization_rate(const EdgeServer& server);

// Grand mean of all 3|E| per-dimension rates.
double mean_utilization(std::span<const EdgeServer> servers);

// Closest AP whose range covers the position; ties go to the lowest AP id.
std::optional<std::size_t> nearest_ap_in_range(Vec2 position,
                                               std::span<const AccessPoint> aps);

void validate_network_params(const NetworkParams& params);

}  // namespace edgetwin
