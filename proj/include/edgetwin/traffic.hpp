#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "edgetwin/syncmodel.hpp"
#include "edgetwin/tasking.hpp"
#include "edgetwin/topology.hpp"

namespace edgetwin {

struct Range {
    double min = 0.0;
    double max = 0.0;
};

struct IntRange {
    int min = 0;
    int max = 0;
};

// Constant telemetry plus lognormal sensor payload, in bits per slot.
struct PayloadModel {
    double status_bits = 48'000.0;
    double sensing_log_mean = 13.71;  // median ~9e5 bits
    double sensing_log_sigma = 0.33;
};

// Operation counts affine in payload with a multiplicative noise spread.
struct OpModel {
    double cpu_ops_per_bit = 0.50;
    double gpu_ops_per_bit = 0.35;
    double store_ops_per_bit = 0.25;
    double noise_frac = 0.08;
};

// Optional per-server pinning, for toy setups and injected scenarios.
struct ServerOverride {
    std::optional<ResourceVec> capacity;
    std::optional<double> reserved_frac;
    std::optional<int> cross_hops;
};

struct ScenarioSpec {
    std::uint64_t seed = 1;
    int vehicle_count = 1986;
    double penetration_ratio = 0.5;
    int episode_slots = 10;
    double slot_duration_s = 0.1;

    double area_width_m = 1200.0;
    double area_height_m = 1200.0;
    int route_count = 12;
    int waypoints_per_route = 4;
    Range speed_mps{6.0, 14.0};

    int server_count = 4;
    double ap_range_m = 320.0;
    Range cpu_capacity_ops{5.0e7, 1.1e8};
    Range gpu_capacity_ops{3.5e7, 7.7e7};
    Range store_capacity_ops{2.5e7, 5.5e7};
    Range reserved_frac{0.05, 0.15};
    IntRange cross_hops{2, 10};
    int own_hops = 1;
    // couple a server's hop distance to its capacity tier: big servers sit
    // deeper in the network, small ones close to the APs
    bool hop_capacity_coupling = true;

    PayloadModel payload;
    OpModel ops;
    Range tx_power_gain_w{0.4, 0.6};
    NetworkParams network;
    double nominal_service_time_s = 0.125;

    std::vector<ServerOverride> server_overrides;

    void validate() const;
};

// One vehicle across the episode: positions each slot, and (for CAVs) the
// upload sample on every slot where some AP is in range.
struct VehicleTrace {
    std::size_t vehicle_id = 0;
    bool is_cav = false;
    std::vector<Vec2> positions;
    std::vector<CavSample> samples;  // ascending time_slot, connected slots only
};

struct Scenario {
    ScenarioSpec spec;
    Topology topology;
    std::vector<VehicleTrace> traces;
};

// Deterministic in spec.seed. Exactly round(vehicle_count * penetration_ratio)
// vehicles are CAVs; lowering the ratio removes CAVs without changing the
// remaining vehicles' samples, so runs at different ratios stay paired.
Scenario generate_scenario(const ScenarioSpec& spec);

// Connected CAV samples of one slot, ordered by vehicle id, each paired with
// its serving AP.
std::vector<QueueEntry> samples_at(const Scenario& scenario, int slot);

// Total connected samples over the episode; the env's default horizon M.
std::size_t count_samples(const std::vector<VehicleTrace>& traces);

}  // namespace edgetwin
