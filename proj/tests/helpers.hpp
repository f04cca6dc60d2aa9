#pragma once

#include <vector>

#include "edgetwin/env.hpp"
#include "edgetwin/rng.hpp"
#include "edgetwin/traffic.hpp"

namespace edgetwin::testing {

// Hand-built scenario: E servers behind one AP at the origin, one CAV parked
// on the AP, one sample per slot. Capacities/hops tweakable per test.
inline Scenario single_ap_scenario(int server_count, int slots,
                                   ResourceVec capacity = {1.0e6, 1.0e6, 1.0e6},
                                   ResourceVec reserved = {0.0, 0.0, 0.0},
                                   int cross_hops = 3) {
    Scenario sc;
    sc.spec.vehicle_count = 1;
    sc.spec.penetration_ratio = 1.0;
    sc.spec.episode_slots = slots;
    sc.spec.slot_duration_s = 0.1;
    sc.spec.server_count = server_count;
    sc.spec.nominal_service_time_s = 0.125;
    sc.spec.network.bandwidth_hz = 1.0e7;
    sc.spec.network.noise_power_w = 1.0;
    sc.spec.network.path_loss_exponent = 2.0;
    sc.spec.network.per_hop_delay_s_per_bit = 1.0e-9;
    sc.spec.network.sync_threshold_s = 0.025;

    for (int e = 0; e < server_count; ++e)
        sc.topology.servers.emplace_back(static_cast<std::size_t>(e), capacity, reserved);
    AccessPoint ap;
    ap.id = 0;
    ap.owner = 0;
    ap.position = {0.0, 0.0};
    ap.range = 100.0;
    for (int e = 0; e < server_count; ++e) ap.hops_to.push_back(e == 0 ? 1 : cross_hops);
    sc.topology.aps.push_back(ap);
    sc.topology.params = sc.spec.network;

    VehicleTrace trace;
    trace.vehicle_id = 0;
    trace.is_cav = true;
    for (int t = 0; t < slots; ++t) {
        trace.positions.push_back({1.0, 0.0});
        CavSample s;
        s.vehicle_id = 0;
        s.time_slot = t;
        s.status_bits = 1000.0;
        s.sensing_bits = 9000.0;
        s.position = {1.0, 0.0};
        s.tx_power_gain_w = 3.0;  // snr 3 at 1 m -> rate = 2e7 exactly
        s.cpu_ops = 4000.0;
        s.gpu_ops = 2000.0;
        s.store_ops = 1000.0;
        trace.samples.push_back(s);
    }
    sc.traces.push_back(trace);
    return sc;
}

// Small generated scenario for property tests; integral resource units.
inline ScenarioSpec small_generated_spec(std::uint64_t seed, double pr = 0.5) {
    ScenarioSpec spec;
    spec.seed = seed;
    spec.vehicle_count = 60;
    spec.penetration_ratio = pr;
    spec.episode_slots = 6;
    spec.server_count = 3;
    spec.area_width_m = 800.0;
    spec.area_height_m = 800.0;
    spec.route_count = 6;
    spec.ap_range_m = 350.0;
    return spec;
}

}  // namespace edgetwin::testing
