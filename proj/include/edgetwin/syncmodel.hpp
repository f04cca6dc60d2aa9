#pragma once

#include <cstdint>

#include "edgetwin/topology.hpp"

namespace edgetwin {

// One vehicle's per-slot upload: telemetry plus sensor payload, its position,
// the combined transmit-power/channel-gain factor, and the operation counts
// needed to fold the payload into its digital twin.
struct CavSample {
    std::size_t vehicle_id = 0;
    std::int64_t time_slot = 0;
    double status_bits = 0.0;
    double sensing_bits = 0.0;
    Vec2 position;
    double tx_power_gain_w = 0.0;
    double cpu_ops = 0.0;
    double gpu_ops = 0.0;
    double store_ops = 0.0;

    ResourceVec ops() const { return {cpu_ops, gpu_ops, store_ops}; }

    void validate() const;
};

struct SyncBreakdown {
    double wireless_s = 0.0;
    double wired_s = 0.0;
    double processing_s = 0.0;
    double total_s = 0.0;
    bool within_threshold = false;
};

// All pure; safe from any number of concurrent callers.

double payload_size(const CavSample& sample);

// Shannon-form uplink rate in bits/second; vehicle-AP distance is clamped
// below at params.min_distance_m.
double uplink_rate(const CavSample& sample, const AccessPoint& ap,
                   const NetworkParams& params);

double wireless_delay(const CavSample& sample, const AccessPoint& ap,
                      const NetworkParams& params);

double wired_delay(double payload_bits, int hops, const NetworkParams& params);

// Longest of the three concurrent operation streams, against the server's
// full per-second capability (contention is handled by admission, not here).
double processing_delay(const CavSample& sample, const EdgeServer& server);

SyncBreakdown sync_latency(const CavSample& sample, const AccessPoint& ap,
                           const EdgeServer& server, const NetworkParams& params);

}  // namespace edgetwin
