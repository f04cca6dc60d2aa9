#include "edgetwin/syncmodel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace edgetwin {

void CavSample::validate() const {
    auto fail = [&](const char* msg) {
        throw ValidationError("vehicle " + std::to_string(vehicle_id) + " slot " +
                              std::to_string(time_slot) + ": " + msg);
    };
    if (!(status_bits >= 0.0)) fail("status_bits must be >= 0");
    if (!(sensing_bits >= 0.0)) fail("sensing_bits must be >= 0");
    if (!(tx_power_gain_w > 0.0)) fail("tx_power_gain_w must be > 0");
    if (!(cpu_ops >= 0.0 && gpu_ops >= 0.0 && store_ops >= 0.0))
        fail("operation counts must be >= 0");
    if (!(cpu_ops > 0.0 || gpu_ops > 0.0 || store_ops > 0.0))
        fail("at least one operation count must be > 0");
}

double payload_size(const CavSample& sample) {
    return sample.status_bits + sample.sensing_bits;
}

double uplink_rate(const CavSample& sample, const AccessPoint& ap,
                   const NetworkParams& params) {
    const double dist = std::max(distance(sample.position, ap.position),
                                 params.min_distance_m);
    const double snr = sample.tx_power_gain_w *
                       std::pow(dist, -params.path_loss_exponent) /
                       params.noise_power_w;
    return params.bandwidth_hz * std::log2(1.0 + snr);
}

double wireless_delay(const CavSample& sample, const AccessPoint& ap,
                      const NetworkParams& params) {
    const double payload = payload_size(sample);
    if (payload == 0.0) return 0.0;
    return payload / uplink_rate(sample, ap, params);
}

double wired_delay(double payload_bits, int hops, const NetworkParams& params) {
    return params.per_hop_delay_s_per_bit * static_cast<double>(hops) * payload_bits;
}

double processing_delay(const CavSample& sample, const EdgeServer& server) {
    const ResourceVec& cap = server.capacity();
    return std::max({sample.cpu_ops / cap.cpu, sample.gpu_ops / cap.gpu,
                     sample.store_ops / cap.store});
}

SyncBreakdown sync_latency(const CavSample& sample, const AccessPoint& ap,
                           const EdgeServer& server, const NetworkParams& params) {
    SyncBreakdown b;
    b.wireless_s = wireless_delay(sample, ap, params);
    b.wired_s = wired_delay(payload_size(sample), ap.hops(server.id()), params);
    b.processing_s = processing_delay(sample, server);
    b.total_s = b.wireless_s + b.wired_s + b.processing_s;
    b.within_threshold = b.total_s <= params.sync_threshold_s;
    return b;
}

}  // namespace edgetwin
