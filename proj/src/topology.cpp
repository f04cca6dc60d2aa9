#include "edgetwin/topology.hpp"

namespace edgetwin {

void validate_network_params(const NetworkParams& p) {
    if (!(p.bandwidth_hz > 0.0)) throw ValidationError("bandwidth_hz must be > 0");
    if (!(p.noise_power_w > 0.0)) throw ValidationError("noise_power_w must be > 0");
    if (!(p.path_loss_exponent > 0.0))
        throw ValidationError("path_loss_exponent must be > 0");
    if (!(p.per_hop_delay_s_per_bit >= 0.0))
        throw ValidationError("per_hop_delay_s_per_bit must be >= 0");
    if (!(p.sync_threshold_s > 0.0)) throw ValidationError("sync_threshold_s must be > 0");
    if (!(p.min_distance_m > 0.0)) throw ValidationError("min_distance_m must be > 0");
}

void Topology::validate() const {
    validate_network_params(params);
    if (servers.empty()) throw ValidationError("topology has no servers");
    for (std::size_t i = 0; i < servers.size(); ++i)
        if (servers[i].id() != i)
            throw ValidationError("server ids must be dense and ordered");
    for (const auto& ap : aps) {
        if (ap.owner >= servers.size())
            throw ValidationError("ap " + std::to_string(ap.id) + ": owner out of range");
        if (!(ap.range > 0.0))
            throw ValidationError("ap " + std::to_string(ap.id) + ": range must be > 0");
        if (ap.hops_to.size() != servers.size())
            throw ValidationError("ap " + std::to_string(ap.id) +
                                  ": hops_to must cover every server");
        for (int h : ap.hops_to)
            if (h < 1)
                throw ValidationError("ap " + std::to_string(ap.id) +
                                      ": hop counts must be >= 1");
    }
}

UtilizationRates utilization_rate(const EdgeServer& server) {
    const ResourceVec used = server.used();
    const ResourceVec& cap = server.capacity();
    return {used.cpu / cap.cpu, used.gpu / cap.gpu, used.store / cap.store};
}

double mean_utilization(std::span<const EdgeServer> servers) {
    if (servers.empty())
        throw ValidationError("mean_utilization: server list is empty");
    double sum = 0.0;
    for (const auto& s : servers) {
        const UtilizationRates r = utilization_rate(s);
        sum += r.gpu + r.cpu + r.store;
    }
    return sum / (3.0 * static_cast<double>(servers.size()));
}

std::optional<std::size_t> nearest_ap_in_range(Vec2 position,
                                               std::span<const AccessPoint> aps) {
    std::optional<std::size_t> best;
    double best_dist = 0.0;
    for (const auto& ap : aps) {
        const double d = distance(position, ap.position);
        if (d > ap.range) continue;
        if (!best || d < best_dist || (d == best_dist && ap.id < *best)) {
            best = ap.id;
            best_dist = d;
        }
    }
    return best;
}

}  // namespace edgetwin
