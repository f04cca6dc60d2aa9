#include "edgetwin/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "edgetwin/rng.hpp"

namespace edgetwin {

namespace {

// substream keys off the scenario seed
constexpr std::uint64_t kKeyServers = 1;
constexpr std::uint64_t kKeyAps = 2;
constexpr std::uint64_t kKeyRoutes = 3;
constexpr std::uint64_t kKeyVehicleBase = 1000;

double lerp(const Range& r, double t) { return r.min + (r.max - r.min) * t; }

struct Route {
    std::vector<Vec2> waypoints;
    std::vector<double> cum_length;  // cumulative, starting at 0
    double total_length = 0.0;

    Vec2 position_at(double offset) const {
        if (total_length <= 0.0) return waypoints.front();
        double s = std::fmod(offset, total_length);
        if (s < 0.0) s += total_length;
        for (std::size_t i = 1; i < waypoints.size(); ++i) {
            if (s <= cum_length[i]) {
                const double seg = cum_length[i] - cum_length[i - 1];
                const double t = seg > 0.0 ? (s - cum_length[i - 1]) / seg : 0.0;
                return {waypoints[i - 1].x + t * (waypoints[i].x - waypoints[i - 1].x),
                        waypoints[i - 1].y + t * (waypoints[i].y - waypoints[i - 1].y)};
            }
        }
        return waypoints.back();
    }
};

}  // namespace

void ScenarioSpec::validate() const {
    std::vector<std::string> bad;
    auto require = [&](bool ok, const char* field) {
        if (!ok) bad.emplace_back(field);
    };
    require(vehicle_count > 0, "vehicle_count");
    require(penetration_ratio > 0.0 && penetration_ratio <= 1.0, "penetration_ratio");
    require(episode_slots > 0, "episode_slots");
    require(slot_duration_s > 0.0, "slot_duration_s");
    require(area_width_m > 0.0, "area_width_m");
    require(area_height_m > 0.0, "area_height_m");
    require(route_count > 0, "route_count");
    require(waypoints_per_route >= 2, "waypoints_per_route");
    require(speed_mps.min > 0.0 && speed_mps.max >= speed_mps.min, "speed_mps");
    require(server_count > 0, "server_count");
    require(ap_range_m > 0.0, "ap_range_m");
    auto cap_ok = [](const Range& r) { return r.min > 0.0 && r.max >= r.min; };
    require(cap_ok(cpu_capacity_ops), "cpu_capacity_ops");
    require(cap_ok(gpu_capacity_ops), "gpu_capacity_ops");
    require(cap_ok(store_capacity_ops), "store_capacity_ops");
    require(reserved_frac.min >= 0.0 && reserved_frac.max >= reserved_frac.min &&
                reserved_frac.max <= 1.0,
            "reserved_frac");
    require(cross_hops.min >= 1 && cross_hops.max >= cross_hops.min, "cross_hops");
    require(own_hops >= 1, "own_hops");
    require(payload.status_bits >= 0.0, "payload.status_bits");
    require(payload.sensing_log_sigma >= 0.0, "payload.sensing_log_sigma");
    require(ops.cpu_ops_per_bit >= 0.0 && ops.gpu_ops_per_bit >= 0.0 &&
                ops.store_ops_per_bit >= 0.0,
            "ops.per_bit");
    require(ops.cpu_ops_per_bit + ops.gpu_ops_per_bit + ops.store_ops_per_bit > 0.0,
            "ops.per_bit_sum");
    require(ops.noise_frac >= 0.0 && ops.noise_frac < 1.0, "ops.noise_frac");
    require(tx_power_gain_w.min > 0.0 && tx_power_gain_w.max >= tx_power_gain_w.min,
            "tx_power_gain_w");
    require(nominal_service_time_s > 0.0, "nominal_service_time_s");
    require(server_overrides.empty() ||
                server_overrides.size() == static_cast<std::size_t>(server_count),
            "server_overrides");
    try {
        validate_network_params(network);
    } catch (const ValidationError& e) {
        bad.emplace_back(std::string("network: ") + e.what());
    }
    if (!bad.empty()) {
        std::ostringstream msg;
        msg << "invalid scenario spec field(s):";
        for (const auto& f : bad) msg << ' ' << f;
        throw ValidationError(msg.str());
    }
}

namespace {

Topology build_topology(const ScenarioSpec& spec) {
    Topology topo;
    topo.params = spec.network;

    Rng server_rng(derive_seed(spec.seed, kKeyServers));
    std::vector<double> tiers(spec.server_count);
    for (int e = 0; e < spec.server_count; ++e) {
        // hierarchy tier: low index = small servers near the APs, high index =
        // big servers deeper in the network; decoupled ranges draw iid instead
        const double tier =
            spec.hop_capacity_coupling
                ? (e + 0.5) / static_cast<double>(spec.server_count)
                : server_rng.uniform();
        tiers[e] = tier;
        auto draw_cap = [&](const Range& r) {
            const double jitter = server_rng.uniform(-0.15, 0.15);
            const double t = std::clamp(tier + jitter, 0.0, 1.0);
            return std::round(lerp(r, t));
        };
        ResourceVec cap{draw_cap(spec.cpu_capacity_ops), draw_cap(spec.gpu_capacity_ops),
                        draw_cap(spec.store_capacity_ops)};
        double res_frac = server_rng.uniform(spec.reserved_frac.min, spec.reserved_frac.max);

        if (!spec.server_overrides.empty()) {
            const auto& ov = spec.server_overrides[static_cast<std::size_t>(e)];
            if (ov.capacity) cap = *ov.capacity;
            if (ov.reserved_frac) res_frac = *ov.reserved_frac;
        }
        ResourceVec reserved{std::round(cap.cpu * res_frac), std::round(cap.gpu * res_frac),
                             std::round(cap.store * res_frac)};
        topo.servers.emplace_back(static_cast<std::size_t>(e), cap, reserved);
    }

    Rng ap_rng(derive_seed(spec.seed, kKeyAps));
    for (int e = 0; e < spec.server_count; ++e) {
        AccessPoint ap;
        ap.id = static_cast<std::size_t>(e);
        ap.owner = static_cast<std::size_t>(e);
        ap.position = {ap_rng.uniform(0.0, spec.area_width_m),
                       ap_rng.uniform(0.0, spec.area_height_m)};
        ap.range = spec.ap_range_m;
        ap.hops_to.resize(static_cast<std::size_t>(spec.server_count));
        for (int f = 0; f < spec.server_count; ++f) {
            int hops;
            if (f == e) {
                hops = spec.own_hops;
            } else if (spec.hop_capacity_coupling) {
                const double base = spec.cross_hops.min +
                                    tiers[f] * (spec.cross_hops.max - spec.cross_hops.min);
                const int jitter = static_cast<int>(ap_rng.uniform_int(-1, 1));
                hops = std::clamp(static_cast<int>(std::lround(base)) + jitter,
                                  spec.cross_hops.min, spec.cross_hops.max);
            } else {
                hops = static_cast<int>(
                    ap_rng.uniform_int(spec.cross_hops.min, spec.cross_hops.max));
            }
            if (!spec.server_overrides.empty() && f != e) {
                const auto& ov = spec.server_overrides[static_cast<std::size_t>(f)];
                if (ov.cross_hops) hops = *ov.cross_hops;
            }
            ap.hops_to[static_cast<std::size_t>(f)] = hops;
        }
        topo.aps.push_back(std::move(ap));
    }

    topo.validate();
    return topo;
}

std::vector<Route> build_routes(const ScenarioSpec& spec) {
    Rng rng(derive_seed(spec.seed, kKeyRoutes));
    std::vector<Route> routes(static_cast<std::size_t>(spec.route_count));
    for (auto& route : routes) {
        route.waypoints.resize(static_cast<std::size_t>(spec.waypoints_per_route));
        for (auto& wp : route.waypoints)
            wp = {rng.uniform(0.0, spec.area_width_m), rng.uniform(0.0, spec.area_height_m)};
        route.cum_length.resize(route.waypoints.size(), 0.0);
        for (std::size_t i = 1; i < route.waypoints.size(); ++i)
            route.cum_length[i] = route.cum_length[i - 1] +
                                  distance(route.waypoints[i - 1], route.waypoints[i]);
        route.total_length = route.cum_length.back();
    }
    return routes;
}

}  // namespace

Scenario generate_scenario(const ScenarioSpec& spec) {
    spec.validate();

    Scenario scenario;
    scenario.spec = spec;
    scenario.topology = build_topology(spec);
    const auto routes = build_routes(spec);

    const std::size_t n = static_cast<std::size_t>(spec.vehicle_count);
    const std::size_t cav_count = static_cast<std::size_t>(
        std::lround(spec.vehicle_count * spec.penetration_ratio));

    // per-vehicle sampling priority; the k lowest become CAVs, so CAV sets
    // are nested across penetration ratios for a fixed seed
    std::vector<double> priority(n);
    std::vector<std::size_t> order(n);
    for (std::size_t v = 0; v < n; ++v) {
        Rng pick(derive_seed(spec.seed, kKeyVehicleBase + 7 * v));
        priority[v] = pick.uniform();
    }
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return priority[a] < priority[b] || (priority[a] == priority[b] && a < b);
    });
    std::vector<bool> is_cav(n, false);
    for (std::size_t i = 0; i < cav_count && i < n; ++i) is_cav[order[i]] = true;

    scenario.traces.reserve(n);
    for (std::size_t v = 0; v < n; ++v) {
        Rng rng(derive_seed(spec.seed, kKeyVehicleBase + 7 * v + 1));
        VehicleTrace trace;
        trace.vehicle_id = v;
        trace.is_cav = is_cav[v];

        const auto& route = routes[static_cast<std::size_t>(
            rng.uniform_int(0, spec.route_count - 1))];
        const double speed = rng.uniform(spec.speed_mps.min, spec.speed_mps.max);
        const double start = rng.uniform() * std::max(route.total_length, 1.0);
        const double gain = rng.uniform(spec.tx_power_gain_w.min, spec.tx_power_gain_w.max);

        trace.positions.resize(static_cast<std::size_t>(spec.episode_slots));
        for (int t = 0; t < spec.episode_slots; ++t)
            trace.positions[static_cast<std::size_t>(t)] =
                route.position_at(start + speed * spec.slot_duration_s * t);

        if (trace.is_cav) {
            for (int t = 0; t < spec.episode_slots; ++t) {
                const Vec2 pos = trace.positions[static_cast<std::size_t>(t)];
                // payload/op draws happen whether or not the slot connects,
                // keeping a vehicle's stream independent of AP geometry
                const double sensing = std::round(rng.lognormal(
                    spec.payload.sensing_log_mean, spec.payload.sensing_log_sigma));
                auto draw_ops = [&](double per_bit, double payload) {
                    const double noise = rng.uniform(-spec.ops.noise_frac, spec.ops.noise_frac);
                    return std::max(1.0, std::round(per_bit * payload * (1.0 + noise)));
                };
                const double payload = spec.payload.status_bits + sensing;
                CavSample s;
                s.vehicle_id = v;
                s.time_slot = t;
                s.status_bits = std::round(spec.payload.status_bits);
                s.sensing_bits = sensing;
                s.position = pos;
                s.tx_power_gain_w = gain;
                s.cpu_ops = draw_ops(spec.ops.cpu_ops_per_bit, payload);
                s.gpu_ops = draw_ops(spec.ops.gpu_ops_per_bit, payload);
                s.store_ops = draw_ops(spec.ops.store_ops_per_bit, payload);
                if (!nearest_ap_in_range(pos, scenario.topology.aps)) continue;
                s.validate();
                trace.samples.push_back(std::move(s));
            }
        }
        scenario.traces.push_back(std::move(trace));
    }
    return scenario;
}

std::vector<QueueEntry> samples_at(const Scenario& scenario, int slot) {
    if (slot < 0 || slot >= scenario.spec.episode_slots)
        throw ContractError("samples_at: slot " + std::to_string(slot) +
                            " outside episode");
    std::vector<QueueEntry> out;
    for (const auto& trace : scenario.traces) {
        if (!trace.is_cav) continue;
        const auto it = std::find_if(trace.samples.begin(), trace.samples.end(),
                                     [&](const CavSample& s) { return s.time_slot == slot; });
        if (it == trace.samples.end()) continue;
        const auto ap = nearest_ap_in_range(it->position, scenario.topology.aps);
        if (!ap) continue;
        out.push_back({*it, *ap});
    }
    return out;
}

std::size_t count_samples(const std::vector<VehicleTrace>& traces) {
    std::size_t n = 0;
    for (const auto& t : traces) n += t.samples.size();
    return n;
}

}  // namespace edgetwin
