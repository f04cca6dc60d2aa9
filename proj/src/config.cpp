#include "edgetwin/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace edgetwin {

namespace {

// Reads known keys and rejects the rest, so config typos fail loudly.
class StrictObject {
public:
    StrictObject(const nlohmann::json& j, std::string context)
        : j_(j), context_(std::move(context)) {
        if (!j.is_object())
            throw ValidationError(context_ + ": expected a JSON object");
    }

    bool has(const char* key) const { return j_.contains(key); }

    template <typename T>
    void get(const char* key, T& target) {
        seen_.insert(key);
        if (!j_.contains(key)) return;
        try {
            target = j_.at(key).get<T>();
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(context_ + "." + key + ": " + e.what());
        }
    }

    const nlohmann::json* sub(const char* key) {
        seen_.insert(key);
        if (!j_.contains(key)) return nullptr;
        return &j_.at(key);
    }

    void finish() const {
        std::vector<std::string> unknown;
        for (const auto& [key, value] : j_.items())
            if (!seen_.contains(key)) unknown.push_back(key);
        if (!unknown.empty()) {
            std::ostringstream msg;
            msg << context_ << ": unknown key(s):";
            for (const auto& k : unknown) msg << ' ' << k;
            throw ValidationError(msg.str());
        }
    }

private:
    const nlohmann::json& j_;
    std::string context_;
    std::set<std::string> seen_;
};

Range range_from_json(const nlohmann::json& j, const std::string& context) {
    StrictObject o(j, context);
    Range r;
    o.get("min", r.min);
    o.get("max", r.max);
    o.finish();
    return r;
}

IntRange int_range_from_json(const nlohmann::json& j, const std::string& context) {
    StrictObject o(j, context);
    IntRange r;
    o.get("min", r.min);
    o.get("max", r.max);
    o.finish();
    return r;
}

nlohmann::json range_to_json(const Range& r) {
    return {{"min", r.min}, {"max", r.max}};
}

nlohmann::json int_range_to_json(const IntRange& r) {
    return {{"min", r.min}, {"max", r.max}};
}

ResourceVec resource_from_json(const nlohmann::json& j, const std::string& context) {
    if (!j.is_array() || j.size() != 3)
        throw ValidationError(context + ": expected [cpu, gpu, store]");
    return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

nlohmann::json resource_to_json(const ResourceVec& v) {
    return {v.cpu, v.gpu, v.store};
}

}  // namespace

nlohmann::json spec_to_json(const ScenarioSpec& spec) {
    nlohmann::json j;
    j["seed"] = spec.seed;
    j["vehicle_count"] = spec.vehicle_count;
    j["penetration_ratio"] = spec.penetration_ratio;
    j["episode_slots"] = spec.episode_slots;
    j["slot_duration_s"] = spec.slot_duration_s;
    j["area_width_m"] = spec.area_width_m;
    j["area_height_m"] = spec.area_height_m;
    j["route_count"] = spec.route_count;
    j["waypoints_per_route"] = spec.waypoints_per_route;
    j["speed_mps"] = range_to_json(spec.speed_mps);
    j["server_count"] = spec.server_count;
    j["ap_range_m"] = spec.ap_range_m;
    j["cpu_capacity_ops"] = range_to_json(spec.cpu_capacity_ops);
    j["gpu_capacity_ops"] = range_to_json(spec.gpu_capacity_ops);
    j["store_capacity_ops"] = range_to_json(spec.store_capacity_ops);
    j["reserved_frac"] = range_to_json(spec.reserved_frac);
    j["cross_hops"] = int_range_to_json(spec.cross_hops);
    j["own_hops"] = spec.own_hops;
    j["hop_capacity_coupling"] = spec.hop_capacity_coupling;
    j["payload"] = {{"status_bits", spec.payload.status_bits},
                    {"sensing_log_mean", spec.payload.sensing_log_mean},
                    {"sensing_log_sigma", spec.payload.sensing_log_sigma}};
    j["ops"] = {{"cpu_ops_per_bit", spec.ops.cpu_ops_per_bit},
                {"gpu_ops_per_bit", spec.ops.gpu_ops_per_bit},
                {"store_ops_per_bit", spec.ops.store_ops_per_bit},
                {"noise_frac", spec.ops.noise_frac}};
    j["tx_power_gain_w"] = range_to_json(spec.tx_power_gain_w);
    j["network"] = {{"bandwidth_hz", spec.network.bandwidth_hz},
                    {"noise_power_w", spec.network.noise_power_w},
                    {"path_loss_exponent", spec.network.path_loss_exponent},
                    {"per_hop_delay_s_per_bit", spec.network.per_hop_delay_s_per_bit},
                    {"sync_threshold_s", spec.network.sync_threshold_s},
                    {"min_distance_m", spec.network.min_distance_m}};
    j["nominal_service_time_s"] = spec.nominal_service_time_s;
    if (!spec.server_overrides.empty()) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& ov : spec.server_overrides) {
            nlohmann::json o = nlohmann::json::object();
            if (ov.capacity) o["capacity"] = resource_to_json(*ov.capacity);
            if (ov.reserved_frac) o["reserved_frac"] = *ov.reserved_frac;
            if (ov.cross_hops) o["cross_hops"] = *ov.cross_hops;
            arr.push_back(std::move(o));
        }
        j["server_overrides"] = std::move(arr);
    }
    return j;
}

ScenarioSpec spec_from_json(const nlohmann::json& j) {
    ScenarioSpec spec;
    StrictObject o(j, "scenario");
    o.get("seed", spec.seed);
    o.get("vehicle_count", spec.vehicle_count);
    o.get("penetration_ratio", spec.penetration_ratio);
    o.get("episode_slots", spec.episode_slots);
    o.get("slot_duration_s", spec.slot_duration_s);
    o.get("area_width_m", spec.area_width_m);
    o.get("area_height_m", spec.area_height_m);
    o.get("route_count", spec.route_count);
    o.get("waypoints_per_route", spec.waypoints_per_route);
    if (const auto* s = o.sub("speed_mps"))
        spec.speed_mps = range_from_json(*s, "scenario.speed_mps");
    o.get("server_count", spec.server_count);
    o.get("ap_range_m", spec.ap_range_m);
    if (const auto* s = o.sub("cpu_capacity_ops"))
        spec.cpu_capacity_ops = range_from_json(*s, "scenario.cpu_capacity_ops");
    if (const auto* s = o.sub("gpu_capacity_ops"))
        spec.gpu_capacity_ops = range_from_json(*s, "scenario.gpu_capacity_ops");
    if (const auto* s = o.sub("store_capacity_ops"))
        spec.store_capacity_ops = range_from_json(*s, "scenario.store_capacity_ops");
    if (const auto* s = o.sub("reserved_frac"))
        spec.reserved_frac = range_from_json(*s, "scenario.reserved_frac");
    if (const auto* s = o.sub("cross_hops"))
        spec.cross_hops = int_range_from_json(*s, "scenario.cross_hops");
    o.get("own_hops", spec.own_hops);
    o.get("hop_capacity_coupling", spec.hop_capacity_coupling);
    if (const auto* s = o.sub("payload")) {
        StrictObject p(*s, "scenario.payload");
        p.get("status_bits", spec.payload.status_bits);
        p.get("sensing_log_mean", spec.payload.sensing_log_mean);
        p.get("sensing_log_sigma", spec.payload.sensing_log_sigma);
        p.finish();
    }
    if (const auto* s = o.sub("ops")) {
        StrictObject p(*s, "scenario.ops");
        p.get("cpu_ops_per_bit", spec.ops.cpu_ops_per_bit);
        p.get("gpu_ops_per_bit", spec.ops.gpu_ops_per_bit);
        p.get("store_ops_per_bit", spec.ops.store_ops_per_bit);
        p.get("noise_frac", spec.ops.noise_frac);
        p.finish();
    }
    if (const auto* s = o.sub("tx_power_gain_w"))
        spec.tx_power_gain_w = range_from_json(*s, "scenario.tx_power_gain_w");
    if (const auto* s = o.sub("network")) {
        StrictObject p(*s, "scenario.network");
        p.get("bandwidth_hz", spec.network.bandwidth_hz);
        p.get("noise_power_w", spec.network.noise_power_w);
        p.get("path_loss_exponent", spec.network.path_loss_exponent);
        p.get("per_hop_delay_s_per_bit", spec.network.per_hop_delay_s_per_bit);
        p.get("sync_threshold_s", spec.network.sync_threshold_s);
        p.get("min_distance_m", spec.network.min_distance_m);
        p.finish();
    }
    o.get("nominal_service_time_s", spec.nominal_service_time_s);
    if (const auto* s = o.sub("server_overrides")) {
        if (!s->is_array())
            throw ValidationError("scenario.server_overrides: expected an array");
        for (std::size_t i = 0; i < s->size(); ++i) {
            StrictObject p(s->at(i),
                           "scenario.server_overrides[" + std::to_string(i) + "]");
            ServerOverride ov;
            if (p.has("capacity")) {
                if (const auto* c = p.sub("capacity"))
                    ov.capacity = resource_from_json(
                        *c, "scenario.server_overrides.capacity");
            }
            if (p.has("reserved_frac")) {
                double f = 0.0;
                p.get("reserved_frac", f);
                ov.reserved_frac = f;
            }
            if (p.has("cross_hops")) {
                int h = 0;
                p.get("cross_hops", h);
                ov.cross_hops = h;
            }
            p.finish();
            spec.server_overrides.push_back(std::move(ov));
        }
    }
    o.finish();
    return spec;
}

RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig config;
    StrictObject o(j, "config");
    if (const auto* s = o.sub("scenario")) config.scenario = spec_from_json(*s);
    if (const auto* s = o.sub("reward")) {
        StrictObject p(*s, "reward");
        p.get("delta_pos", config.reward.delta_pos);
        p.get("delta_neg", config.reward.delta_neg);
        p.get("epsilon_weight", config.reward.epsilon_weight);
        p.get("zeta_weight", config.reward.zeta_weight);
        p.finish();
    }
    if (const auto* s = o.sub("norm")) {
        StrictObject p(*s, "norm");
        NormBounds b = NormBounds::from_spec(config.scenario);
        p.get("delay_cap_s", b.delay_cap_s);
        if (const auto* c = p.sub("cap_ops"))
            b.cap_ops = resource_from_json(*c, "norm.cap_ops");
        if (const auto* c = p.sub("task_ops"))
            b.task_ops = resource_from_json(*c, "norm.task_ops");
        p.finish();
        config.norm = b;
    }
    if (const auto* s = o.sub("dqn")) {
        StrictObject p(*s, "dqn");
        p.get("hidden_sizes", config.dqn.hidden_sizes);
        p.get("learning_rate", config.dqn.learning_rate);
        p.get("gamma", config.dqn.gamma);
        p.get("replay_capacity", config.dqn.replay_capacity);
        p.get("batch_size", config.dqn.batch_size);
        p.get("target_sync_interval", config.dqn.target_sync_interval);
        p.get("epsilon_start", config.dqn.epsilon_start);
        p.get("epsilon_end", config.dqn.epsilon_end);
        p.get("epsilon_decay_steps", config.dqn.epsilon_decay_steps);
        p.get("grad_clip_norm", config.dqn.grad_clip_norm);
        p.get("double_dqn", config.dqn.double_dqn);
        p.get("seed", config.dqn.seed);
        p.finish();
    }
    std::size_t eval_episodes = 5;
    if (const auto* s = o.sub("run")) {
        StrictObject p(*s, "run");
        p.get("episodes", config.train_episodes);
        p.get("eval_seeds", config.eval_seeds);
        p.get("eval_episodes", eval_episodes);
        p.get("policies", config.policies);
        p.get("pr_values", config.pr_values);
        p.get("out_dir", config.out_dir);
        p.get("checkpoint", config.checkpoint);
        p.get("resume_from", config.resume_from);
        p.get("scenario_dir", config.scenario_dir);
        p.get("workers", config.workers);
        p.finish();
    }
    o.finish();

    if (config.eval_seeds.empty()) {
        for (std::size_t i = 0; i < eval_episodes; ++i)
            config.eval_seeds.push_back(config.scenario.seed + i);
    }
    return config;
}

nlohmann::json config_to_json(const RunConfig& config) {
    nlohmann::json j;
    j["scenario"] = spec_to_json(config.scenario);
    j["reward"] = {{"delta_pos", config.reward.delta_pos},
                   {"delta_neg", config.reward.delta_neg},
                   {"epsilon_weight", config.reward.epsilon_weight},
                   {"zeta_weight", config.reward.zeta_weight}};
    const NormBounds b = config.resolved_norm();
    j["norm"] = {{"delay_cap_s", b.delay_cap_s},
                 {"cap_ops", resource_to_json(b.cap_ops)},
                 {"task_ops", resource_to_json(b.task_ops)}};
    j["dqn"] = {{"hidden_sizes", config.dqn.hidden_sizes},
                {"learning_rate", config.dqn.learning_rate},
                {"gamma", config.dqn.gamma},
                {"replay_capacity", config.dqn.replay_capacity},
                {"batch_size", config.dqn.batch_size},
                {"target_sync_interval", config.dqn.target_sync_interval},
                {"epsilon_start", config.dqn.epsilon_start},
                {"epsilon_end", config.dqn.epsilon_end},
                {"epsilon_decay_steps", config.dqn.epsilon_decay_steps},
                {"grad_clip_norm", config.dqn.grad_clip_norm},
                {"double_dqn", config.dqn.double_dqn},
                {"seed", config.dqn.seed}};
    j["run"] = {{"episodes", config.train_episodes},
                {"eval_seeds", config.eval_seeds},
                {"policies", config.policies},
                {"pr_values", config.pr_values},
                {"out_dir", config.out_dir},
                {"checkpoint", config.checkpoint},
                {"resume_from", config.resume_from},
                {"scenario_dir", config.scenario_dir},
                {"workers", config.workers}};
    return j;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("malformed JSON in " + path + ": " + e.what());
    }
    return config_from_json(j);
}

void apply_env_overrides(RunConfig& config) {
    if (const char* v = std::getenv("EDGETWIN_SEED"))
        config.scenario.seed = std::strtoull(v, nullptr, 10);
    if (const char* v = std::getenv("EDGETWIN_OUT")) config.out_dir = v;
    if (const char* v = std::getenv("EDGETWIN_POLICY")) config.policies = {v};
    if (const char* v = std::getenv("EDGETWIN_EPISODES"))
        config.train_episodes = std::strtoull(v, nullptr, 10);
    if (const char* v = std::getenv("EDGETWIN_PR"))
        config.pr_values = {std::strtod(v, nullptr)};
}

std::string config_hash(const RunConfig& config) {
    // nlohmann stores object keys sorted, so dump() is canonical; the output
    // directory is not an input, so it does not contribute
    nlohmann::json j = config_to_json(config);
    j["run"].erase("out_dir");
    const std::string dump = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace edgetwin
