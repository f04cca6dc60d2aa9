#include "edgetwin/scenario_io.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "edgetwin/config.hpp"

namespace edgetwin {

namespace {

nlohmann::json topology_to_json(const Topology& topo) {
    nlohmann::json j;
    j["params"] = {{"bandwidth_hz", topo.params.bandwidth_hz},
                   {"noise_power_w", topo.params.noise_power_w},
                   {"path_loss_exponent", topo.params.path_loss_exponent},
                   {"per_hop_delay_s_per_bit", topo.params.per_hop_delay_s_per_bit},
                   {"sync_threshold_s", topo.params.sync_threshold_s},
                   {"min_distance_m", topo.params.min_distance_m}};
    nlohmann::json servers = nlohmann::json::array();
    for (const auto& s : topo.servers) {
        servers.push_back(
            {{"id", s.id()},
             {"capacity", {s.capacity().cpu, s.capacity().gpu, s.capacity().store}},
             {"reserved", {s.reserved().cpu, s.reserved().gpu, s.reserved().store}}});
    }
    j["servers"] = std::move(servers);
    nlohmann::json aps = nlohmann::json::array();
    for (const auto& ap : topo.aps) {
        aps.push_back({{"id", ap.id},
                       {"owner", ap.owner},
                       {"position", {ap.position.x, ap.position.y}},
                       {"range", ap.range},
                       {"hops_to", ap.hops_to}});
    }
    j["aps"] = std::move(aps);
    return j;
}

Topology topology_from_json(const nlohmann::json& j) {
    Topology topo;
    const auto& p = j.at("params");
    topo.params.bandwidth_hz = p.at("bandwidth_hz").get<double>();
    topo.params.noise_power_w = p.at("noise_power_w").get<double>();
    topo.params.path_loss_exponent = p.at("path_loss_exponent").get<double>();
    topo.params.per_hop_delay_s_per_bit = p.at("per_hop_delay_s_per_bit").get<double>();
    topo.params.sync_threshold_s = p.at("sync_threshold_s").get<double>();
    topo.params.min_distance_m = p.at("min_distance_m").get<double>();
    for (const auto& s : j.at("servers")) {
        const auto& cap = s.at("capacity");
        const auto& res = s.at("reserved");
        topo.servers.emplace_back(
            s.at("id").get<std::size_t>(),
            ResourceVec{cap.at(0).get<double>(), cap.at(1).get<double>(),
                        cap.at(2).get<double>()},
            ResourceVec{res.at(0).get<double>(), res.at(1).get<double>(),
                        res.at(2).get<double>()});
    }
    for (const auto& a : j.at("aps")) {
        AccessPoint ap;
        ap.id = a.at("id").get<std::size_t>();
        ap.owner = a.at("owner").get<std::size_t>();
        ap.position = {a.at("position").at(0).get<double>(),
                       a.at("position").at(1).get<double>()};
        ap.range = a.at("range").get<double>();
        ap.hops_to = a.at("hops_to").get<std::vector<int>>();
        topo.aps.push_back(std::move(ap));
    }
    topo.validate();
    return topo;
}

nlohmann::json sample_to_json(const CavSample& s) {
    return {{"slot", s.time_slot},
            {"status_bits", s.status_bits},
            {"sensing_bits", s.sensing_bits},
            {"position", {s.position.x, s.position.y}},
            {"tx_power_gain_w", s.tx_power_gain_w},
            {"cpu_ops", s.cpu_ops},
            {"gpu_ops", s.gpu_ops},
            {"store_ops", s.store_ops}};
}

CavSample sample_from_json(const nlohmann::json& j, std::size_t vehicle_id) {
    CavSample s;
    s.vehicle_id = vehicle_id;
    s.time_slot = j.at("slot").get<std::int64_t>();
    s.status_bits = j.at("status_bits").get<double>();
    s.sensing_bits = j.at("sensing_bits").get<double>();
    s.position = {j.at("position").at(0).get<double>(),
                  j.at("position").at(1).get<double>()};
    s.tx_power_gain_w = j.at("tx_power_gain_w").get<double>();
    s.cpu_ops = j.at("cpu_ops").get<double>();
    s.gpu_ops = j.at("gpu_ops").get<double>();
    s.store_ops = j.at("store_ops").get<double>();
    s.validate();
    return s;
}

}  // namespace

std::string trace_to_line(const VehicleTrace& trace) {
    nlohmann::json j;
    j["vehicle"] = trace.vehicle_id;
    j["is_cav"] = trace.is_cav;
    nlohmann::json pos = nlohmann::json::array();
    for (const auto& p : trace.positions) pos.push_back({p.x, p.y});
    j["positions"] = std::move(pos);
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& s : trace.samples) samples.push_back(sample_to_json(s));
    j["samples"] = std::move(samples);
    return j.dump();
}

VehicleTrace trace_from_line(const std::string& line) {
    const auto j = nlohmann::json::parse(line);
    VehicleTrace trace;
    trace.vehicle_id = j.at("vehicle").get<std::size_t>();
    trace.is_cav = j.at("is_cav").get<bool>();
    for (const auto& p : j.at("positions"))
        trace.positions.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    for (const auto& s : j.at("samples"))
        trace.samples.push_back(sample_from_json(s, trace.vehicle_id));
    return trace;
}

void save_scenario(const std::string& dir, const Scenario& scenario) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir + "/spec.json", std::ios::trunc);
        if (!out) throw ValidationError("cannot write " + dir + "/spec.json");
        out << spec_to_json(scenario.spec).dump(2) << '\n';
    }
    {
        std::ofstream out(dir + "/topology.json", std::ios::trunc);
        if (!out) throw ValidationError("cannot write " + dir + "/topology.json");
        out << topology_to_json(scenario.topology).dump(2) << '\n';
    }
    {
        std::ofstream out(dir + "/traces.jsonl", std::ios::trunc);
        if (!out) throw ValidationError("cannot write " + dir + "/traces.jsonl");
        for (const auto& trace : scenario.traces) out << trace_to_line(trace) << '\n';
    }
}

Scenario load_scenario(const std::string& dir) {
    Scenario scenario;
    {
        std::ifstream in(dir + "/spec.json");
        if (!in) throw ValidationError("cannot read " + dir + "/spec.json");
        nlohmann::json j;
        in >> j;
        scenario.spec = spec_from_json(j);
    }
    {
        std::ifstream in(dir + "/topology.json");
        if (!in) throw ValidationError("cannot read " + dir + "/topology.json");
        nlohmann::json j;
        in >> j;
        scenario.topology = topology_from_json(j);
    }
    {
        std::ifstream in(dir + "/traces.jsonl");
        if (!in) throw ValidationError("cannot read " + dir + "/traces.jsonl");
        std::string line;
        while (std::getline(in, line))
            if (!line.empty()) scenario.traces.push_back(trace_from_line(line));
    }
    return scenario;
}

}  // namespace edgetwin
