#include "edgetwin/tasking.hpp"

#include <algorithm>
#include <string>

#include <json.hpp>

namespace edgetwin {

DtTask form_task(const CavSample& sample, const AccessPoint& ap) {
    DtTask task;
    task.cpu_ops = sample.cpu_ops;
    task.gpu_ops = sample.gpu_ops;
    task.store_ops = sample.store_ops;
    task.payload_bits = payload_size(sample);
    task.src = {sample.vehicle_id, ap.id};
    return task;
}

ResourceVec demand_for(const DtTask& task, double nominal_service_time_s) {
    return {task.cpu_ops / nominal_service_time_s,
            task.gpu_ops / nominal_service_time_s,
            task.store_ops / nominal_service_time_s};
}

QueueEntry TaskQueue::pop() {
    QueueEntry e = std::move(entries_.front());
    entries_.pop_front();
    return e;
}

TaskBoard::TaskBoard(std::vector<EdgeServer>& servers, double nominal_service_time_s)
    : servers_(&servers), nominal_service_time_s_(nominal_service_time_s) {
    if (!(nominal_service_time_s > 0.0))
        throw ValidationError("nominal_service_time_s must be > 0");
}

bool TaskBoard::admissible(const DtTask& task, const EdgeServer& server) const {
    const ResourceVec d = demand_for(task, nominal_service_time_s_);
    // grouped exactly as the post-admit counters will be computed
    const ResourceVec used_after = server.reserved() + (server.held() + d);
    return used_after.fits_within(server.capacity());
}

void TaskBoard::recompute_held(std::size_t server_id) {
    ResourceVec held{};
    for (const auto& a : live_)
        if (a.server == server_id) held = held + a.demand;
    (*servers_)[server_id].set_held(held);
}

const Assignment& TaskBoard::admit(DtTask& task, EdgeServer& server, double now_s,
                                   double release_after_s) {
    if (task.dst.has_value())
        throw ContractError("admit: task already assigned to server " +
                            std::to_string(*task.dst));
    if (!admissible(task, server))
        throw ContractError("admit: task from vehicle " +
                            std::to_string(task.src.vehicle_id) +
                            " is not admissible on server " +
                            std::to_string(server.id()));
    if (!(release_after_s > 0.0))
        throw ContractError("admit: release_after_s must be > 0");

    task.dst = server.id();
    Assignment a;
    a.id = next_id_++;
    a.task = task;
    a.server = server.id();
    a.demand = demand_for(task, nominal_service_time_s_);
    a.admit_time_s = now_s;
    a.release_time_s = now_s + release_after_s;
    live_.push_back(a);
    recompute_held(server.id());

    log_.push_back({EventRecord::Kind::Admit, now_s, a.server, task.src.vehicle_id,
                    a.id, a.demand, a.release_time_s});
    return live_.back();
}

void TaskBoard::drop(const DtTask& task, std::size_t server, double now_s) {
    log_.push_back({EventRecord::Kind::Drop, now_s, server, task.src.vehicle_id, 0,
                    {}, 0.0});
}

std::size_t TaskBoard::release_due(double now_s) {
    std::vector<Assignment> due;
    for (const auto& a : live_)
        if (a.release_time_s <= now_s) due.push_back(a);
    if (due.empty()) return 0;

    std::erase_if(live_, [&](const Assignment& a) { return a.release_time_s <= now_s; });
    for (const auto& a : due) {
        log_.push_back({EventRecord::Kind::Release, now_s, a.server,
                        a.task.src.vehicle_id, a.id, a.demand, 0.0});
    }
    std::vector<bool> touched(servers_->size(), false);
    for (const auto& a : due) touched[a.server] = true;
    for (std::size_t e = 0; e < touched.size(); ++e)
        if (touched[e]) recompute_held(e);
    return due.size();
}

std::vector<std::vector<ResourceVec>> replay_event_log(
    const std::vector<EventRecord>& log, const std::vector<EdgeServer>& initial) {
    struct Live {
        std::uint64_t id;
        std::size_t server;
        ResourceVec demand;
    };
    std::vector<Live> live;
    auto held_of = [&](std::size_t server_id) {
        ResourceVec held{};
        for (const auto& a : live)
            if (a.server == server_id) held = held + a.demand;
        return held;
    };

    std::vector<std::vector<ResourceVec>> snapshots;
    std::vector<ResourceVec> used(initial.size());
    for (std::size_t e = 0; e < initial.size(); ++e) used[e] = initial[e].used();

    for (const auto& ev : log) {
        switch (ev.kind) {
            case EventRecord::Kind::Admit:
                live.push_back({ev.assignment_id, ev.server, ev.demand});
                used[ev.server] = initial[ev.server].reserved() + held_of(ev.server);
                break;
            case EventRecord::Kind::Release:
                std::erase_if(live, [&](const Live& a) { return a.id == ev.assignment_id; });
                used[ev.server] = initial[ev.server].reserved() + held_of(ev.server);
                break;
            case EventRecord::Kind::Drop:
                break;
        }
        snapshots.push_back(used);
    }
    return snapshots;
}

std::string event_to_line(const EventRecord& ev) {
    nlohmann::json j;
    switch (ev.kind) {
        case EventRecord::Kind::Admit: j["kind"] = "admit"; break;
        case EventRecord::Kind::Release: j["kind"] = "release"; break;
        case EventRecord::Kind::Drop: j["kind"] = "drop"; break;
    }
    j["time"] = ev.time_s;
    j["server"] = ev.server;
    j["vehicle"] = ev.vehicle;
    if (ev.kind != EventRecord::Kind::Drop) {
        j["id"] = ev.assignment_id;
        j["demand"] = {ev.demand.cpu, ev.demand.gpu, ev.demand.store};
    }
    if (ev.kind == EventRecord::Kind::Admit) j["release_time"] = ev.release_time_s;
    return j.dump();
}

EventRecord event_from_line(const std::string& line) {
    const auto j = nlohmann::json::parse(line);
    EventRecord ev;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "admit") ev.kind = EventRecord::Kind::Admit;
    else if (kind == "release") ev.kind = EventRecord::Kind::Release;
    else if (kind == "drop") ev.kind = EventRecord::Kind::Drop;
    else throw ValidationError("unknown event kind: " + kind);
    ev.time_s = j.at("time").get<double>();
    ev.server = j.at("server").get<std::size_t>();
    ev.vehicle = j.at("vehicle").get<std::size_t>();
    if (ev.kind != EventRecord::Kind::Drop) {
        ev.assignment_id = j.at("id").get<std::uint64_t>();
        const auto& d = j.at("demand");
        ev.demand = {d.at(0).get<double>(), d.at(1).get<double>(), d.at(2).get<double>()};
    }
    if (ev.kind == EventRecord::Kind::Admit)
        ev.release_time_s = j.at("release_time").get<double>();
    return ev;
}

}  // namespace edgetwin
