#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "edgetwin/syncmodel.hpp"
#include "edgetwin/topology.hpp"

namespace edgetwin {

struct TaskSource {
    std::size_t vehicle_id = 0;
    std::size_t ap_id = 0;
};

// The DT task tuple: required operations, payload, source address, and the
// destination server chosen by the provisioning decision.
struct DtTask {
    double cpu_ops = 0.0;
    double gpu_ops = 0.0;
    double store_ops = 0.0;
    double payload_bits = 0.0;
    TaskSource src;
    std::optional<std::size_t> dst;

    ResourceVec ops() const { return {cpu_ops, gpu_ops, store_ops}; }
};

DtTask form_task(const CavSample& sample, const AccessPoint& ap);

// Rate actually held while the task runs: operations spread over the
// configured nominal service time.
ResourceVec demand_for(const DtTask& task, double nominal_service_time_s);

struct QueueEntry {
    CavSample sample;
    std::size_t ap_id = 0;
};

// FIFO of pending per-slot uploads awaiting a provisioning decision.
class TaskQueue {
public:
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    const QueueEntry& head() const { return entries_.front(); }
    void push(QueueEntry entry) { entries_.push_back(std::move(entry)); }
    QueueEntry pop();

private:
    std::deque<QueueEntry> entries_;
};

struct Assignment {
    std::uint64_t id = 0;
    DtTask task;
    std::size_t server = 0;
    ResourceVec demand;
    double admit_time_s = 0.0;
    double release_time_s = 0.0;
};

struct EventRecord {
    enum class Kind { Admit, Release, Drop };
    Kind kind = Kind::Admit;
    double time_s = 0.0;
    std::size_t server = 0;
    std::size_t vehicle = 0;
    std::uint64_t assignment_id = 0;
    ResourceVec demand;
    double release_time_s = 0.0;  // admit events only
};

// Assignment bookkeeping against the capacity constraints. Owns the servers'
// held-resource counters for the duration of a simulation; a server's held
// vector is always the sum of its live assignments' demands taken in
// ascending assignment id, so event-log replay reproduces the counters
// bit for bit.
class TaskBoard {
public:
    TaskBoard(std::vector<EdgeServer>& servers, double nominal_service_time_s);

    bool admissible(const DtTask& task, const EdgeServer& server) const;

    // Contract: the pair must be admissible and the task unassigned. Returns
    // the new assignment; counters and the event log are updated.
    const Assignment& admit(DtTask& task, EdgeServer& server, double now_s,
                            double release_after_s);

    // Record an attempted over-utilization; no resource effect.
    void drop(const DtTask& task, std::size_t server, double now_s);

    // Release every assignment whose release time has passed.
    std::size_t release_due(double now_s);

    double nominal_service_time() const { return nominal_service_time_s_; }
    const std::vector<Assignment>& live_assignments() const { return live_; }
    const std::vector<EventRecord>& event_log() const { return log_; }

private:
    void recompute_held(std::size_t server_id);

    std::vector<EdgeServer>* servers_;
    double nominal_service_time_s_;
    std::vector<Assignment> live_;  // ascending id
    std::vector<EventRecord> log_;
    std::uint64_t next_id_ = 1;
};

// Replays an event log against fresh servers and returns the per-event used
// vectors; the independent check behind the conservation and safety suites.
std::vector<std::vector<ResourceVec>> replay_event_log(
    const std::vector<EventRecord>& log, const std::vector<EdgeServer>& initial);

std::string event_to_line(const EventRecord& ev);
EventRecord event_from_line(const std::string& line);

}  // namespace edgetwin
