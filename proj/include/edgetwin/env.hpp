#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "edgetwin/tasking.hpp"
#include "edgetwin/traffic.hpp"

namespace edgetwin {

struct RewardParams {
    double delta_pos = 1.0;    // admission bonus (delta_1 > 0)
    double delta_neg = -10.0;  // constraint-violation penalty (delta_2 < 0)
    double epsilon_weight = 1.0;
    double zeta_weight = 10.0;  // per second of synchronization latency

    void validate() const;
};

// Divisors that map the mixed-unit observation into [0,1] per feature.
struct NormBounds {
    double delay_cap_s = 0.25;  // default 10 * sync threshold
    ResourceVec cap_ops{1.2e8, 8.4e7, 6.0e7};
    ResourceVec task_ops{2.0e6, 1.4e6, 1.0e6};

    static NormBounds from_spec(const ScenarioSpec& spec);
};

// Observation for the head-of-queue task: per-server transmission delay,
// capacities and live utilization, and the task's operation requirements.
struct MdpState {
    std::vector<double> trans_delay_s;     // E
    std::vector<ResourceVec> capacities;   // E
    std::vector<ResourceVec> utilized;     // E
    ResourceVec task_req;

    std::size_t server_count() const { return capacities.size(); }

    // layout: delays | capacities (server-major cpu,gpu,store) | utilized | task_req
    std::vector<double> flat() const;
    std::vector<double> normalized(const NormBounds& bounds) const;
};

struct StepInfo {
    int slot = 0;
    std::size_t vehicle_id = 0;
    std::size_t ap_id = 0;
    int action = 0;
    bool admitted = false;
    SyncBreakdown sync;
    double mean_util = 0.0;        // Eq.-(15)-style grand mean, after the action
    double max_server_util = 0.0;  // max over servers of per-server dimension mean
};

struct StepOutcome {
    std::optional<MdpState> next_state;  // empty once the horizon is reached
    double reward = 0.0;
    StepInfo info;
};

double episode_reward(std::span<const double> step_rewards);

// The task-provisioning MDP: one decision per queued upload, a slot clock
// that releases finished assignments, and a fixed horizon of one decision
// per connected sample.
class Env {
public:
    Env(Scenario scenario, RewardParams reward, NormBounds bounds);

    const MdpState& reset();
    StepOutcome step(int action);

    bool done() const { return done_; }
    std::size_t horizon() const { return horizon_; }
    std::size_t steps_taken() const { return steps_done_; }
    int server_count() const { return static_cast<int>(servers_.size()); }
    const MdpState& state() const;
    const Scenario& scenario() const { return scenario_; }
    const std::vector<EdgeServer>& servers() const { return servers_; }
    const std::vector<EventRecord>& event_log() const;
    const NormBounds& norm_bounds() const { return bounds_; }
    const RewardParams& reward_params() const { return reward_; }
    double nominal_service_time() const { return scenario_.spec.nominal_service_time_s; }

private:
    MdpState build_state(const QueueEntry& entry) const;
    void advance_slot();

    Scenario scenario_;
    RewardParams reward_;
    NormBounds bounds_;
    std::vector<EdgeServer> servers_;
    std::optional<TaskBoard> board_;
    TaskQueue queue_;
    MdpState state_;
    int slot_ = 0;
    double now_s_ = 0.0;
    std::size_t steps_done_ = 0;
    std::size_t horizon_ = 0;
    bool done_ = true;
};

}  // namespace edgetwin
