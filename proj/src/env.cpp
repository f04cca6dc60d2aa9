#include "edgetwin/env.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace edgetwin {

void RewardParams::validate() const {
    if (!(delta_pos > 0.0)) throw ValidationError("reward.delta_pos must be > 0");
    if (!(delta_neg < 0.0)) throw ValidationError("reward.delta_neg must be < 0");
    if (!(epsilon_weight >= 0.0)) throw ValidationError("reward.epsilon_weight must be >= 0");
    if (!(zeta_weight >= 0.0)) throw ValidationError("reward.zeta_weight must be >= 0");
}

NormBounds NormBounds::from_spec(const ScenarioSpec& spec) {
    NormBounds b;
    b.delay_cap_s = 10.0 * spec.network.sync_threshold_s;
    b.cap_ops = {spec.cpu_capacity_ops.max, spec.gpu_capacity_ops.max,
                 spec.store_capacity_ops.max};
    // op-count bound at roughly the payload's 3-sigma point
    const double payload_hi =
        spec.payload.status_bits +
        std::exp(spec.payload.sensing_log_mean + 3.0 * spec.payload.sensing_log_sigma);
    const double spread = 1.0 + spec.ops.noise_frac;
    b.task_ops = {std::max(1.0, spec.ops.cpu_ops_per_bit * payload_hi * spread),
                  std::max(1.0, spec.ops.gpu_ops_per_bit * payload_hi * spread),
                  std::max(1.0, spec.ops.store_ops_per_bit * payload_hi * spread)};
    return b;
}

std::vector<double> MdpState::flat() const {
    std::vector<double> out;
    out.reserve(7 * capacities.size() + 3);
    for (double d : trans_delay_s) out.push_back(d);
    for (const auto& c : capacities) {
        out.push_back(c.cpu);
        out.push_back(c.gpu);
        out.push_back(c.store);
    }
    for (const auto& u : utilized) {
        out.push_back(u.cpu);
        out.push_back(u.gpu);
        out.push_back(u.store);
    }
    out.push_back(task_req.cpu);
    out.push_back(task_req.gpu);
    out.push_back(task_req.store);
    return out;
}

std::vector<double> MdpState::normalized(const NormBounds& b) const {
    std::vector<double> out;
    out.reserve(7 * capacities.size() + 3);
    for (double d : trans_delay_s) out.push_back(d / b.delay_cap_s);
    for (const auto& c : capacities) {
        out.push_back(c.cpu / b.cap_ops.cpu);
        out.push_back(c.gpu / b.cap_ops.gpu);
        out.push_back(c.store / b.cap_ops.store);
    }
    for (std::size_t e = 0; e < utilized.size(); ++e) {
        out.push_back(utilized[e].cpu / capacities[e].cpu);
        out.push_back(utilized[e].gpu / capacities[e].gpu);
        out.push_back(utilized[e].store / capacities[e].store);
    }
    out.push_back(task_req.cpu / b.task_ops.cpu);
    out.push_back(task_req.gpu / b.task_ops.gpu);
    out.push_back(task_req.store / b.task_ops.store);
    return out;
}

double episode_reward(std::span<const double> step_rewards) {
    if (step_rewards.empty())
        throw ValidationError("episode_reward: no steps");
    double sum = 0.0;
    for (double r : step_rewards) sum += r;
    return sum / static_cast<double>(step_rewards.size());
}

Env::Env(Scenario scenario, RewardParams reward, NormBounds bounds)
    : scenario_(std::move(scenario)), reward_(reward), bounds_(bounds) {
    reward_.validate();
    scenario_.topology.validate();
}

const MdpState& Env::reset() {
    servers_ = scenario_.topology.servers;
    board_.emplace(servers_, scenario_.spec.nominal_service_time_s);
    queue_ = TaskQueue{};
    slot_ = 0;
    now_s_ = 0.0;
    steps_done_ = 0;
    horizon_ = count_samples(scenario_.traces);
    if (horizon_ == 0)
        throw EmptyEpisodeError("scenario produced no connected CAV sample");

    for (auto& e : samples_at(scenario_, 0)) queue_.push(std::move(e));
    while (queue_.empty()) advance_slot();

    done_ = false;
    state_ = build_state(queue_.head());
    return state_;
}

const MdpState& Env::state() const {
    if (done_) throw ContractError("state(): episode not running");
    return state_;
}

const std::vector<EventRecord>& Env::event_log() const {
    if (!board_) throw ContractError("event_log(): reset() not called");
    return board_->event_log();
}

MdpState Env::build_state(const QueueEntry& entry) const {
    const auto& topo = scenario_.topology;
    const auto& ap = topo.aps[entry.ap_id];
    const double payload = payload_size(entry.sample);
    const double wireless = wireless_delay(entry.sample, ap, topo.params);

    MdpState s;
    s.trans_delay_s.reserve(servers_.size());
    s.capacities.reserve(servers_.size());
    s.utilized.reserve(servers_.size());
    for (const auto& srv : servers_) {
        s.trans_delay_s.push_back(
            wireless + wired_delay(payload, ap.hops(srv.id()), topo.params));
        s.capacities.push_back(srv.capacity());
        s.utilized.push_back(srv.used());
    }
    s.task_req = entry.sample.ops();
    return s;
}

void Env::advance_slot() {
    ++slot_;
    if (slot_ >= scenario_.spec.episode_slots)
        throw ContractError("advance_slot: ran out of slots before the horizon");
    now_s_ = slot_ * scenario_.spec.slot_duration_s;
    board_->release_due(now_s_);
    for (auto& e : samples_at(scenario_, slot_)) queue_.push(std::move(e));
}

StepOutcome Env::step(int action) {
    if (done_) throw ContractError("step: episode already finished");
    if (action < 0 || action >= server_count())
        throw ContractError("step: action " + std::to_string(action) +
                            " outside [0, " + std::to_string(server_count()) + ")");

    const QueueEntry entry = queue_.pop();
    const auto& ap = scenario_.topology.aps[entry.ap_id];
    EdgeServer& srv = servers_[static_cast<std::size_t>(action)];

    DtTask task = form_task(entry.sample, ap);
    const SyncBreakdown sync =
        sync_latency(entry.sample, ap, srv, scenario_.topology.params);

    const bool admitted = board_->admissible(task, srv);
    if (admitted)
        board_->admit(task, srv, now_s_, sync.processing_s);
    else
        board_->drop(task, static_cast<std::size_t>(action), now_s_);

    const double mean_util = mean_utilization(servers_);
    double max_server_util = 0.0;
    for (const auto& s : servers_) {
        const UtilizationRates r = utilization_rate(s);
        max_server_util = std::max(max_server_util, (r.cpu + r.gpu + r.store) / 3.0);
    }

    StepOutcome out;
    out.info = {slot_,      entry.sample.vehicle_id, entry.ap_id, action,
                admitted,   sync,                    mean_util,   max_server_util};
    out.reward = (admitted ? reward_.delta_pos : reward_.delta_neg) +
                 reward_.epsilon_weight * mean_util -
                 reward_.zeta_weight * sync.total_s;

    ++steps_done_;
    if (steps_done_ >= horizon_) {
        done_ = true;
        return out;
    }
    while (queue_.empty()) advance_slot();
    state_ = build_state(queue_.head());
    out.next_state = state_;
    return out;
}

}  // namespace edgetwin
