#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "edgetwin/env.hpp"
#include "edgetwin/mlp.hpp"
#include "edgetwin/policy.hpp"
#include "edgetwin/replay.hpp"

namespace edgetwin {

struct DqnConfig {
    std::vector<int> hidden_sizes{64, 64};
    double learning_rate = 1e-3;
    double gamma = 0.99;
    std::size_t replay_capacity = 50'000;
    std::size_t batch_size = 64;
    std::size_t target_sync_interval = 500;  // gradient updates between copies
    double epsilon_start = 1.0;
    double epsilon_end = 0.05;
    std::size_t epsilon_decay_steps = 20'000;
    double grad_clip_norm = 10.0;
    bool double_dqn = false;
    std::uint64_t seed = 1;

    void validate() const;
};

double epsilon_at(const DqnConfig& config, std::size_t env_step);

// One gradient update on the online network from a uniform batch:
// y = r + gamma * max_a' Q_target(s', a') for non-terminal transitions,
// y = r for terminal ones. Copies online into target every
// target_sync_interval updates. Returns nothing when the buffer is smaller
// than a batch; a non-finite loss is returned unapplied.
std::optional<double> dqn_train_step(const ReplayBuffer& buffer, Mlp& online,
                                     Mlp& target, const DqnConfig& config,
                                     Rng& sample_rng, std::size_t& update_count);

// epsilon-greedy value learner over the normalized observation.
class DqnAgent : public Policy {
public:
    DqnAgent(int input_dim, int action_count, DqnConfig config, NormBounds bounds);

    // restores a trained network for evaluation
    DqnAgent(Mlp network, DqnConfig config, NormBounds bounds);

    int act(const MdpState& state, bool explore) override;
    void observe(const Transition& transition) override;
    void save(const std::string& path) const override { online_.save(path); }
    void load(const std::string& path) override;
    std::string name() const override { return "dqn"; }

    double epsilon() const { return epsilon_at(config_, env_steps_); }
    std::optional<double> last_loss() const { return last_loss_; }
    const Mlp& online() const { return online_; }
    const Mlp& target() const { return target_; }
    Mlp& online() { return online_; }
    const NormBounds& norm_bounds() const { return bounds_; }
    std::size_t env_steps() const { return env_steps_; }
    std::size_t updates() const { return update_count_; }

private:
    DqnConfig config_;
    NormBounds bounds_;
    Mlp online_;
    Mlp target_;
    ReplayBuffer buffer_;
    Rng action_rng_;
    Rng sample_rng_;
    std::size_t env_steps_ = 0;
    std::size_t update_count_ = 0;
    std::optional<double> last_loss_;
};

struct EpisodeRow {
    std::size_t episode = 0;
    double mean_reward = 0.0;
    double loss = 0.0;  // mean over the episode's updates; NaN before learning starts
    double epsilon = 0.0;
};

struct TrainResult {
    std::vector<EpisodeRow> curve;
    std::optional<Mlp> best;  // highest episodic mean reward
    std::optional<Mlp> last;
    std::size_t best_episode = 0;
    double best_reward = 0.0;
    bool diverged = false;
    std::string diagnostic;
};

using EnvFactory = std::function<Env(std::size_t episode)>;

// Runs epsilon-greedy episodes, learning online; reproducible from the
// config seed and the factory's scenario seeds. Stops early (diverged=true)
// if the loss turns non-finite. Pass a network to resume from a checkpoint.
TrainResult train(const EnvFactory& make_env, const DqnConfig& config,
                  std::size_t episodes, std::optional<Mlp> initial = {});

}  // namespace edgetwin
