#include "edgetwin/dqn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace edgetwin {

void DqnConfig::validate() const {
    if (hidden_sizes.empty()) throw ValidationError("dqn.hidden_sizes must be non-empty");
    for (int h : hidden_sizes)
        if (h <= 0) throw ValidationError("dqn.hidden_sizes entries must be > 0");
    if (!(learning_rate > 0.0)) throw ValidationError("dqn.learning_rate must be > 0");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw ValidationError("dqn.gamma must be in [0,1)");
    if (replay_capacity == 0) throw ValidationError("dqn.replay_capacity must be > 0");
    if (batch_size == 0 || batch_size > replay_capacity)
        throw ValidationError("dqn.batch_size must be in [1, replay_capacity]");
    if (target_sync_interval == 0)
        throw ValidationError("dqn.target_sync_interval must be > 0");
    auto eps_ok = [](double e) { return e >= 0.0 && e <= 1.0; };
    if (!eps_ok(epsilon_start) || !eps_ok(epsilon_end))
        throw ValidationError("dqn.epsilon bounds must be in [0,1]");
    if (epsilon_decay_steps == 0)
        throw ValidationError("dqn.epsilon_decay_steps must be > 0");
    if (!(grad_clip_norm > 0.0)) throw ValidationError("dqn.grad_clip_norm must be > 0");
}

double epsilon_at(const DqnConfig& c, std::size_t env_step) {
    const double frac = std::min(
        1.0, static_cast<double>(env_step) / static_cast<double>(c.epsilon_decay_steps));
    return c.epsilon_start + (c.epsilon_end - c.epsilon_start) * frac;
}

std::optional<double> dqn_train_step(const ReplayBuffer& buffer, Mlp& online,
                                     Mlp& target, const DqnConfig& config,
                                     Rng& sample_rng, std::size_t& update_count) {
    if (buffer.size() < config.batch_size) return std::nullopt;

    const auto indices = buffer.sample_indices(config.batch_size, sample_rng);
    std::vector<std::vector<double>> states;
    std::vector<int> actions;
    std::vector<double> targets;
    states.reserve(indices.size());
    actions.reserve(indices.size());
    targets.reserve(indices.size());

    for (std::size_t idx : indices) {
        const Transition& t = buffer.at(idx);
        double y = t.reward;
        if (!t.terminal) {
            const auto next_q = target.forward(t.next_state);
            if (config.double_dqn) {
                const auto online_q = online.forward(t.next_state);
                y += config.gamma * next_q[static_cast<std::size_t>(argmax(online_q))];
            } else {
                y += config.gamma * *std::max_element(next_q.begin(), next_q.end());
            }
        }
        states.push_back(t.state);
        actions.push_back(t.action);
        targets.push_back(y);
    }

    Mlp::Gradients grads = online.zero_gradients();
    const double loss = online.td_backward(states, actions, targets, grads);
    if (!std::isfinite(loss)) return loss;  // leave the weights untouched

    clip_gradients(grads, config.grad_clip_norm);
    online.sgd_step(grads, config.learning_rate);
    ++update_count;
    if (update_count % config.target_sync_interval == 0) target = online;
    return loss;
}

namespace {

Mlp make_network(int input_dim, int action_count, const DqnConfig& config) {
    std::vector<int> sizes;
    sizes.push_back(input_dim);
    sizes.insert(sizes.end(), config.hidden_sizes.begin(), config.hidden_sizes.end());
    sizes.push_back(action_count);
    return Mlp(sizes, derive_seed(config.seed, 11));
}

}  // namespace

DqnAgent::DqnAgent(int input_dim, int action_count, DqnConfig config, NormBounds bounds)
    : config_(std::move(config)),
      bounds_(bounds),
      online_(make_network(input_dim, action_count, config_)),
      target_(online_),
      buffer_(config_.replay_capacity),
      action_rng_(derive_seed(config_.seed, 12)),
      sample_rng_(derive_seed(config_.seed, 13)) {
    config_.validate();
}

DqnAgent::DqnAgent(Mlp network, DqnConfig config, NormBounds bounds)
    : config_(std::move(config)),
      bounds_(bounds),
      online_(std::move(network)),
      target_(online_),
      buffer_(config_.replay_capacity),
      action_rng_(derive_seed(config_.seed, 12)),
      sample_rng_(derive_seed(config_.seed, 13)) {
    config_.validate();
}

void DqnAgent::load(const std::string& path) {
    online_ = Mlp::load(path);
    target_ = online_;
}

int DqnAgent::act(const MdpState& state, bool explore) {
    const int actions = online_.output_dim();
    if (explore && action_rng_.uniform() < epsilon())
        return static_cast<int>(action_rng_.uniform_int(0, actions - 1));
    const auto q = online_.forward(state.normalized(bounds_));
    return argmax(q);
}

void DqnAgent::observe(const Transition& transition) {
    buffer_.push(transition);
    ++env_steps_;
    last_loss_ = dqn_train_step(buffer_, online_, target_, config_, sample_rng_,
                                update_count_);
}

TrainResult train(const EnvFactory& make_env, const DqnConfig& config,
                  std::size_t episodes, std::optional<Mlp> initial) {
    config.validate();
    TrainResult result;
    result.best_reward = -std::numeric_limits<double>::infinity();

    std::unique_ptr<DqnAgent> agent;
    for (std::size_t ep = 0; ep < episodes; ++ep) {
        Env env = make_env(ep);
        MdpState state = env.reset();
        if (!agent) {
            if (initial) {
                agent = std::make_unique<DqnAgent>(std::move(*initial), config,
                                                   env.norm_bounds());
            } else {
                const int input_dim = static_cast<int>(state.flat().size());
                agent = std::make_unique<DqnAgent>(input_dim, env.server_count(),
                                                   config, env.norm_bounds());
            }
        }

        double reward_sum = 0.0;
        double loss_sum = 0.0;
        std::size_t loss_count = 0;
        std::size_t steps = 0;
        bool diverged = false;

        while (!env.done()) {
            const int action = agent->act(state, true);
            const StepOutcome out = env.step(action);
            Transition t;
            t.state = state.normalized(agent->norm_bounds());
            t.action = action;
            t.reward = out.reward;
            t.terminal = !out.next_state.has_value();
            t.next_state = t.terminal ? t.state
                                      : out.next_state->normalized(agent->norm_bounds());
            agent->observe(t);
            reward_sum += out.reward;
            ++steps;
            if (agent->last_loss()) {
                const double loss = *agent->last_loss();
                if (!std::isfinite(loss)) {
                    diverged = true;
                    break;
                }
                loss_sum += loss;
                ++loss_count;
            }
            if (out.next_state) state = *out.next_state;
        }

        EpisodeRow row;
        row.episode = ep;
        row.mean_reward = steps > 0 ? reward_sum / static_cast<double>(steps) : 0.0;
        row.loss = loss_count > 0 ? loss_sum / static_cast<double>(loss_count)
                                  : std::numeric_limits<double>::quiet_NaN();
        row.epsilon = agent->epsilon();
        result.curve.push_back(row);

        if (diverged) {
            result.diverged = true;
            result.diagnostic = "non-finite loss at episode " + std::to_string(ep) +
                                " after " + std::to_string(agent->updates()) +
                                " updates";
            break;
        }
        if (row.mean_reward > result.best_reward) {
            result.best_reward = row.mean_reward;
            result.best_episode = ep;
            result.best = agent->online();
        }
    }
    if (agent) result.last = agent->online();
    return result;
}

}  // namespace edgetwin
