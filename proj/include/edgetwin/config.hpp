#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "edgetwin/dqn.hpp"
#include "edgetwin/env.hpp"
#include "edgetwin/traffic.hpp"

namespace edgetwin {

// Everything a command needs, resolved from one JSON file plus environment
// and flag overrides. Unknown keys anywhere in the file are rejected.
struct RunConfig {
    ScenarioSpec scenario;
    RewardParams reward;
    std::optional<NormBounds> norm;  // derived from the scenario when absent
    DqnConfig dqn;

    std::size_t train_episodes = 100;
    std::vector<std::uint64_t> eval_seeds;  // resolved; see eval_episodes
    std::vector<std::string> policies{"random", "greedy", "dqn"};
    std::vector<double> pr_values{0.2, 0.4, 0.6, 0.8};
    std::string out_dir = "out";
    std::string checkpoint;    // defaults to <out_dir>/checkpoint.bin
    std::string resume_from;   // continue training from this checkpoint
    std::string scenario_dir;  // evaluate an imported scenario artifact
    unsigned workers = 0;      // 0 = hardware concurrency

    NormBounds resolved_norm() const {
        return norm ? *norm : NormBounds::from_spec(scenario);
    }
    std::string checkpoint_path() const {
        return checkpoint.empty() ? out_dir + "/checkpoint.bin" : checkpoint;
    }
};

nlohmann::json spec_to_json(const ScenarioSpec& spec);
ScenarioSpec spec_from_json(const nlohmann::json& j);

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& config);

RunConfig load_run_config(const std::string& path);

// EDGETWIN_SEED, EDGETWIN_OUT, EDGETWIN_POLICY, EDGETWIN_EPISODES, EDGETWIN_PR
void apply_env_overrides(RunConfig& config);

// FNV-1a over the canonical (sorted-key) dump of the effective config.
std::string config_hash(const RunConfig& config);

}  // namespace edgetwin
