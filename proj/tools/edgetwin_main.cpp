#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "edgetwin/config.hpp"
#include "edgetwin/dqn.hpp"
#include "edgetwin/metrics.hpp"
#include "edgetwin/scenario_io.hpp"

namespace {

using namespace edgetwin;

struct FlagOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> policy;
    std::optional<std::size_t> episodes;
    std::optional<double> pr;
};

RunConfig resolve_config(const std::string& config_path, const FlagOverrides& flags) {
    RunConfig config = load_run_config(config_path);
    apply_env_overrides(config);
    if (flags.seed) config.scenario.seed = *flags.seed;
    if (flags.out) config.out_dir = *flags.out;
    if (flags.policy) config.policies = {*flags.policy};
    if (flags.episodes) config.train_episodes = *flags.episodes;
    if (flags.pr) config.pr_values = {*flags.pr};
    return config;
}

nlohmann::json aggregate_to_json(const MetricAggregate& a) {
    nlohmann::json j;
    j["policy"] = a.policy;
    j["pr"] = a.pr;
    j["episodes"] = a.episodes;
    j["sync_error_mean"] = a.sync_error.mean;
    j["sync_error_std"] = a.sync_error.stddev;
    j["sync_error_defined"] = a.sync_error.count;
    j["sched_success_mean"] = a.sched_success.mean;
    j["sched_success_std"] = a.sched_success.stddev;
    j["max_util_mean"] = a.max_util.mean;
    j["max_util_std"] = a.max_util.stddev;
    j["mean_util_mean"] = a.mean_util.mean;
    j["mean_util_std"] = a.mean_util.stddev;
    j["mean_reward_mean"] = a.mean_reward.mean;
    j["mean_reward_std"] = a.mean_reward.stddev;
    return j;
}

PolicyFactory make_policy_factory(const RunConfig& config,
                                  std::optional<Mlp> checkpoint) {
    const NormBounds bounds = config.resolved_norm();
    const DqnConfig dqn = config.dqn;
    return [checkpoint = std::move(checkpoint), bounds, dqn](
               const std::string& name, const Scenario& scenario,
               std::uint64_t seed) -> std::unique_ptr<Policy> {
        if (name == "random")
            return std::make_unique<RandomPolicy>(derive_seed(seed, 101));
        if (name == "greedy")
            return std::make_unique<GreedyPolicy>(scenario.spec.nominal_service_time_s);
        if (name == "dqn") {
            if (!checkpoint)
                throw ValidationError("policy 'dqn' requested without a checkpoint");
            return std::make_unique<DqnAgent>(*checkpoint, dqn, bounds);
        }
        throw ValidationError("unknown policy: " + name);
    };
}

bool wants_dqn(const std::vector<std::string>& policies) {
    for (const auto& p : policies)
        if (p == "dqn") return true;
    return false;
}

int cmd_generate(const std::string& config_path, const FlagOverrides& flags) {
    const RunConfig config = resolve_config(config_path, flags);
    const Scenario scenario = generate_scenario(config.scenario);
    save_scenario(config.out_dir, scenario);

    std::size_t cavs = 0;
    for (const auto& t : scenario.traces)
        if (t.is_cav) ++cavs;
    std::cout << "scenario written to " << config.out_dir << "\n"
              << "vehicles: " << scenario.traces.size() << ", cavs: " << cavs
              << ", connected samples: " << count_samples(scenario.traces) << "\n";
    for (const auto& s : scenario.topology.servers) {
        std::cout << "server " << s.id() << ": capacity cpu="
                  << format_double(s.capacity().cpu)
                  << " gpu=" << format_double(s.capacity().gpu)
                  << " store=" << format_double(s.capacity().store) << " ops/s\n";
    }
    return 0;
}

EnvFactory make_train_env_factory(const RunConfig& config) {
    return [config](std::size_t episode) {
        ScenarioSpec spec = config.scenario;
        spec.seed = derive_seed(config.scenario.seed, 0xE0 + episode);
        // expose the agent to the whole evaluation load range
        if (!config.pr_values.empty())
            spec.penetration_ratio = config.pr_values[episode % config.pr_values.size()];
        return Env(generate_scenario(spec), config.reward, config.resolved_norm());
    };
}

int cmd_train(const std::string& config_path, const FlagOverrides& flags) {
    const RunConfig config = resolve_config(config_path, flags);
    std::filesystem::create_directories(config.out_dir);

    std::optional<Mlp> initial;
    if (!config.resume_from.empty()) initial = Mlp::load(config.resume_from);

    const TrainResult result =
        train(make_train_env_factory(config), config.dqn, config.train_episodes,
              std::move(initial));
    write_curve_csv(config.out_dir + "/curve.csv", result.curve);
    if (result.best) result.best->save(config.checkpoint_path());
    if (result.last) result.last->save(config.out_dir + "/checkpoint_last.bin");

    nlohmann::json summary;
    summary["command"] = "train";
    summary["config_hash"] = config_hash(config);
    summary["episodes"] = result.curve.size();
    summary["best_episode"] = result.best_episode;
    summary["best_mean_reward"] =
        result.best ? result.best_reward : std::numeric_limits<double>::quiet_NaN();
    summary["diverged"] = result.diverged;
    std::ofstream(config.out_dir + "/summary.json") << summary.dump(2) << '\n';

    if (result.diverged) {
        std::cerr << "training aborted: " << result.diagnostic
                  << " (best checkpoint retained)\n";
        return 1;
    }
    std::cout << "trained " << result.curve.size() << " episodes";
    if (result.best)
        std::cout << ", best mean reward " << format_double(result.best_reward)
                  << " at episode " << result.best_episode << ", checkpoint "
                  << config.checkpoint_path();
    std::cout << "\n";
    return 0;
}

int run_evaluation(const RunConfig& config, const std::vector<double>& pr_values,
                   const char* command) {
    std::optional<Mlp> checkpoint;
    if (wants_dqn(config.policies)) checkpoint = Mlp::load(config.checkpoint_path());

    const SweepResult result =
        pr_sweep(config.policies, pr_values, config.eval_seeds, config.scenario,
                 config.reward, config.resolved_norm(),
                 make_policy_factory(config, std::move(checkpoint)), config.workers);

    std::filesystem::create_directories(config.out_dir + "/traces");
    write_sweep_csv(config.out_dir + "/sweep.csv", result.cells);
    for (const auto& cell : result.cells)
        write_trace_file(config.out_dir + "/traces/" +
                             trace_file_name(cell.policy, cell.pr, cell.seed),
                         cell.steps);

    nlohmann::json summary;
    summary["command"] = command;
    summary["config_hash"] = config_hash(config);
    summary["policies"] = config.policies;
    summary["pr_values"] = pr_values;
    summary["seeds"] = config.eval_seeds;
    summary["cells"] = result.cells.size();
    nlohmann::json aggs = nlohmann::json::array();
    for (const auto& a : result.aggregates) aggs.push_back(aggregate_to_json(a));
    summary["aggregates"] = std::move(aggs);
    std::ofstream(config.out_dir + "/summary.json") << summary.dump(2) << '\n';

    std::cout << command << ": " << result.cells.size() << " cells -> "
              << config.out_dir << "/sweep.csv\n";
    for (const auto& a : result.aggregates) {
        std::cout << a.policy << " pr=" << format_double(a.pr)
                  << " sync_error=" << format_double(a.sync_error.mean)
                  << " sched_success=" << format_double(a.sched_success.mean)
                  << " max_util=" << format_double(a.max_util.mean)
                  << " mean_reward=" << format_double(a.mean_reward.mean) << "\n";
    }
    return 0;
}

// evaluate an imported scenario artifact as-is (one cell per policy)
int evaluate_scenario_dir(const RunConfig& config) {
    Scenario scenario = load_scenario(config.scenario_dir);
    std::optional<Mlp> checkpoint;
    if (wants_dqn(config.policies)) checkpoint = Mlp::load(config.checkpoint_path());
    const auto factory = make_policy_factory(config, std::move(checkpoint));

    std::vector<SweepCell> cells;
    for (const auto& name : config.policies) {
        auto policy = factory(name, scenario, scenario.spec.seed);
        Env env(scenario, config.reward, config.resolved_norm());
        EpisodeRun run = run_episode(env, *policy, false);
        cells.push_back({name, scenario.spec.penetration_ratio, scenario.spec.seed,
                         std::move(run.metrics), std::move(run.steps)});
    }

    std::filesystem::create_directories(config.out_dir + "/traces");
    write_sweep_csv(config.out_dir + "/sweep.csv", cells);
    for (const auto& cell : cells)
        write_trace_file(config.out_dir + "/traces/" +
                             trace_file_name(cell.policy, cell.pr, cell.seed),
                         cell.steps);

    nlohmann::json summary;
    summary["command"] = "evaluate";
    summary["config_hash"] = config_hash(config);
    summary["scenario_dir"] = config.scenario_dir;
    summary["cells"] = cells.size();
    std::ofstream(config.out_dir + "/summary.json") << summary.dump(2) << '\n';
    std::cout << "evaluate: " << cells.size() << " cells (imported scenario) -> "
              << config.out_dir << "/sweep.csv\n";
    return 0;
}

bool parse_trace_name(const std::string& stem, std::string& policy, double& pr,
                      std::uint64_t& seed) {
    const auto pr_pos = stem.rfind("_pr");
    const auto seed_pos = stem.rfind("_seed");
    if (pr_pos == std::string::npos || seed_pos == std::string::npos ||
        seed_pos <= pr_pos)
        return false;
    policy = stem.substr(0, pr_pos);
    pr = std::strtod(stem.substr(pr_pos + 3, seed_pos - pr_pos - 3).c_str(), nullptr);
    seed = std::strtoull(stem.substr(seed_pos + 5).c_str(), nullptr, 10);
    return true;
}

int cmd_replay(const std::string& trace_path, const std::string& check_csv) {
    namespace fs = std::filesystem;
    if (!fs::exists(trace_path))
        throw ValidationError("trace path does not exist: " + trace_path);

    std::vector<fs::path> files;
    if (fs::is_directory(trace_path)) {
        for (const auto& entry : fs::directory_iterator(trace_path))
            if (entry.path().extension() == ".jsonl") files.push_back(entry.path());
        std::sort(files.begin(), files.end());
    } else {
        files.push_back(trace_path);
    }

    std::vector<SweepCell> recomputed;
    for (const auto& file : files) {
        const auto steps = read_trace_file(file.string());
        SweepCell cell;
        if (!parse_trace_name(file.stem().string(), cell.policy, cell.pr, cell.seed))
            cell.policy = file.stem().string();
        cell.metrics = metrics_from_steps(steps);
        recomputed.push_back(std::move(cell));
    }

    for (const auto& c : recomputed) {
        const double sync =
            c.metrics.sync_error_rate.value_or(std::numeric_limits<double>::quiet_NaN());
        std::cout << c.policy << " pr=" << format_double(c.pr) << " seed=" << c.seed
                  << " sync_error=" << format_double(sync)
                  << " sched_success=" << format_double(c.metrics.sched_success_rate)
                  << " max_util=" << format_double(c.metrics.max_utilization)
                  << " mean_util=" << format_double(c.metrics.mean_utilization_time_avg)
                  << " mean_reward=" << format_double(c.metrics.mean_reward) << "\n";
    }

    if (check_csv.empty()) return 0;

    const auto rows = read_sweep_csv(check_csv);
    std::size_t checked = 0;
    for (const auto& row : rows) {
        const SweepCell* match = nullptr;
        for (const auto& c : recomputed)
            if (c.policy == row.policy && c.pr == row.pr && c.seed == row.seed)
                match = &c;
        if (!match) {
            std::cerr << "no trace for row " << row.policy << " pr="
                      << format_double(row.pr) << " seed=" << row.seed << "\n";
            return 1;
        }
        auto same = [](double a, double b) {
            return (std::isnan(a) && std::isnan(b)) || a == b;
        };
        const bool ok =
            same(row.metrics.sync_error_rate.value_or(
                     std::numeric_limits<double>::quiet_NaN()),
                 match->metrics.sync_error_rate.value_or(
                     std::numeric_limits<double>::quiet_NaN())) &&
            same(row.metrics.sched_success_rate, match->metrics.sched_success_rate) &&
            same(row.metrics.max_utilization, match->metrics.max_utilization) &&
            same(row.metrics.mean_utilization_time_avg,
                 match->metrics.mean_utilization_time_avg) &&
            same(row.metrics.mean_reward, match->metrics.mean_reward);
        if (!ok) {
            std::cerr << "mismatch for " << row.policy << " pr=" << format_double(row.pr)
                      << " seed=" << row.seed << "\n";
            return 1;
        }
        ++checked;
    }
    std::cout << "replay check ok: " << checked << " rows match exactly\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"edge digital-twin provisioning simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string trace_path;
    std::string check_csv;
    FlagOverrides flags;

    auto add_common = [&](CLI::App* cmd, bool needs_config = true) {
        cmd->add_option("--config", config_path, "run configuration (JSON)")
            ->required(needs_config);
        cmd->add_option("--seed", flags.seed, "override scenario seed");
        cmd->add_option("--out", flags.out, "override output directory");
        cmd->add_option("--policy", flags.policy, "restrict to one policy");
        cmd->add_option("--episodes", flags.episodes, "override training episodes");
        cmd->add_option("--pr", flags.pr, "restrict to one penetration ratio");
    };

    auto* generate = app.add_subcommand("generate", "write a scenario artifact");
    add_common(generate);
    auto* train_cmd = app.add_subcommand("train", "train the DQN provisioner");
    add_common(train_cmd);
    auto* evaluate = app.add_subcommand("evaluate",
                                        "evaluate policies at the configured ratio");
    add_common(evaluate);
    auto* sweep = app.add_subcommand("sweep", "policy x penetration-ratio grid");
    add_common(sweep);
    auto* replay = app.add_subcommand("replay", "recompute metrics from step traces");
    replay->add_option("--trace", trace_path, "trace file or directory")->required();
    replay->add_option("--check", check_csv, "sweep.csv to verify against");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (generate->parsed()) return cmd_generate(config_path, flags);
        if (train_cmd->parsed()) return cmd_train(config_path, flags);
        if (evaluate->parsed()) {
            const RunConfig config = resolve_config(config_path, flags);
            if (!config.scenario_dir.empty()) return evaluate_scenario_dir(config);
            const std::vector<double> pr{config.scenario.penetration_ratio};
            return run_evaluation(config, pr, "evaluate");
        }
        if (sweep->parsed()) {
            const RunConfig config = resolve_config(config_path, flags);
            return run_evaluation(config, config.pr_values, "sweep");
        }
        if (replay->parsed()) return cmd_replay(trace_path, check_csv);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
