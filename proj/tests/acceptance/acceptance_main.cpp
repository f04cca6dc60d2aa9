// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Criteria 5, 6 and 8 share one trained agent and one
// evaluation sweep.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "edgetwin/config.hpp"
#include "edgetwin/dqn.hpp"
#include "edgetwin/metrics.hpp"
#include "edgetwin/rng.hpp"
#include "edgetwin/scenario_io.hpp"

using namespace edgetwin;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& why) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += why;
        }
    }
    void note(const std::string& info) {
        if (!detail.empty()) detail += "; ";
        detail += info;
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// criterion 1: formula oracle suite over the synchronization pipeline

long double oracle_uplink(long double gain, long double dist, long double alpha,
                          long double noise, long double bandwidth,
                          long double min_dist) {
    const long double d = dist < min_dist ? min_dist : dist;
    return bandwidth * std::log2(1.0L + gain * std::pow(d, -alpha) / noise);
}

Outcome criterion_formula_oracle() {
    Outcome o;
    Rng rng(0xF0F0);
    double worst = 0.0;
    auto rel = [&](long double expected, double actual) {
        const long double scale = std::max(std::fabs(expected), 1.0e-300L);
        const double err =
            static_cast<double>(std::fabs(expected - static_cast<long double>(actual)) / scale);
        worst = std::max(worst, err);
        return err;
    };

    for (int i = 0; i < 1000; ++i) {
        CavSample s;
        s.vehicle_id = static_cast<std::size_t>(i);
        s.status_bits = std::floor(rng.uniform(0.0, 1.0e5));
        s.sensing_bits = std::floor(rng.uniform(1.0e4, 5.0e6));
        s.position = {rng.uniform(-500.0, 500.0), rng.uniform(-500.0, 500.0)};
        s.tx_power_gain_w = rng.uniform(0.05, 2.0);
        s.cpu_ops = std::floor(rng.uniform(1.0, 2.0e6));
        s.gpu_ops = std::floor(rng.uniform(0.0, 1.5e6));
        s.store_ops = std::floor(rng.uniform(0.0, 1.0e6));

        AccessPoint ap;
        ap.id = 0;
        ap.position = {rng.uniform(-500.0, 500.0), rng.uniform(-500.0, 500.0)};
        ap.range = 5000.0;
        ap.hops_to = {static_cast<int>(rng.uniform_int(1, 8))};

        NetworkParams p;
        p.bandwidth_hz = rng.uniform(1.0e6, 3.0e7);
        p.noise_power_w = std::exp(rng.uniform(std::log(1.0e-14), std::log(1.0e-10)));
        p.path_loss_exponent = rng.uniform(2.0, 4.0);
        p.per_hop_delay_s_per_bit = rng.uniform(0.0, 5.0e-9);
        p.sync_threshold_s = rng.uniform(0.005, 0.1);

        EdgeServer srv(0,
                       {std::floor(rng.uniform(1.0e6, 1.0e8)),
                        std::floor(rng.uniform(1.0e6, 1.0e8)),
                        std::floor(rng.uniform(1.0e6, 1.0e8))},
                       {});

        // Eq. (1)
        const long double payload_o = static_cast<long double>(s.status_bits) +
                                      static_cast<long double>(s.sensing_bits);
        o.require(rel(payload_o, payload_size(s)) < 1e-12, "payload mismatch");

        // Eq. (2)
        const long double rate_o =
            oracle_uplink(s.tx_power_gain_w, distance(s.position, ap.position),
                          p.path_loss_exponent, p.noise_power_w, p.bandwidth_hz,
                          p.min_distance_m);
        o.require(rel(rate_o, uplink_rate(s, ap, p)) < 1e-12, "uplink mismatch");

        // Eq. (3)
        o.require(rel(payload_o / rate_o, wireless_delay(s, ap, p)) < 1e-12,
                  "wireless delay mismatch");

        // Eq. (4)
        const long double wired_o = static_cast<long double>(p.per_hop_delay_s_per_bit) *
                                    ap.hops_to[0] * payload_o;
        o.require(rel(wired_o, wired_delay(payload_size(s), ap.hops_to[0], p)) < 1e-12,
                  "wired delay mismatch");

        // Eq. (5)
        const long double proc_o =
            std::max({static_cast<long double>(s.cpu_ops) / srv.capacity().cpu,
                      static_cast<long double>(s.gpu_ops) / srv.capacity().gpu,
                      static_cast<long double>(s.store_ops) / srv.capacity().store});
        o.require(rel(proc_o, processing_delay(s, srv)) < 1e-12,
                  "processing delay mismatch");

        // Eq. (6) and the Eq. (7) decision
        const SyncBreakdown b = sync_latency(s, ap, srv, p);
        const long double total_o = payload_o / rate_o + wired_o + proc_o;
        o.require(rel(total_o, b.total_s) < 1e-12, "total latency mismatch");
        o.require(b.within_threshold == (total_o <= p.sync_threshold_s),
                  "threshold decision mismatch");
        o.require(b.total_s == b.wireless_s + b.wired_s + b.processing_s,
                  "breakdown does not sum");
        if (!o.pass) break;
    }
    o.note("1000 fixtures, worst rel err " + fmt(worst));
    return o;
}

// ---------------------------------------------------------------------------
// criterion 2: constraint safety under every policy, replayed from the log

ScenarioSpec safety_spec(std::uint64_t seed) {
    ScenarioSpec spec;
    spec.seed = seed;
    spec.vehicle_count = 60;
    spec.penetration_ratio = 0.6;
    spec.episode_slots = 6;
    spec.server_count = 3;
    spec.area_width_m = 800.0;
    spec.area_height_m = 800.0;
    spec.route_count = 6;
    spec.ap_range_m = 350.0;
    return spec;
}

Outcome criterion_constraint_safety() {
    Outcome o;
    std::size_t events = 0;
    for (std::uint64_t episode = 0; episode < 100 && o.pass; ++episode) {
        const ScenarioSpec spec = safety_spec(1000 + episode);
        Scenario scenario = generate_scenario(spec);
        const std::vector<EdgeServer> initial = scenario.topology.servers;
        const NormBounds bounds = NormBounds::from_spec(spec);
        Env env(std::move(scenario), RewardParams{}, bounds);

        std::unique_ptr<Policy> policy;
        switch (episode % 3) {
            case 0: policy = std::make_unique<RandomPolicy>(episode); break;
            case 1:
                policy = std::make_unique<GreedyPolicy>(spec.nominal_service_time_s);
                break;
            default: {
                MdpState probe = env.reset();
                DqnConfig c;
                c.seed = episode;
                policy = std::make_unique<DqnAgent>(
                    static_cast<int>(probe.flat().size()), env.server_count(), c,
                    bounds);
                break;
            }
        }
        run_episode(env, *policy, false);

        const auto snapshots = replay_event_log(env.event_log(), initial);
        events += snapshots.size();
        for (const auto& snap : snapshots) {
            for (std::size_t e = 0; e < initial.size(); ++e) {
                o.require(snap[e].cpu <= initial[e].capacity().cpu &&
                              snap[e].gpu <= initial[e].capacity().gpu &&
                              snap[e].store <= initial[e].capacity().store,
                          "capacity exceeded in episode " + std::to_string(episode));
            }
        }
        if (!snapshots.empty()) {
            const auto& last = snapshots.back();
            for (std::size_t e = 0; e < initial.size(); ++e)
                o.require(last[e].cpu == env.servers()[e].used().cpu &&
                              last[e].gpu == env.servers()[e].used().gpu &&
                              last[e].store == env.servers()[e].used().store,
                          "replay does not match the live counters");
        }
    }
    o.note("100 episodes across random/greedy/dqn, " + std::to_string(events) +
           " logged events replayed");
    return o;
}

// ---------------------------------------------------------------------------
// criterion 3: gradient check on 50 random network/batch fixtures

Outcome criterion_gradient_check() {
    Outcome o;
    Rng rng(71);
    double worst = 0.0;
    for (int fixture = 0; fixture < 50 && o.pass; ++fixture) {
        const int in = static_cast<int>(rng.uniform_int(3, 12));
        const int h1 = static_cast<int>(rng.uniform_int(4, 16));
        const int out = static_cast<int>(rng.uniform_int(2, 5));
        std::vector<int> sizes{in, h1, out};
        if (rng.bernoulli(0.5))
            sizes.insert(sizes.begin() + 2, static_cast<int>(rng.uniform_int(4, 12)));
        Mlp net(sizes, derive_seed(555, static_cast<std::uint64_t>(fixture)));

        const std::size_t batch = static_cast<std::size_t>(rng.uniform_int(1, 6));
        std::vector<std::vector<double>> states;
        std::vector<int> actions;
        std::vector<double> targets;
        for (std::size_t n = 0; n < batch; ++n) {
            std::vector<double> s(static_cast<std::size_t>(in));
            for (auto& v : s) v = rng.uniform(-1.0, 1.0);
            states.push_back(std::move(s));
            actions.push_back(static_cast<int>(rng.uniform_int(0, out - 1)));
            targets.push_back(rng.uniform(-2.0, 2.0));
        }

        auto grads = net.zero_gradients();
        net.td_backward(states, actions, targets, grads);

        auto loss_of = [&]() {
            double loss = 0.0;
            for (std::size_t n = 0; n < batch; ++n) {
                const auto q = net.forward(states[n]);
                const double err = q[static_cast<std::size_t>(actions[n])] - targets[n];
                loss += err * err;
            }
            return loss / static_cast<double>(batch);
        };

        const double h = 1e-5;
        for (std::size_t li = 0; li < net.layers().size() && o.pass; ++li) {
            auto check = [&](double& param, double analytic) {
                const double saved = param;
                param = saved + h;
                const double up = loss_of();
                param = saved - h;
                const double down = loss_of();
                param = saved;
                const double fd = (up - down) / (2.0 * h);
                const double denom = std::max({std::abs(analytic), std::abs(fd), 1e-6});
                const double err = std::abs(analytic - fd) / denom;
                worst = std::max(worst, err);
                o.require(err < 1e-4, "gradient off by " + fmt(err) + " in fixture " +
                                          std::to_string(fixture));
            };
            for (std::size_t k = 0; k < net.layers()[li].weights.size(); ++k)
                check(net.layers()[li].weights[k], grads.layers[li].weights[k]);
            for (std::size_t k = 0; k < net.layers()[li].bias.size(); ++k)
                check(net.layers()[li].bias[k], grads.layers[li].bias[k]);
        }
    }
    o.note("50 fixtures, worst rel err " + fmt(worst));
    return o;
}

// ---------------------------------------------------------------------------
// criterion 4: the enumerable-optimum toy is learned within 200 episodes

ScenarioSpec toy_spec(std::uint64_t seed) {
    ScenarioSpec spec;
    spec.seed = seed;
    spec.vehicle_count = 10;
    spec.penetration_ratio = 1.0;
    spec.episode_slots = 6;
    spec.server_count = 2;
    spec.area_width_m = 300.0;
    spec.area_height_m = 300.0;
    spec.route_count = 3;
    spec.ap_range_m = 500.0;
    spec.server_overrides.resize(2);
    spec.server_overrides[1].reserved_frac = 1.0;  // server 1 never admits
    return spec;
}

Outcome criterion_toy_learning() {
    Outcome o;
    const NormBounds bounds = NormBounds::from_spec(toy_spec(0));
    auto factory = [&](std::size_t episode) {
        return Env(generate_scenario(toy_spec(3000 + episode)), RewardParams{}, bounds);
    };
    DqnConfig c;
    c.hidden_sizes = {32, 32};
    c.batch_size = 32;
    c.replay_capacity = 20000;
    c.epsilon_decay_steps = 3000;
    c.target_sync_interval = 200;
    c.seed = 4;
    const TrainResult result = train(factory, c, 120);
    o.require(result.best.has_value(), "training produced no checkpoint");
    o.require(!result.diverged, "training diverged");
    if (!result.best) return o;

    DqnAgent agent(*result.best, c, bounds);
    std::size_t feasible_picks = 0, steps = 0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        Env env(generate_scenario(toy_spec(9000 + s)), RewardParams{}, bounds);
        MdpState state = env.reset();
        while (!env.done()) {
            const int a = agent.act(state, false);
            if (a == 0) ++feasible_picks;
            ++steps;
            const auto out = env.step(a);
            if (out.next_state) state = *out.next_state;
        }
    }
    const double frac =
        steps > 0 ? static_cast<double>(feasible_picks) / static_cast<double>(steps)
                  : 0.0;
    o.require(frac >= 0.95, "feasible-server rate " + fmt(frac) + " < 0.95");
    o.note("120 training episodes, feasible-server rate " + fmt(frac) + " over " +
           std::to_string(steps) + " eval steps");
    return o;
}

// ---------------------------------------------------------------------------
// criteria 5, 6, 8: desk-scale study (train once, sweep once, audit traces)

ScenarioSpec desk_spec(std::uint64_t seed) {
    ScenarioSpec spec;  // defaults scaled from the 1986-vehicle setup
    spec.seed = seed;
    spec.vehicle_count = 200;
    spec.episode_slots = 10;
    spec.server_count = 4;
    return spec;
}

struct DeskStudy {
    SweepResult sweep;
    std::map<std::pair<std::string, double>, const MetricAggregate*> by_cell;
    bool trained = false;
    std::string train_note;
};

DeskStudy run_desk_study() {
    DeskStudy study;
    const ScenarioSpec base = desk_spec(1);
    // study configuration: a latency weight and delay normalization that give
    // the latency term useful dynamic range, and a shorter bootstrap horizon
    NormBounds bounds = NormBounds::from_spec(base);
    bounds.delay_cap_s = 2.0 * base.network.sync_threshold_s;
    RewardParams reward;
    reward.zeta_weight = 40.0;

    const std::vector<double> train_prs{0.2, 0.8};
    auto factory = [&](std::size_t episode) {
        ScenarioSpec spec = base;
        spec.seed = derive_seed(base.seed, 0xE0 + episode);
        spec.penetration_ratio = train_prs[episode % train_prs.size()];
        return Env(generate_scenario(spec), reward, bounds);
    };
    DqnConfig c;
    c.seed = 1;
    c.gamma = 0.9;
    c.learning_rate = 2e-3;
    const TrainResult trained = train(factory, c, 300);
    study.trained = trained.best.has_value() && !trained.diverged;
    study.train_note = "300 training episodes, best mean reward " +
                       fmt(trained.best ? trained.best_reward : 0.0);
    if (!study.trained) return study;

    const Mlp checkpoint = *trained.best;
    const DqnConfig eval_config = c;
    PolicyFactory policies = [&, checkpoint](const std::string& name,
                                             const Scenario& scenario,
                                             std::uint64_t seed)
        -> std::unique_ptr<Policy> {
        if (name == "random")
            return std::make_unique<RandomPolicy>(derive_seed(seed, 101));
        if (name == "greedy")
            return std::make_unique<GreedyPolicy>(scenario.spec.nominal_service_time_s);
        return std::make_unique<DqnAgent>(checkpoint, eval_config, bounds);
    };

    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = 1; s <= 20; ++s) seeds.push_back(s);
    study.sweep = pr_sweep({"random", "greedy", "dqn"}, {0.2, 0.8}, seeds, base,
                           reward, bounds, policies, 0);
    for (const auto& agg : study.sweep.aggregates)
        study.by_cell[{agg.policy, agg.pr}] = &agg;
    return study;
}

Outcome criterion_baseline_ordering(const DeskStudy& study) {
    Outcome o;
    o.require(study.trained, "training failed: " + study.train_note);
    if (!study.trained) return o;

    for (double pr : {0.2, 0.8}) {
        const auto* dqn = study.by_cell.at({"dqn", pr});
        const auto* random_agg = study.by_cell.at({"random", pr});
        const auto* greedy = study.by_cell.at({"greedy", pr});
        o.require(dqn->sync_error.count == 20, "dqn sync undefined on some seeds");
        o.require(dqn->sync_error.mean < random_agg->sync_error.mean,
                  "dqn " + fmt(dqn->sync_error.mean) + " !< random " +
                      fmt(random_agg->sync_error.mean) + " at pr " + fmt(pr));
        o.require(dqn->sync_error.mean < greedy->sync_error.mean,
                  "dqn " + fmt(dqn->sync_error.mean) + " !< greedy " +
                      fmt(greedy->sync_error.mean) + " at pr " + fmt(pr));
    }
    const auto* greedy_high = study.by_cell.at({"greedy", 0.8});
    o.require(greedy_high->max_util.mean >= 0.95,
              "greedy max utilization " + fmt(greedy_high->max_util.mean) + " < 0.95");

    std::ostringstream note;
    note << "sync error (pr 0.2 / 0.8): dqn "
         << fmt(study.by_cell.at({"dqn", 0.2})->sync_error.mean) << "/"
         << fmt(study.by_cell.at({"dqn", 0.8})->sync_error.mean) << ", random "
         << fmt(study.by_cell.at({"random", 0.2})->sync_error.mean) << "/"
         << fmt(study.by_cell.at({"random", 0.8})->sync_error.mean) << ", greedy "
         << fmt(study.by_cell.at({"greedy", 0.2})->sync_error.mean) << "/"
         << fmt(study.by_cell.at({"greedy", 0.8})->sync_error.mean)
         << ", greedy max util " << fmt(greedy_high->max_util.mean);
    o.note(note.str());
    return o;
}

Outcome criterion_pr_trend(const DeskStudy& study) {
    Outcome o;
    o.require(study.trained, "training failed");
    if (!study.trained) return o;
    for (const std::string policy : {"random", "greedy", "dqn"}) {
        const double low = study.by_cell.at({policy, 0.2})->sync_error.mean;
        const double high = study.by_cell.at({policy, 0.8})->sync_error.mean;
        o.require(high >= low, policy + " sync error falls from " + fmt(low) + " to " +
                                   fmt(high) + " as pr rises");
        o.note(policy + " " + fmt(low) + " -> " + fmt(high));
    }
    return o;
}

Outcome criterion_metric_coherence(const DeskStudy& study) {
    Outcome o;
    o.require(study.trained, "training failed");
    if (!study.trained) return o;

    const fs::path dir = "acceptance_work/coherence";
    fs::remove_all(dir);
    fs::create_directories(dir / "traces");
    write_sweep_csv((dir / "sweep.csv").string(), study.sweep.cells);
    const auto rows = read_sweep_csv((dir / "sweep.csv").string());
    o.require(rows.size() == study.sweep.cells.size(), "row count mismatch");

    for (std::size_t i = 0; i < study.sweep.cells.size() && o.pass; ++i) {
        const auto& cell = study.sweep.cells[i];
        const fs::path trace =
            dir / "traces" / trace_file_name(cell.policy, cell.pr, cell.seed);
        write_trace_file(trace.string(), cell.steps);
        const EpisodeMetrics replayed = metrics_from_steps(read_trace_file(trace.string()));

        o.require(replayed.sync_error_rate == cell.metrics.sync_error_rate &&
                      replayed.sched_success_rate == cell.metrics.sched_success_rate &&
                      replayed.max_utilization == cell.metrics.max_utilization &&
                      replayed.mean_utilization_time_avg ==
                          cell.metrics.mean_utilization_time_avg &&
                      replayed.mean_reward == cell.metrics.mean_reward,
                  "trace recomputation differs for " + cell.policy + " pr " +
                      fmt(cell.pr) + " seed " + std::to_string(cell.seed));

        const auto& row = rows[i].metrics;
        const auto undefined = std::numeric_limits<double>::quiet_NaN();
        auto same = [](double a, double b) {
            return (std::isnan(a) && std::isnan(b)) || a == b;
        };
        o.require(same(row.sync_error_rate.value_or(undefined),
                       replayed.sync_error_rate.value_or(undefined)) &&
                      same(row.sched_success_rate, replayed.sched_success_rate) &&
                      same(row.max_utilization, replayed.max_utilization) &&
                      same(row.mean_utilization_time_avg,
                           replayed.mean_utilization_time_avg) &&
                      same(row.mean_reward, replayed.mean_reward),
                  "csv row differs from trace recomputation for " + cell.policy);
    }
    o.note(std::to_string(study.sweep.cells.size()) + " cells audited");
    return o;
}

// ---------------------------------------------------------------------------
// criterion 7: command reruns are byte-identical

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(EDGETWIN_CLI_PATH) + " " + args +
                            " >/dev/null 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome criterion_determinism() {
    Outcome o;
    const fs::path dir = "acceptance_work/determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);

    nlohmann::json j;
    j["scenario"]["seed"] = 5;
    j["scenario"]["vehicle_count"] = 40;
    j["scenario"]["episode_slots"] = 4;
    j["scenario"]["server_count"] = 3;
    j["scenario"]["route_count"] = 5;
    j["scenario"]["area_width_m"] = 700.0;
    j["scenario"]["area_height_m"] = 700.0;
    j["run"]["eval_seeds"] = {1, 2};
    j["run"]["pr_values"] = {0.3, 0.8};
    j["run"]["policies"] = {"random", "greedy"};
    j["run"]["episodes"] = 8;
    j["dqn"]["hidden_sizes"] = {16};
    j["dqn"]["batch_size"] = 16;
    std::ofstream(dir / "config.json") << j.dump(2);
    const std::string cfg = (dir / "config.json").string();

    o.require(run_cli("sweep --config " + cfg + " --out " + (dir / "s1").string()) == 0,
              "first sweep failed");
    o.require(run_cli("sweep --config " + cfg + " --out " + (dir / "s2").string()) == 0,
              "second sweep failed");
    o.require(slurp(dir / "s1" / "sweep.csv") == slurp(dir / "s2" / "sweep.csv"),
              "sweep.csv differs across reruns");
    o.require(slurp(dir / "s1" / "summary.json") == slurp(dir / "s2" / "summary.json"),
              "summary.json differs across reruns");

    o.require(run_cli("train --config " + cfg + " --out " + (dir / "t1").string()) == 0,
              "first train failed");
    o.require(run_cli("train --config " + cfg + " --out " + (dir / "t2").string()) == 0,
              "second train failed");
    o.require(slurp(dir / "t1" / "curve.csv") == slurp(dir / "t2" / "curve.csv"),
              "curve.csv differs across reruns");
    o.require(slurp(dir / "t1" / "checkpoint.bin") == slurp(dir / "t2" / "checkpoint.bin"),
              "checkpoint differs across reruns");

    // trace files too
    for (const auto& entry : fs::directory_iterator(dir / "s1" / "traces")) {
        const fs::path twin = dir / "s2" / "traces" / entry.path().filename();
        o.require(fs::exists(twin) && slurp(entry.path()) == slurp(twin),
                  "trace file differs: " + entry.path().filename().string());
    }
    o.note("sweep + train reruns byte-identical");
    return o;
}

}  // namespace

int main() {
    struct Row {
        int id;
        std::string name;
        Outcome outcome;
        double seconds;
    };
    std::vector<Row> rows;

    auto timed = [&](int id, const std::string& name, auto&& fn) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome = fn();
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        rows.push_back({id, name, std::move(outcome), seconds});
        const Row& r = rows.back();
        std::printf("[%s] criterion %d: %s (%s) [%.1fs]\n",
                    r.outcome.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                    r.outcome.detail.c_str(), r.seconds);
        std::fflush(stdout);
    };

    timed(1, "formula oracle suite", criterion_formula_oracle);
    timed(2, "constraint safety via event-log replay", criterion_constraint_safety);
    timed(3, "finite-difference gradient check", criterion_gradient_check);
    timed(4, "enumerable-optimum toy learning", criterion_toy_learning);

    DeskStudy study;
    {
        const auto start = std::chrono::steady_clock::now();
        study = run_desk_study();
        std::fprintf(stderr, "desk study: %s [%.1fs]\n", study.train_note.c_str(),
                     std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                   start)
                         .count());
    }
    timed(5, "baseline ordering at desk scale",
          [&] { return criterion_baseline_ordering(study); });
    timed(6, "sync error trend across penetration ratios",
          [&] { return criterion_pr_trend(study); });
    timed(7, "byte-identical reruns", criterion_determinism);
    timed(8, "metric/trace coherence",
          [&] { return criterion_metric_coherence(study); });

    int failures = 0;
    for (const auto& r : rows)
        if (!r.outcome.pass) ++failures;
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
