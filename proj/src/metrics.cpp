#include "edgetwin/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "edgetwin/dqn.hpp"
#include "edgetwin/traffic.hpp"

namespace edgetwin {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string step_to_line(const StepRecord& r) {
    nlohmann::json j;
    j["step"] = r.step;
    j["slot"] = r.slot;
    j["vehicle"] = r.vehicle;
    j["ap"] = r.ap;
    j["action"] = r.action;
    j["admitted"] = r.admitted;
    j["wireless"] = r.wireless_s;
    j["wired"] = r.wired_s;
    j["processing"] = r.processing_s;
    j["total"] = r.total_s;
    j["within"] = r.within_threshold;
    j["mean_util"] = r.mean_util;
    j["max_server_util"] = r.max_server_util;
    j["reward"] = r.reward;
    return j.dump();
}

StepRecord step_from_line(const std::string& line) {
    const auto j = nlohmann::json::parse(line);
    StepRecord r;
    r.step = j.at("step").get<std::size_t>();
    r.slot = j.at("slot").get<int>();
    r.vehicle = j.at("vehicle").get<std::size_t>();
    r.ap = j.at("ap").get<std::size_t>();
    r.action = j.at("action").get<int>();
    r.admitted = j.at("admitted").get<bool>();
    r.wireless_s = j.at("wireless").get<double>();
    r.wired_s = j.at("wired").get<double>();
    r.processing_s = j.at("processing").get<double>();
    r.total_s = j.at("total").get<double>();
    r.within_threshold = j.at("within").get<bool>();
    r.mean_util = j.at("mean_util").get<double>();
    r.max_server_util = j.at("max_server_util").get<double>();
    r.reward = j.at("reward").get<double>();
    return r;
}

EpisodeMetrics metrics_from_steps(std::span<const StepRecord> steps) {
    EpisodeMetrics m;
    m.tasks = steps.size();
    double util_sum = 0.0;
    double reward_sum = 0.0;
    for (const auto& s : steps) {
        if (s.admitted) {
            ++m.admits;
            if (!s.within_threshold) ++m.threshold_violations;
        }
        m.max_utilization = std::max(m.max_utilization, s.max_server_util);
        util_sum += s.mean_util;
        reward_sum += s.reward;
    }
    m.drops = m.tasks - m.admits;
    if (m.tasks > 0) {
        m.sched_success_rate =
            static_cast<double>(m.admits) / static_cast<double>(m.tasks);
        m.mean_utilization_time_avg = util_sum / static_cast<double>(m.tasks);
        m.mean_reward = reward_sum / static_cast<double>(m.tasks);
    }
    if (m.admits > 0)
        m.sync_error_rate = static_cast<double>(m.threshold_violations) /
                            static_cast<double>(m.admits);
    return m;
}

EpisodeRun run_episode(Env& env, Policy& policy, bool explore) {
    EpisodeRun run;
    MdpState state = env.reset();
    std::size_t step = 0;
    for (;;) {
        const int action = policy.act(state, explore);
        const StepOutcome out = env.step(action);
        StepRecord r;
        r.step = step++;
        r.slot = out.info.slot;
        r.vehicle = out.info.vehicle_id;
        r.ap = out.info.ap_id;
        r.action = out.info.action;
        r.admitted = out.info.admitted;
        r.wireless_s = out.info.sync.wireless_s;
        r.wired_s = out.info.sync.wired_s;
        r.processing_s = out.info.sync.processing_s;
        r.total_s = out.info.sync.total_s;
        r.within_threshold = out.info.sync.within_threshold;
        r.mean_util = out.info.mean_util;
        r.max_server_util = out.info.max_server_util;
        r.reward = out.reward;
        run.steps.push_back(r);
        if (!out.next_state) break;
        state = *out.next_state;
    }
    run.metrics = metrics_from_steps(run.steps);
    return run;
}

Aggregate aggregate_values(std::span<const double> values) {
    Aggregate a;
    a.count = values.size();
    if (values.empty()) {
        a.mean = std::numeric_limits<double>::quiet_NaN();
        a.stddev = std::numeric_limits<double>::quiet_NaN();
        return a;
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    a.mean = sum / static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values) sq += (v - a.mean) * (v - a.mean);
    a.stddev = std::sqrt(sq / static_cast<double>(values.size()));
    return a;
}

MetricAggregate aggregate_cells(const std::string& policy, double pr,
                                std::span<const SweepCell> cells) {
    MetricAggregate agg;
    agg.policy = policy;
    agg.pr = pr;
    std::vector<double> sync, sched, maxu, meanu, rew;
    for (const auto& c : cells) {
        if (c.policy != policy || c.pr != pr) continue;
        ++agg.episodes;
        if (c.metrics.sync_error_rate) sync.push_back(*c.metrics.sync_error_rate);
        sched.push_back(c.metrics.sched_success_rate);
        maxu.push_back(c.metrics.max_utilization);
        meanu.push_back(c.metrics.mean_utilization_time_avg);
        rew.push_back(c.metrics.mean_reward);
    }
    agg.sync_error = aggregate_values(sync);
    agg.sched_success = aggregate_values(sched);
    agg.max_util = aggregate_values(maxu);
    agg.mean_util = aggregate_values(meanu);
    agg.mean_reward = aggregate_values(rew);
    return agg;
}

SweepResult pr_sweep(const std::vector<std::string>& policies,
                     const std::vector<double>& pr_values,
                     const std::vector<std::uint64_t>& seeds,
                     const ScenarioSpec& base_spec, const RewardParams& reward,
                     const NormBounds& bounds, const PolicyFactory& make_policy,
                     unsigned workers) {
    if (policies.empty()) throw ValidationError("pr_sweep: no policies");
    if (pr_values.empty()) throw ValidationError("pr_sweep: no pr values");
    if (seeds.empty()) throw ValidationError("pr_sweep: no seeds");
    for (double pr : pr_values)
        if (!(pr > 0.0 && pr <= 1.0))
            throw ValidationError("pr_sweep: pr values must be in (0,1]");

    struct CellKey {
        std::string policy;
        double pr;
        std::uint64_t seed;
    };
    std::vector<CellKey> keys;
    for (const auto& p : policies)
        for (double pr : pr_values)
            for (std::uint64_t s : seeds) keys.push_back({p, pr, s});

    std::vector<SweepCell> cells(keys.size());

    auto run_cell = [&](std::size_t i) {
        const CellKey& key = keys[i];
        ScenarioSpec spec = base_spec;
        spec.penetration_ratio = key.pr;
        spec.seed = key.seed;
        Scenario scenario = generate_scenario(spec);
        auto policy = make_policy(key.policy, scenario, key.seed);
        Env env(std::move(scenario), reward, bounds);
        EpisodeRun run = run_episode(env, *policy, false);
        cells[i] = {key.policy, key.pr, key.seed, std::move(run.metrics),
                    std::move(run.steps)};
    };

    unsigned n_workers = workers == 0 ? std::thread::hardware_concurrency() : workers;
    n_workers = std::max(1u, std::min<unsigned>(n_workers,
                                                static_cast<unsigned>(keys.size())));
    if (n_workers == 1) {
        for (std::size_t i = 0; i < keys.size(); ++i) run_cell(i);
    } else {
        std::mutex mu;
        std::size_t next = 0;
        auto worker = [&] {
            for (;;) {
                std::size_t i;
                {
                    std::lock_guard lock(mu);
                    if (next >= keys.size()) return;
                    i = next++;
                }
                run_cell(i);
            }
        };
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    SweepResult result;
    result.cells = std::move(cells);
    for (const auto& p : policies)
        for (double pr : pr_values)
            result.aggregates.push_back(aggregate_cells(p, pr, result.cells));
    return result;
}

void write_sweep_csv(const std::string& path, std::span<const SweepCell> cells) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + path);
    out << "policy,pr,seed,sync_error,sched_success,max_util,mean_util,mean_reward\n";
    for (const auto& c : cells) {
        const double sync = c.metrics.sync_error_rate.value_or(
            std::numeric_limits<double>::quiet_NaN());
        out << c.policy << ',' << format_double(c.pr) << ',' << c.seed << ','
            << format_double(sync) << ',' << format_double(c.metrics.sched_success_rate)
            << ',' << format_double(c.metrics.max_utilization) << ','
            << format_double(c.metrics.mean_utilization_time_avg) << ','
            << format_double(c.metrics.mean_reward) << '\n';
    }
    if (!out) throw ValidationError("failed writing " + path);
}

std::vector<SweepCell> read_sweep_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read " + path);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty csv: " + path);
    std::vector<SweepCell> cells;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        SweepCell c;
        std::getline(row, c.policy, ',');
        std::getline(row, field, ',');
        c.pr = std::strtod(field.c_str(), nullptr);
        std::getline(row, field, ',');
        c.seed = std::strtoull(field.c_str(), nullptr, 10);
        std::getline(row, field, ',');
        const double sync = std::strtod(field.c_str(), nullptr);
        if (!std::isnan(sync)) c.metrics.sync_error_rate = sync;
        std::getline(row, field, ',');
        c.metrics.sched_success_rate = std::strtod(field.c_str(), nullptr);
        std::getline(row, field, ',');
        c.metrics.max_utilization = std::strtod(field.c_str(), nullptr);
        std::getline(row, field, ',');
        c.metrics.mean_utilization_time_avg = std::strtod(field.c_str(), nullptr);
        std::getline(row, field, ',');
        c.metrics.mean_reward = std::strtod(field.c_str(), nullptr);
        cells.push_back(std::move(c));
    }
    return cells;
}

void write_curve_csv(const std::string& path, std::span<const EpisodeRow> curve) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + path);
    out << "episode,mean_reward,loss,epsilon\n";
    for (const auto& row : curve)
        out << row.episode << ',' << format_double(row.mean_reward) << ','
            << format_double(row.loss) << ',' << format_double(row.epsilon) << '\n';
    if (!out) throw ValidationError("failed writing " + path);
}

void write_trace_file(const std::string& path, std::span<const StepRecord> steps) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + path);
    for (const auto& s : steps) out << step_to_line(s) << '\n';
    if (!out) throw ValidationError("failed writing " + path);
}

std::vector<StepRecord> read_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read " + path);
    std::vector<StepRecord> steps;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) steps.push_back(step_from_line(line));
    }
    return steps;
}

std::string trace_file_name(const std::string& policy, double pr, std::uint64_t seed) {
    return policy + "_pr" + format_double(pr) + "_seed" + std::to_string(seed) +
           ".jsonl";
}

}  // namespace edgetwin
