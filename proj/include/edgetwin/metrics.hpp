#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "edgetwin/dqn.hpp"
#include "edgetwin/env.hpp"
#include "edgetwin/policy.hpp"

namespace edgetwin {

// One evaluation step as exported to the trace files; every aggregate is
// recomputable from these records alone.
struct StepRecord {
    std::size_t step = 0;
    int slot = 0;
    std::size_t vehicle = 0;
    std::size_t ap = 0;
    int action = 0;
    bool admitted = false;
    double wireless_s = 0.0;
    double wired_s = 0.0;
    double processing_s = 0.0;
    double total_s = 0.0;
    bool within_threshold = false;
    double mean_util = 0.0;
    double max_server_util = 0.0;
    double reward = 0.0;
};

std::string step_to_line(const StepRecord& r);
StepRecord step_from_line(const std::string& line);

struct EpisodeMetrics {
    // over admitted tasks only; empty when nothing was admitted
    std::optional<double> sync_error_rate;
    double sched_success_rate = 0.0;
    double max_utilization = 0.0;
    double mean_utilization_time_avg = 0.0;
    double mean_reward = 0.0;
    std::size_t tasks = 0;
    std::size_t admits = 0;
    std::size_t drops = 0;
    std::size_t threshold_violations = 0;
};

EpisodeMetrics metrics_from_steps(std::span<const StepRecord> steps);

struct EpisodeRun {
    EpisodeMetrics metrics;
    std::vector<StepRecord> steps;
};

EpisodeRun run_episode(Env& env, Policy& policy, bool explore = false);

struct Aggregate {
    double mean = 0.0;
    double stddev = 0.0;  // population standard deviation
    std::size_t count = 0;
};

Aggregate aggregate_values(std::span<const double> values);

struct MetricAggregate {
    std::string policy;
    double pr = 0.0;
    std::size_t episodes = 0;
    Aggregate sync_error;  // over episodes where it is defined
    Aggregate sched_success;
    Aggregate max_util;
    Aggregate mean_util;
    Aggregate mean_reward;
};

struct SweepCell {
    std::string policy;
    double pr = 0.0;
    std::uint64_t seed = 0;
    EpisodeMetrics metrics;
    std::vector<StepRecord> steps;
};

struct SweepResult {
    std::vector<SweepCell> cells;        // canonical (policy, pr, seed) order
    std::vector<MetricAggregate> aggregates;
};

MetricAggregate aggregate_cells(const std::string& policy, double pr,
                                std::span<const SweepCell> cells);

// Builds one fresh policy instance for a sweep cell; must be callable from
// worker threads.
using PolicyFactory = std::function<std::unique_ptr<Policy>(
    const std::string& name, const Scenario& scenario, std::uint64_t seed)>;

// Paired evaluation grid: the scenario (hence the task stream) of a cell
// depends only on (pr, seed), never on the policy. Cells run on a small
// worker pool; results are collected into canonical order regardless of
// scheduling.
SweepResult pr_sweep(const std::vector<std::string>& policies,
                     const std::vector<double>& pr_values,
                     const std::vector<std::uint64_t>& seeds,
                     const ScenarioSpec& base_spec, const RewardParams& reward,
                     const NormBounds& bounds, const PolicyFactory& make_policy,
                     unsigned workers = 0);

// CSV / JSONL emission and the matching readers used by trace replay.
std::string format_double(double v);
void write_sweep_csv(const std::string& path, std::span<const SweepCell> cells);
std::vector<SweepCell> read_sweep_csv(const std::string& path);  // steps empty
void write_curve_csv(const std::string& path, std::span<const EpisodeRow> curve);
void write_trace_file(const std::string& path, std::span<const StepRecord> steps);
std::vector<StepRecord> read_trace_file(const std::string& path);
std::string trace_file_name(const std::string& policy, double pr, std::uint64_t seed);

}  // namespace edgetwin
