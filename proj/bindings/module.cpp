#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "edgetwin/config.hpp"
#include "edgetwin/dqn.hpp"
#include "edgetwin/metrics.hpp"
#include "edgetwin/scenario_io.hpp"

namespace py = pybind11;
using namespace edgetwin;

namespace {

// same per-episode seeding and penetration-ratio cycling as the CLI trainer
TrainResult train_on_spec(const ScenarioSpec& base, const RewardParams& reward,
                          const DqnConfig& config, std::size_t episodes,
                          const std::vector<double>& pr_cycle) {
    const NormBounds bounds = NormBounds::from_spec(base);
    auto factory = [&](std::size_t episode) {
        ScenarioSpec spec = base;
        spec.seed = derive_seed(base.seed, 0xE0 + episode);
        if (!pr_cycle.empty())
            spec.penetration_ratio = pr_cycle[episode % pr_cycle.size()];
        return Env(generate_scenario(spec), reward, bounds);
    };
    return train(factory, config, episodes);
}

SweepResult sweep_on_spec(const std::vector<std::string>& policies,
                          const std::vector<double>& pr_values,
                          const std::vector<std::uint64_t>& seeds,
                          const ScenarioSpec& base, const RewardParams& reward,
                          const DqnConfig& dqn_config,
                          const std::string& checkpoint_path, unsigned workers) {
    const NormBounds bounds = NormBounds::from_spec(base);
    std::optional<Mlp> checkpoint;
    if (!checkpoint_path.empty()) checkpoint = Mlp::load(checkpoint_path);
    PolicyFactory factory = [&, checkpoint](const std::string& name,
                                            const Scenario& scenario,
                                            std::uint64_t seed)
        -> std::unique_ptr<Policy> {
        if (name == "random")
            return std::make_unique<RandomPolicy>(derive_seed(seed, 101));
        if (name == "greedy")
            return std::make_unique<GreedyPolicy>(scenario.spec.nominal_service_time_s);
        if (name == "dqn") {
            if (!checkpoint)
                throw ValidationError("policy 'dqn' requested without a checkpoint");
            return std::make_unique<DqnAgent>(*checkpoint, dqn_config, bounds);
        }
        throw ValidationError("unknown policy: " + name);
    };
    return pr_sweep(policies, pr_values, seeds, base, reward, bounds, factory, workers);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "edge digital-twin provisioning simulator";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ContractError>(m, "ContractError", PyExc_RuntimeError);
    py::register_exception<EmptyEpisodeError>(m, "EmptyEpisodeError", PyExc_RuntimeError);

    py::class_<Vec2>(m, "Vec2")
        .def(py::init<>())
        .def(py::init([](double x, double y) { return Vec2{x, y}; }))
        .def_readwrite("x", &Vec2::x)
        .def_readwrite("y", &Vec2::y);

    py::class_<ResourceVec>(m, "ResourceVec")
        .def(py::init<>())
        .def(py::init([](double cpu, double gpu, double store) {
                 return ResourceVec{cpu, gpu, store};
             }),
             py::arg("cpu"), py::arg("gpu"), py::arg("store"))
        .def_readwrite("cpu", &ResourceVec::cpu)
        .def_readwrite("gpu", &ResourceVec::gpu)
        .def_readwrite("store", &ResourceVec::store);

    py::class_<EdgeServer>(m, "EdgeServer")
        .def(py::init<std::size_t, ResourceVec, ResourceVec>(), py::arg("id"),
             py::arg("capacity"), py::arg("reserved"))
        .def_property_readonly("id", &EdgeServer::id)
        .def_property_readonly("capacity", &EdgeServer::capacity)
        .def_property_readonly("reserved", &EdgeServer::reserved)
        .def("used", &EdgeServer::used);

    py::class_<AccessPoint>(m, "AccessPoint")
        .def(py::init<>())
        .def_readwrite("id", &AccessPoint::id)
        .def_readwrite("owner", &AccessPoint::owner)
        .def_readwrite("position", &AccessPoint::position)
        .def_readwrite("range", &AccessPoint::range)
        .def_readwrite("hops_to", &AccessPoint::hops_to);

    py::class_<NetworkParams>(m, "NetworkParams")
        .def(py::init<>())
        .def_readwrite("bandwidth_hz", &NetworkParams::bandwidth_hz)
        .def_readwrite("noise_power_w", &NetworkParams::noise_power_w)
        .def_readwrite("path_loss_exponent", &NetworkParams::path_loss_exponent)
        .def_readwrite("per_hop_delay_s_per_bit",
                       &NetworkParams::per_hop_delay_s_per_bit)
        .def_readwrite("sync_threshold_s", &NetworkParams::sync_threshold_s)
        .def_readwrite("min_distance_m", &NetworkParams::min_distance_m);

    py::class_<UtilizationRates>(m, "UtilizationRates")
        .def_readonly("cpu", &UtilizationRates::cpu)
        .def_readonly("gpu", &UtilizationRates::gpu)
        .def_readonly("store", &UtilizationRates::store);

    m.def("utilization_rate", &utilization_rate);
    m.def("mean_utilization", [](const std::vector<EdgeServer>& servers) {
        return mean_utilization(servers);
    });
    m.def("nearest_ap_in_range",
          [](Vec2 position, const std::vector<AccessPoint>& aps) {
              return nearest_ap_in_range(position, aps);
          });

    py::class_<CavSample>(m, "CavSample")
        .def(py::init<>())
        .def_readwrite("vehicle_id", &CavSample::vehicle_id)
        .def_readwrite("time_slot", &CavSample::time_slot)
        .def_readwrite("status_bits", &CavSample::status_bits)
        .def_readwrite("sensing_bits", &CavSample::sensing_bits)
        .def_readwrite("position", &CavSample::position)
        .def_readwrite("tx_power_gain_w", &CavSample::tx_power_gain_w)
        .def_readwrite("cpu_ops", &CavSample::cpu_ops)
        .def_readwrite("gpu_ops", &CavSample::gpu_ops)
        .def_readwrite("store_ops", &CavSample::store_ops)
        .def("validate", &CavSample::validate);

    py::class_<SyncBreakdown>(m, "SyncBreakdown")
        .def_readonly("wireless_s", &SyncBreakdown::wireless_s)
        .def_readonly("wired_s", &SyncBreakdown::wired_s)
        .def_readonly("processing_s", &SyncBreakdown::processing_s)
        .def_readonly("total_s", &SyncBreakdown::total_s)
        .def_readonly("within_threshold", &SyncBreakdown::within_threshold);

    m.def("payload_size", &payload_size);
    m.def("uplink_rate", &uplink_rate);
    m.def("wireless_delay", &wireless_delay);
    m.def("wired_delay", &wired_delay);
    m.def("processing_delay", &processing_delay);
    m.def("sync_latency", &sync_latency);

    py::class_<Range>(m, "Range")
        .def(py::init<>())
        .def(py::init([](double lo, double hi) { return Range{lo, hi}; }))
        .def_readwrite("min", &Range::min)
        .def_readwrite("max", &Range::max);

    py::class_<IntRange>(m, "IntRange")
        .def(py::init<>())
        .def(py::init([](int lo, int hi) { return IntRange{lo, hi}; }))
        .def_readwrite("min", &IntRange::min)
        .def_readwrite("max", &IntRange::max);

    py::class_<PayloadModel>(m, "PayloadModel")
        .def(py::init<>())
        .def_readwrite("status_bits", &PayloadModel::status_bits)
        .def_readwrite("sensing_log_mean", &PayloadModel::sensing_log_mean)
        .def_readwrite("sensing_log_sigma", &PayloadModel::sensing_log_sigma);

    py::class_<OpModel>(m, "OpModel")
        .def(py::init<>())
        .def_readwrite("cpu_ops_per_bit", &OpModel::cpu_ops_per_bit)
        .def_readwrite("gpu_ops_per_bit", &OpModel::gpu_ops_per_bit)
        .def_readwrite("store_ops_per_bit", &OpModel::store_ops_per_bit)
        .def_readwrite("noise_frac", &OpModel::noise_frac);

    py::class_<ServerOverride>(m, "ServerOverride")
        .def(py::init<>())
        .def_readwrite("capacity", &ServerOverride::capacity)
        .def_readwrite("reserved_frac", &ServerOverride::reserved_frac)
        .def_readwrite("cross_hops", &ServerOverride::cross_hops);

    py::class_<ScenarioSpec>(m, "ScenarioSpec")
        .def(py::init<>())
        .def_readwrite("seed", &ScenarioSpec::seed)
        .def_readwrite("vehicle_count", &ScenarioSpec::vehicle_count)
        .def_readwrite("penetration_ratio", &ScenarioSpec::penetration_ratio)
        .def_readwrite("episode_slots", &ScenarioSpec::episode_slots)
        .def_readwrite("slot_duration_s", &ScenarioSpec::slot_duration_s)
        .def_readwrite("area_width_m", &ScenarioSpec::area_width_m)
        .def_readwrite("area_height_m", &ScenarioSpec::area_height_m)
        .def_readwrite("route_count", &ScenarioSpec::route_count)
        .def_readwrite("waypoints_per_route", &ScenarioSpec::waypoints_per_route)
        .def_readwrite("speed_mps", &ScenarioSpec::speed_mps)
        .def_readwrite("server_count", &ScenarioSpec::server_count)
        .def_readwrite("ap_range_m", &ScenarioSpec::ap_range_m)
        .def_readwrite("cpu_capacity_ops", &ScenarioSpec::cpu_capacity_ops)
        .def_readwrite("gpu_capacity_ops", &ScenarioSpec::gpu_capacity_ops)
        .def_readwrite("store_capacity_ops", &ScenarioSpec::store_capacity_ops)
        .def_readwrite("reserved_frac", &ScenarioSpec::reserved_frac)
        .def_readwrite("cross_hops", &ScenarioSpec::cross_hops)
        .def_readwrite("own_hops", &ScenarioSpec::own_hops)
        .def_readwrite("hop_capacity_coupling", &ScenarioSpec::hop_capacity_coupling)
        .def_readwrite("payload", &ScenarioSpec::payload)
        .def_readwrite("ops", &ScenarioSpec::ops)
        .def_readwrite("tx_power_gain_w", &ScenarioSpec::tx_power_gain_w)
        .def_readwrite("network", &ScenarioSpec::network)
        .def_readwrite("nominal_service_time_s", &ScenarioSpec::nominal_service_time_s)
        .def_readwrite("server_overrides", &ScenarioSpec::server_overrides)
        .def("validate", &ScenarioSpec::validate);

    py::class_<VehicleTrace>(m, "VehicleTrace")
        .def_readonly("vehicle_id", &VehicleTrace::vehicle_id)
        .def_readonly("is_cav", &VehicleTrace::is_cav)
        .def_readonly("positions", &VehicleTrace::positions)
        .def_readonly("samples", &VehicleTrace::samples);

    py::class_<Topology>(m, "Topology")
        .def_readonly("servers", &Topology::servers)
        .def_readonly("aps", &Topology::aps)
        .def_readonly("params", &Topology::params);

    py::class_<Scenario>(m, "Scenario")
        .def_readonly("spec", &Scenario::spec)
        .def_readonly("topology", &Scenario::topology)
        .def_readonly("traces", &Scenario::traces);

    m.def("generate_scenario", &generate_scenario);
    m.def("count_samples", &count_samples);
    m.def("save_scenario", &save_scenario);
    m.def("load_scenario", &load_scenario);

    py::class_<RewardParams>(m, "RewardParams")
        .def(py::init<>())
        .def_readwrite("delta_pos", &RewardParams::delta_pos)
        .def_readwrite("delta_neg", &RewardParams::delta_neg)
        .def_readwrite("epsilon_weight", &RewardParams::epsilon_weight)
        .def_readwrite("zeta_weight", &RewardParams::zeta_weight);

    py::class_<NormBounds>(m, "NormBounds")
        .def(py::init<>())
        .def_static("from_spec", &NormBounds::from_spec)
        .def_readwrite("delay_cap_s", &NormBounds::delay_cap_s)
        .def_readwrite("cap_ops", &NormBounds::cap_ops)
        .def_readwrite("task_ops", &NormBounds::task_ops);

    py::class_<MdpState>(m, "MdpState")
        .def_readonly("trans_delay_s", &MdpState::trans_delay_s)
        .def_readonly("capacities", &MdpState::capacities)
        .def_readonly("utilized", &MdpState::utilized)
        .def_readonly("task_req", &MdpState::task_req)
        .def("flat", &MdpState::flat)
        .def("normalized", &MdpState::normalized);

    py::class_<StepInfo>(m, "StepInfo")
        .def_readonly("slot", &StepInfo::slot)
        .def_readonly("vehicle_id", &StepInfo::vehicle_id)
        .def_readonly("ap_id", &StepInfo::ap_id)
        .def_readonly("action", &StepInfo::action)
        .def_readonly("admitted", &StepInfo::admitted)
        .def_readonly("sync", &StepInfo::sync)
        .def_readonly("mean_util", &StepInfo::mean_util)
        .def_readonly("max_server_util", &StepInfo::max_server_util);

    py::class_<StepOutcome>(m, "StepOutcome")
        .def_readonly("next_state", &StepOutcome::next_state)
        .def_readonly("reward", &StepOutcome::reward)
        .def_readonly("info", &StepOutcome::info);

    py::class_<Env>(m, "Env")
        .def(py::init<Scenario, RewardParams, NormBounds>(), py::arg("scenario"),
             py::arg("reward") = RewardParams{}, py::arg("bounds") = NormBounds{})
        .def("reset", &Env::reset, py::return_value_policy::copy)
        .def("step", &Env::step)
        .def("done", &Env::done)
        .def("horizon", &Env::horizon)
        .def("server_count", &Env::server_count)
        .def("nominal_service_time", &Env::nominal_service_time);

    m.def("episode_reward", [](const std::vector<double>& rewards) {
        return episode_reward(rewards);
    });

    py::class_<Policy>(m, "Policy")
        .def("act", &Policy::act, py::arg("state"), py::arg("explore") = false)
        .def("name", &Policy::name);

    py::class_<RandomPolicy, Policy>(m, "RandomPolicy")
        .def(py::init<std::uint64_t>(), py::arg("seed"));

    py::class_<GreedyPolicy, Policy>(m, "GreedyPolicy")
        .def(py::init<double>(), py::arg("nominal_service_time_s"));

    py::class_<DqnConfig>(m, "DqnConfig")
        .def(py::init<>())
        .def_readwrite("hidden_sizes", &DqnConfig::hidden_sizes)
        .def_readwrite("learning_rate", &DqnConfig::learning_rate)
        .def_readwrite("gamma", &DqnConfig::gamma)
        .def_readwrite("replay_capacity", &DqnConfig::replay_capacity)
        .def_readwrite("batch_size", &DqnConfig::batch_size)
        .def_readwrite("target_sync_interval", &DqnConfig::target_sync_interval)
        .def_readwrite("epsilon_start", &DqnConfig::epsilon_start)
        .def_readwrite("epsilon_end", &DqnConfig::epsilon_end)
        .def_readwrite("epsilon_decay_steps", &DqnConfig::epsilon_decay_steps)
        .def_readwrite("grad_clip_norm", &DqnConfig::grad_clip_norm)
        .def_readwrite("double_dqn", &DqnConfig::double_dqn)
        .def_readwrite("seed", &DqnConfig::seed);

    py::class_<Mlp>(m, "Mlp")
        .def("forward",
             [](const Mlp& net, const std::vector<double>& input) {
                 return net.forward(input);
             })
        .def("layer_sizes", &Mlp::layer_sizes)
        .def("save", &Mlp::save)
        .def_static("load", &Mlp::load);

    py::class_<DqnAgent, Policy>(m, "DqnAgent")
        .def(py::init<int, int, DqnConfig, NormBounds>(), py::arg("input_dim"),
             py::arg("action_count"), py::arg("config"), py::arg("bounds"))
        .def(py::init<Mlp, DqnConfig, NormBounds>(), py::arg("network"),
             py::arg("config"), py::arg("bounds"))
        .def("save", &DqnAgent::save)
        .def("epsilon", &DqnAgent::epsilon);

    py::class_<EpisodeRow>(m, "EpisodeRow")
        .def_readonly("episode", &EpisodeRow::episode)
        .def_readonly("mean_reward", &EpisodeRow::mean_reward)
        .def_readonly("loss", &EpisodeRow::loss)
        .def_readonly("epsilon", &EpisodeRow::epsilon);

    py::class_<TrainResult>(m, "TrainResult")
        .def_readonly("curve", &TrainResult::curve)
        .def_readonly("diverged", &TrainResult::diverged)
        .def_readonly("diagnostic", &TrainResult::diagnostic)
        .def_readonly("best_episode", &TrainResult::best_episode)
        .def_readonly("best_reward", &TrainResult::best_reward)
        .def("save_best", [](const TrainResult& r, const std::string& path) {
            if (!r.best) throw ValidationError("no checkpoint: training was empty");
            r.best->save(path);
        });

    m.def("train", &train_on_spec, py::arg("spec"), py::arg("reward"),
          py::arg("config"), py::arg("episodes"),
          py::arg("pr_cycle") = std::vector<double>{});

    py::class_<EpisodeMetrics>(m, "EpisodeMetrics")
        .def_readonly("sync_error_rate", &EpisodeMetrics::sync_error_rate)
        .def_readonly("sched_success_rate", &EpisodeMetrics::sched_success_rate)
        .def_readonly("max_utilization", &EpisodeMetrics::max_utilization)
        .def_readonly("mean_utilization_time_avg",
                      &EpisodeMetrics::mean_utilization_time_avg)
        .def_readonly("mean_reward", &EpisodeMetrics::mean_reward)
        .def_readonly("tasks", &EpisodeMetrics::tasks)
        .def_readonly("admits", &EpisodeMetrics::admits)
        .def_readonly("drops", &EpisodeMetrics::drops)
        .def_readonly("threshold_violations", &EpisodeMetrics::threshold_violations);

    py::class_<SweepCell>(m, "SweepCell")
        .def_readonly("policy", &SweepCell::policy)
        .def_readonly("pr", &SweepCell::pr)
        .def_readonly("seed", &SweepCell::seed)
        .def_readonly("metrics", &SweepCell::metrics);

    py::class_<Aggregate>(m, "Aggregate")
        .def_readonly("mean", &Aggregate::mean)
        .def_readonly("stddev", &Aggregate::stddev)
        .def_readonly("count", &Aggregate::count);

    py::class_<MetricAggregate>(m, "MetricAggregate")
        .def_readonly("policy", &MetricAggregate::policy)
        .def_readonly("pr", &MetricAggregate::pr)
        .def_readonly("episodes", &MetricAggregate::episodes)
        .def_readonly("sync_error", &MetricAggregate::sync_error)
        .def_readonly("sched_success", &MetricAggregate::sched_success)
        .def_readonly("max_util", &MetricAggregate::max_util)
        .def_readonly("mean_util", &MetricAggregate::mean_util)
        .def_readonly("mean_reward", &MetricAggregate::mean_reward);

    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("cells", &SweepResult::cells)
        .def_readonly("aggregates", &SweepResult::aggregates);

    m.def("sweep", &sweep_on_spec, py::arg("policies"), py::arg("pr_values"),
          py::arg("seeds"), py::arg("spec"), py::arg("reward") = RewardParams{},
          py::arg("dqn_config") = DqnConfig{}, py::arg("checkpoint") = std::string{},
          py::arg("workers") = 1u);

    m.def(
        "run_episode",
        [](Env& env, Policy& policy, bool explore) {
            return run_episode(env, policy, explore).metrics;
        },
        py::arg("env"), py::arg("policy"), py::arg("explore") = false);

    m.attr("__version__") = "0.1.0";
}
