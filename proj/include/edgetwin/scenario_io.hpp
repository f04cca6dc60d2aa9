#pragma once

#include <string>

#include "edgetwin/traffic.hpp"

namespace edgetwin {

// Scenario artifact layout: <dir>/spec.json, <dir>/topology.json and
// <dir>/traces.jsonl (one vehicle per line). Imported artifacts let external
// traces, e.g. converted SUMO output, drive the simulator.
void save_scenario(const std::string& dir, const Scenario& scenario);
Scenario load_scenario(const std::string& dir);

std::string trace_to_line(const VehicleTrace& trace);
VehicleTrace trace_from_line(const std::string& line);

}  // namespace edgetwin
