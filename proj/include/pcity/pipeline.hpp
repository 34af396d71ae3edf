#pragma once

#include <map>
#include <string>
#include <vector>

#include "pcity/config.hpp"

namespace pcity::pipeline {

struct StageTime {
    std::string name;
    double ms = 0.0;
};

struct RunInfo {
    std::string label;
    std::string config_hash;
    std::string mesh_identity;
    std::vector<StageTime> stages;
    std::vector<std::string> outputs;

    bool wind_converged = false;
    bool wind_cached = false;
    bool evacuated = false;
    double evacuation_time_h = 0.0;
    long traffic_steps = 0;
    long clamp_events = 0;
    long node_steps = 0;
    double max_budget_residual = 0.0;
    double max_wall_normal_speed = 0.0;
    double mean_urban_wind_kmh = 0.0;
    double wind_div_after = 0.0;

    std::map<std::string, double> zone_time_means; // zone name -> time-averaged mean
    std::string manifest_path;
};

/// Full scenario: mesh -> coefficient fields -> traffic(+routing) ->
/// emissions -> steady wind (snapshot-cached) -> transport -> diagnostics.
/// Stage failures surface as StageError naming the stage.
RunInfo run_scenario(const ScenarioConfig& cfg);

} // namespace pcity::pipeline
