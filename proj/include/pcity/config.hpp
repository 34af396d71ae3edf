#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "pcity/synth.hpp"
#include "pcity/toml.hpp"

namespace pcity {

struct EmissionCoeffs {
    std::array<double, 6> f{};
    std::string provenance; // mandatory citation of the coefficient source
};

/// Full parameter set for one scenario run. Values marked "calibrated" in the
/// README have no published source and are desk-scale stability choices.
/// gamma1 = 3.6 and gamma2 = 1e-3/3.6² are fixed model constants, not keys.
struct ScenarioConfig {
    // [scenario]
    std::string label = "dense";
    std::string city_kind = "dense"; // dense | disperse
    int threads = 1;

    // [mesh]
    std::string mesh_source = "synthetic"; // synthetic | file
    std::string mesh_file;
    SyntheticCityParams synth;

    // [porosity]
    std::optional<double> eps_center; // absent -> 0.38 (dense) / 0.68 (disperse)
    double eps_layout = 0.82;
    static constexpr double eps_rural = 1.0;
    double porosity_center() const {
        return eps_center ? *eps_center : (city_kind == "dense" ? 0.38 : 0.68);
    }

    // [traffic]
    double u_max = 45.0;            // km/h
    double rho_max = 250.0;         // veh/km²
    double theta = 0.5;             // anticipation; c² = theta/rho_max
    double nu = 0.3;                // km²/h density diffusion
    double kappa0 = 6.0;            // 1/h peak parking rate
    double kappa_spread = 5.0;      // km
    double tau = 0.02;              // h relaxation time
    double mu_traffic = 0.3;        // km²/h traffic viscosity
    double demand_rate = 0.0;       // q [veh/km²/h] on the solid phase
    bool pressure_coupling = true;  // c²ρ(∇·u)(1,1) term on/off
    double cfl_safety = 0.4;
    int routing_every = 10;         // eikonal refresh cadence [steps]
    double vehicle_epsilon_frac = 0.01;
    double horizon = 2.0;           // T [h]
    double snapshot_every = 0.05;   // h, traffic/emission series cadence

    // [initial_density]
    std::string density_mode = "ring"; // ring | peak
    double density_peak = 40.0;        // veh/km²
    double density_spread = 1.5;       // km
    double ring_radius = 6.0;          // km
    std::optional<std::array<double, 2>> density_center; // default: urban centroid

    // [porous]
    double permeability = 1e-3; // km², Kozeny-Carman reference scale
    double forchheimer = 0.05;  // shared by traffic (F) and air (C_F)

    // [eikonal]
    std::optional<double> eta;         // km; absent -> 0.1 * domain diameter
    double attraction_g0 = 1.0;
    double attraction_spread = 2.0;    // km
    std::optional<std::array<double, 2>> attraction_center; // default: urban centroid

    // [airflow]
    double v_in_x = 5.0, v_in_y = -5.0; // km/h
    double mu_air = 0.1;                // km²/h (kinematic; rho_air only scales reported pressure)
    double rho_air = 1.2e9;             // kg/km³
    double steady_tol = 1e-4;           // km/h per h
    int wind_max_steps = 200000;
    std::string wall_bc = "slip"; // slip | noslip
    double wind_cfl_safety = 0.4;

    // [transport]
    double mu_phi = 0.5;     // km²/h
    double sigma = 0.1;      // 1/h deposition
    double transport_dt = 0.01; // h
    double zeta1_scale = 1.0;   // 0 disables the streamline term
    double zeta2 = 0.0;         // artificial diffusion is dropped; must stay 0
    bool reassemble_each_step = false;
    double phi0 = 0.0; // kg/km² uniform initial concentration

    // [emissions.co2]
    EmissionCoeffs co2;

    // [output]
    std::string out_dir = "out";
    bool vtk = true;
    double vtk_every = 0.5; // h

    // [solver]
    double lin_tol = 1e-8;
};

/// Parse + validate; unknown keys are rejected (fail closed).
ScenarioConfig load_config(const std::string& path);
ScenarioConfig config_from_table(const toml::Table& t);

/// Invariant checks; throws ConfigError naming the offending key.
void validate_config(const ScenarioConfig& cfg);

/// Deterministic, sorted key=value rendering of the effective config.
std::string canonical_config(const ScenarioConfig& cfg);

/// FNV-1a 64-bit hash of the canonical rendering, as 16 hex chars.
std::string config_hash(const ScenarioConfig& cfg);

} // namespace pcity
