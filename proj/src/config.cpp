#include "pcity/config.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "pcity/errors.hpp"

namespace pcity {

namespace {

void check(bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw ConfigError("ConfigError", key + ": " + what);
}

} // namespace

ScenarioConfig config_from_table(const toml::Table& t) {
    ScenarioConfig c;

    c.label = t.get_or("scenario.label", c.label);
    c.city_kind = t.get_or("scenario.city_kind", c.city_kind);
    c.threads = static_cast<int>(t.get_or("scenario.threads", 1.0));

    c.mesh_source = t.get_or("mesh.source", c.mesh_source);
    c.mesh_file = t.get_or("mesh.file", c.mesh_file);
    c.synth.width_km = t.get_or("mesh.width_km", c.synth.width_km);
    c.synth.height_km = t.get_or("mesh.height_km", c.synth.height_km);
    c.synth.edge_length_km = t.get_or("mesh.edge_length_km", c.synth.edge_length_km);
    c.synth.city_radius_km = t.get_or("mesh.city_radius_km", c.synth.city_radius_km);
    if (t.has("mesh.obstacle_x_km")) {
        auto ox = t.get_numbers("mesh.obstacle_x_km");
        auto oy = t.get_numbers("mesh.obstacle_y_km");
        auto orr = t.get_numbers("mesh.obstacle_r_km");
        check(ox.size() == oy.size() && ox.size() == orr.size(), "mesh.obstacle_*",
              "obstacle arrays must have equal length");
        for (std::size_t i = 0; i < ox.size(); ++i) c.synth.obstacles.push_back({ox[i], oy[i], orr[i]});
    }
    if (t.has("mesh.selected_names")) {
        auto names = t.get_strings("mesh.selected_names");
        auto sx = t.get_numbers("mesh.selected_x_km");
        auto sy = t.get_numbers("mesh.selected_y_km");
        auto sr = t.get_numbers("mesh.selected_r_km");
        check(names.size() == sx.size() && names.size() == sy.size() && names.size() == sr.size(),
              "mesh.selected_*", "selected-zone arrays must have equal length");
        for (std::size_t i = 0; i < names.size(); ++i)
            c.synth.selected.push_back({names[i], {sx[i], sy[i], sr[i]}});
    }

    if (t.has("porosity.center")) c.eps_center = t.get_number("porosity.center");
    c.eps_layout = t.get_or("porosity.layout", c.eps_layout);

    c.u_max = t.get_or("traffic.u_max_kmh", c.u_max);
    c.rho_max = t.get_or("traffic.rho_max_veh_km2", c.rho_max);
    c.theta = t.get_or("traffic.theta", c.theta);
    c.nu = t.get_or("traffic.nu_km2_h", c.nu);
    c.kappa0 = t.get_or("traffic.kappa0_per_h", c.kappa0);
    c.kappa_spread = t.get_or("traffic.kappa_spread_km", c.kappa_spread);
    c.tau = t.get_or("traffic.tau_h", c.tau);
    c.mu_traffic = t.get_or("traffic.mu_km2_h", c.mu_traffic);
    c.demand_rate = t.get_or("traffic.demand_veh_km2_h", c.demand_rate);
    c.pressure_coupling = t.get_or("traffic.pressure_coupling", c.pressure_coupling);
    c.cfl_safety = t.get_or("traffic.cfl_safety", c.cfl_safety);
    c.routing_every = static_cast<int>(t.get_or("traffic.routing_every_steps", 10.0));
    c.vehicle_epsilon_frac = t.get_or("traffic.vehicle_epsilon_frac", c.vehicle_epsilon_frac);
    c.horizon = t.get_or("traffic.horizon_h", c.horizon);
    c.snapshot_every = t.get_or("traffic.snapshot_every_h", c.snapshot_every);

    c.density_mode = t.get_or("initial_density.mode", c.density_mode);
    c.density_peak = t.get_or("initial_density.peak_veh_km2", c.density_peak);
    c.density_spread = t.get_or("initial_density.spread_km", c.density_spread);
    c.ring_radius = t.get_or("initial_density.ring_radius_km", c.ring_radius);
    if (t.has("initial_density.center_x_km"))
        c.density_center = {{t.get_number("initial_density.center_x_km"),
                             t.get_number("initial_density.center_y_km")}};

    c.permeability = t.get_or("porous.permeability_km2", c.permeability);
    c.forchheimer = t.get_or("porous.forchheimer", c.forchheimer);

    if (t.has("eikonal.eta_km")) c.eta = t.get_number("eikonal.eta_km");
    c.attraction_g0 = t.get_or("eikonal.attraction_g0", c.attraction_g0);
    c.attraction_spread = t.get_or("eikonal.attraction_spread_km", c.attraction_spread);
    if (t.has("eikonal.attraction_x_km"))
        c.attraction_center = {{t.get_number("eikonal.attraction_x_km"),
                                t.get_number("eikonal.attraction_y_km")}};

    if (t.has("airflow.v_in_kmh")) {
        auto v = t.get_numbers("airflow.v_in_kmh");
        check(v.size() == 2, "airflow.v_in_kmh", "expected [vx, vy]");
        c.v_in_x = v[0];
        c.v_in_y = v[1];
    }
    c.mu_air = t.get_or("airflow.mu_a_km2_h", c.mu_air);
    c.rho_air = t.get_or("airflow.rho_a_kg_km3", c.rho_air);
    c.steady_tol = t.get_or("airflow.steady_tol_kmh_per_h", c.steady_tol);
    c.wind_max_steps = static_cast<int>(t.get_or("airflow.max_steps", 200000.0));
    c.wall_bc = t.get_or("airflow.wall_bc", c.wall_bc);
    c.wind_cfl_safety = t.get_or("airflow.cfl_safety", c.wind_cfl_safety);

    c.mu_phi = t.get_or("transport.mu_phi_km2_h", c.mu_phi);
    c.sigma = t.get_or("transport.sigma_per_h", c.sigma);
    c.transport_dt = t.get_or("transport.dt_h", c.transport_dt);
    c.zeta1_scale = t.get_or("transport.zeta1_scale", c.zeta1_scale);
    c.zeta2 = t.get_or("transport.zeta2", c.zeta2);
    c.reassemble_each_step = t.get_or("transport.reassemble_each_step", c.reassemble_each_step);
    c.phi0 = t.get_or("transport.phi0_kg_km2", c.phi0);

    if (t.has("emissions.co2.f")) {
        auto f = t.get_numbers("emissions.co2.f");
        check(f.size() == 6, "emissions.co2.f", "expected six coefficients f1..f6");
        for (int i = 0; i < 6; ++i) c.co2.f[i] = f[i];
        c.co2.provenance = t.get_or("emissions.co2.provenance", std::string());
    }

    c.out_dir = t.get_or("output.dir", c.out_dir);
    c.vtk = t.get_or("output.vtk", c.vtk);
    c.vtk_every = t.get_or("output.vtk_every_h", c.vtk_every);

    c.lin_tol = t.get_or("solver.rel_tol", c.lin_tol);

    auto unused = t.unused_keys();
    if (!unused.empty())
        throw ConfigError("ConfigError", "unknown key " + unused.front());
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    ScenarioConfig c = config_from_table(toml::Table::parse_file(path));
    validate_config(c);
    return c;
}

void validate_config(const ScenarioConfig& c) {
    check(c.city_kind == "dense" || c.city_kind == "disperse", "scenario.city_kind",
          "must be dense or disperse");
    check(!c.label.empty(), "scenario.label", "must be non-empty");
    check(c.threads >= 1, "scenario.threads", "must be >= 1");
    check(c.mesh_source == "synthetic" || c.mesh_source == "file", "mesh.source",
          "must be synthetic or file");
    if (c.mesh_source == "file") check(!c.mesh_file.empty(), "mesh.file", "must name an MSH file");

    double eps_c = c.porosity_center();
    check(eps_c > 0.0, "porosity.center", "porosity must be positive");
    check(eps_c <= c.eps_layout, "porosity.center", "must not exceed porosity.layout");
    check(c.eps_layout <= ScenarioConfig::eps_rural, "porosity.layout",
          "must not exceed the rural porosity 1.0");

    check(c.u_max > 0.0, "traffic.u_max_kmh", "must be positive");
    check(c.rho_max > 0.0, "traffic.rho_max_veh_km2", "must be positive");
    check(c.theta >= 0.0, "traffic.theta", "must be >= 0");
    check(c.nu >= 0.0, "traffic.nu_km2_h", "must be >= 0");
    check(c.kappa0 >= 0.0, "traffic.kappa0_per_h", "must be >= 0");
    check(c.kappa_spread > 0.0, "traffic.kappa_spread_km", "must be positive");
    check(c.tau > 0.0, "traffic.tau_h", "must be positive");
    check(c.mu_traffic >= 0.0, "traffic.mu_km2_h", "must be >= 0");
    check(c.cfl_safety > 0.0 && c.cfl_safety <= 1.0, "traffic.cfl_safety", "must be in (0, 1]");
    check(c.routing_every >= 1, "traffic.routing_every_steps", "must be >= 1");
    check(c.horizon >= 0.0, "traffic.horizon_h", "must be >= 0");
    check(c.snapshot_every > 0.0, "traffic.snapshot_every_h", "must be positive");

    check(c.density_mode == "ring" || c.density_mode == "peak", "initial_density.mode",
          "must be ring or peak");
    check(c.density_peak >= 0.0, "initial_density.peak_veh_km2", "NegativePeak: must be >= 0");
    check(c.density_spread > 0.0, "initial_density.spread_km", "must be positive");

    check(c.permeability > 0.0, "porous.permeability_km2", "must be positive");
    check(c.forchheimer >= 0.0, "porous.forchheimer", "must be >= 0");

    if (c.eta) check(*c.eta > 0.0, "eikonal.eta_km", "must be positive");
    check(c.attraction_g0 > 0.0, "eikonal.attraction_g0", "must be positive");
    check(c.attraction_spread > 0.0, "eikonal.attraction_spread_km", "must be positive");

    check(c.mu_air >= 0.0, "airflow.mu_a_km2_h", "must be >= 0");
    check(c.rho_air > 0.0, "airflow.rho_a_kg_km3", "must be positive");
    check(c.steady_tol > 0.0, "airflow.steady_tol_kmh_per_h", "must be positive");
    check(c.wind_max_steps >= 1, "airflow.max_steps", "must be >= 1");
    check(c.wall_bc == "slip" || c.wall_bc == "noslip", "airflow.wall_bc",
          "must be slip or noslip");

    check(c.mu_phi >= 0.0, "transport.mu_phi_km2_h", "must be >= 0");
    check(c.sigma >= 0.0, "transport.sigma_per_h", "must be >= 0");
    check(c.transport_dt > 0.0, "transport.dt_h", "must be positive");
    check(c.zeta1_scale >= 0.0, "transport.zeta1_scale", "must be >= 0");
    check(c.zeta2 == 0.0, "transport.zeta2",
          "the artificial-diffusion stabilizer path is not implemented; must be 0");
    check(c.phi0 >= 0.0, "transport.phi0_kg_km2", "must be >= 0");

    bool have_coeffs = false;
    for (double f : c.co2.f)
        if (f != 0.0) have_coeffs = true;
    check(have_coeffs || !c.co2.provenance.empty(), "emissions.co2",
          "MissingCoefficients: the [emissions.co2] table with f and provenance is required");
    check(!c.co2.provenance.empty(), "emissions.co2.provenance",
          "coefficient provenance string is required");

    check(c.vtk_every > 0.0, "output.vtk_every_h", "must be positive");
    check(c.lin_tol > 0.0 && c.lin_tol < 1.0, "solver.rel_tol", "must be in (0, 1)");
}

std::string canonical_config(const ScenarioConfig& c) {
    std::map<std::string, std::string> kv;
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    kv["scenario.label"] = c.label;
    kv["scenario.city_kind"] = c.city_kind;
    kv["scenario.threads"] = std::to_string(c.threads);
    kv["mesh.source"] = c.mesh_source;
    kv["mesh.file"] = c.mesh_file;
    kv["mesh.width_km"] = num(c.synth.width_km);
    kv["mesh.height_km"] = num(c.synth.height_km);
    kv["mesh.edge_length_km"] = num(c.synth.edge_length_km);
    kv["mesh.city_radius_km"] = num(c.synth.city_radius_km);
    {
        std::string ob;
        for (const auto& o : c.synth.obstacles)
            ob += "(" + num(o.cx) + "," + num(o.cy) + "," + num(o.r) + ")";
        kv["mesh.obstacles"] = ob;
        std::string sel;
        for (const auto& [name, d] : c.synth.selected)
            sel += name + "(" + num(d.cx) + "," + num(d.cy) + "," + num(d.r) + ")";
        kv["mesh.selected"] = sel;
    }
    kv["porosity.center"] = num(c.porosity_center());
    kv["porosity.layout"] = num(c.eps_layout);
    kv["traffic.u_max_kmh"] = num(c.u_max);
    kv["traffic.rho_max_veh_km2"] = num(c.rho_max);
    kv["traffic.theta"] = num(c.theta);
    kv["traffic.nu_km2_h"] = num(c.nu);
    kv["traffic.kappa0_per_h"] = num(c.kappa0);
    kv["traffic.kappa_spread_km"] = num(c.kappa_spread);
    kv["traffic.tau_h"] = num(c.tau);
    kv["traffic.mu_km2_h"] = num(c.mu_traffic);
    kv["traffic.demand_veh_km2_h"] = num(c.demand_rate);
    kv["traffic.pressure_coupling"] = c.pressure_coupling ? "true" : "false";
    kv["traffic.cfl_safety"] = num(c.cfl_safety);
    kv["traffic.routing_every_steps"] = std::to_string(c.routing_every);
    kv["traffic.vehicle_epsilon_frac"] = num(c.vehicle_epsilon_frac);
    kv["traffic.horizon_h"] = num(c.horizon);
    kv["traffic.snapshot_every_h"] = num(c.snapshot_every);
    kv["initial_density.mode"] = c.density_mode;
    kv["initial_density.peak_veh_km2"] = num(c.density_peak);
    kv["initial_density.spread_km"] = num(c.density_spread);
    kv["initial_density.ring_radius_km"] = num(c.ring_radius);
    kv["initial_density.center"] =
        c.density_center ? "(" + num((*c.density_center)[0]) + "," + num((*c.density_center)[1]) + ")"
                         : "urban-centroid";
    kv["porous.permeability_km2"] = num(c.permeability);
    kv["porous.forchheimer"] = num(c.forchheimer);
    kv["eikonal.eta_km"] = c.eta ? num(*c.eta) : "auto";
    kv["eikonal.attraction_g0"] = num(c.attraction_g0);
    kv["eikonal.attraction_spread_km"] = num(c.attraction_spread);
    kv["eikonal.attraction_center"] =
        c.attraction_center
            ? "(" + num((*c.attraction_center)[0]) + "," + num((*c.attraction_center)[1]) + ")"
            : "urban-centroid";
    kv["airflow.v_in_kmh"] = "(" + num(c.v_in_x) + "," + num(c.v_in_y) + ")";
    kv["airflow.mu_a_km2_h"] = num(c.mu_air);
    kv["airflow.rho_a_kg_km3"] = num(c.rho_air);
    kv["airflow.steady_tol_kmh_per_h"] = num(c.steady_tol);
    kv["airflow.max_steps"] = std::to_string(c.wind_max_steps);
    kv["airflow.wall_bc"] = c.wall_bc;
    kv["airflow.cfl_safety"] = num(c.wind_cfl_safety);
    kv["transport.mu_phi_km2_h"] = num(c.mu_phi);
    kv["transport.sigma_per_h"] = num(c.sigma);
    kv["transport.dt_h"] = num(c.transport_dt);
    kv["transport.zeta1_scale"] = num(c.zeta1_scale);
    kv["transport.zeta2"] = num(c.zeta2);
    kv["transport.reassemble_each_step"] = c.reassemble_each_step ? "true" : "false";
    kv["transport.phi0_kg_km2"] = num(c.phi0);
    {
        std::string f;
        for (double v : c.co2.f) f += num(v) + " ";
        kv["emissions.co2.f"] = f;
        kv["emissions.co2.provenance"] = c.co2.provenance;
    }
    kv["output.dir"] = c.out_dir;
    kv["output.vtk"] = c.vtk ? "true" : "false";
    kv["output.vtk_every_h"] = num(c.vtk_every);
    kv["solver.rel_tol"] = num(c.lin_tol);

    std::ostringstream out;
    for (const auto& [k, v] : kv) out << k << " = " << v << "\n";
    return out.str();
}

std::string config_hash(const ScenarioConfig& c) {
    const std::string s = canonical_config(c);
    std::uint64_t h = 1469598103934665603ull; // FNV-1a offset basis
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return std::string(buf);
}

} // namespace pcity
