#include "pcity/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <fstream>

#include <json.hpp>

#include "pcity/airflow.hpp"
#include "pcity/assembly.hpp"
#include "pcity/diagnostics.hpp"
#include "pcity/emissions.hpp"
#include "pcity/errors.hpp"
#include "pcity/scenario.hpp"
#include "pcity/synth.hpp"
#include "pcity/traffic.hpp"
#include "pcity/transport.hpp"

namespace pcity::pipeline {

namespace fs = std::filesystem;

namespace {

class StageClock {
public:
    explicit StageClock(std::vector<StageTime>& out) : out_(out) {}
    template <class F>
    auto run(const std::string& name, F&& f) -> decltype(f()) {
        auto t0 = std::chrono::steady_clock::now();
        try {
            if constexpr (std::is_void_v<decltype(f())>) {
                f();
                record(name, t0);
            } else {
                auto r = f();
                record(name, t0);
                return r;
            }
        } catch (const Error& e) {
            record(name, t0);
            throw StageError(name, e.what());
        }
    }

private:
    void record(const std::string& name, std::chrono::steady_clock::time_point t0) {
        auto dt = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0);
        out_.push_back({name, dt.count()});
    }
    std::vector<StageTime>& out_;
};

// wind depends only on the mesh, porosity and airflow/porous keys; hashing
// that subset lets runs that differ in traffic settings share one snapshot
std::string wind_config_hash(const ScenarioConfig& cfg) {
    std::istringstream in(canonical_config(cfg));
    std::string line, subset;
    while (std::getline(in, line)) {
        if (line.rfind("mesh.", 0) == 0 || line.rfind("porosity.", 0) == 0 ||
            line.rfind("airflow.", 0) == 0 || line.rfind("porous.", 0) == 0 ||
            line.rfind("scenario.city_kind", 0) == 0 || line.rfind("solver.", 0) == 0)
            subset += line + "\n";
    }
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : subset) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

void rebuild_summary(const fs::path& dir, const std::string& header) {
    std::vector<fs::path> parts;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("summary_", 0) == 0 && name.size() > 4 &&
            name.substr(name.size() - 4) == ".csv")
            parts.push_back(entry.path());
    }
    std::sort(parts.begin(), parts.end());
    std::ofstream out(dir / "summary.csv", std::ios::binary);
    out << header << "\n";
    for (const auto& p : parts) {
        std::ifstream in(p, std::ios::binary);
        std::string line;
        std::getline(in, line); // per-label header, skipped
        while (std::getline(in, line))
            if (!line.empty()) out << line << "\n";
    }
}

} // namespace

RunInfo run_scenario(const ScenarioConfig& cfg) {
    RunInfo info;
    info.label = cfg.label;
    info.config_hash = config_hash(cfg);
    StageClock clock(info.stages);

    fs::create_directories(cfg.out_dir);
    const fs::path out_dir(cfg.out_dir);

    // --- mesh ---------------------------------------------------------------
    struct MeshBundle {
        Mesh mesh;
        ZoneMap zones;
    };
    MeshBundle mb = clock.run("mesh", [&]() -> MeshBundle {
        if (cfg.mesh_source == "file") {
            Mesh m = msh::parse_file(cfg.mesh_file);
            ZoneMap z = ZoneMap::from_mesh_tags(m);
            return {std::move(m), std::move(z)};
        }
        auto [m, z] = synthetic_city_mesh(cfg.synth);
        return {std::move(m), std::move(z)};
    });
    const Mesh& mesh = mb.mesh;
    const ZoneMap& zones = mb.zones;
    info.mesh_identity = (cfg.mesh_source == "file" ? cfg.mesh_file : "synthetic") + ":" +
                         std::to_string(mesh.node_count()) + "n:" +
                         std::to_string(mesh.triangle_count()) + "t";

    // --- coefficient fields ---------------------------------------------------
    traffic::CoefficientFields fields;
    ScalarField rho0;
    clock.run("scenario-fields", [&] {
        fields.porosity = scenario::build_porosity(mesh, zones, cfg);
        fields.permeability = scenario::permeability_field(fields.porosity, cfg.permeability);
        fields.kappa = scenario::parking_rate_field(mesh, zones, cfg);
        fields.demand = scenario::demand_field(mesh, cfg);
        auto center = cfg.density_center ? *cfg.density_center : scenario::urban_centroid(mesh, zones);
        rho0 = scenario::gaussian_initial_density(mesh, zones, center, cfg.density_spread,
                                                  cfg.density_peak, cfg.density_mode,
                                                  cfg.ring_radius);
    });

    // --- traffic --------------------------------------------------------------
    traffic::RunResult traffic_run = clock.run("traffic", [&] {
        return traffic::run_traffic(mesh, zones, fields, rho0, cfg);
    });
    info.evacuated = traffic_run.evacuated;
    info.evacuation_time_h = traffic_run.evacuation_time;
    info.traffic_steps = traffic_run.steps;
    info.clamp_events = traffic_run.clamp_events;
    info.node_steps = traffic_run.node_steps;
    info.max_budget_residual = traffic_run.max_budget_residual;
    info.max_wall_normal_speed = traffic_run.max_wall_normal_speed;

    // --- emission chain ---------------------------------------------------------
    transport::EcSeries ec_series;
    std::vector<ScalarField> emission_series; // per snapshot, for the VTK frames
    clock.run("emissions", [&] {
        for (const auto& snap : traffic_run.snapshots) {
            ScalarField speed = emissions::scalar_speed(snap.u);
            ScalarField accel = emissions::scalar_acceleration(snap.accel, snap.u, speed);
            ScalarField e = emissions::instantaneous_emission(speed, accel, cfg.co2);
            ec_series.times.push_back(snap.t);
            ec_series.values.push_back(emissions::emission_concentration(snap.rho, e));
            emission_series.push_back(std::move(e));
        }
    });

    // --- steady wind (snapshot-cached) -----------------------------------------
    const std::string wind_key = wind_config_hash(cfg);
    const fs::path wind_path = out_dir / ("wind_" + wind_key + ".bin");
    airflow::WindState wind;
    clock.run("wind", [&] {
        VectorField cached;
        if (airflow::load_snapshot(wind_path.string(), wind_key, mesh.node_count(), cached)) {
            wind.v = std::move(cached);
            wind.converged = true;
            info.wind_cached = true;
            return;
        }
        airflow::WindSetup setup;
        setup.porosity = fields.porosity;
        setup.permeability = fields.permeability;
        setup.mu_air = cfg.mu_air;
        setup.forchheimer = cfg.forchheimer;
        setup.rho_air = cfg.rho_air;
        setup.inlet_vx.assign(mesh.node_count(), cfg.v_in_x);
        setup.inlet_vy.assign(mesh.node_count(), cfg.v_in_y);
        setup.noslip_walls = (cfg.wall_bc == "noslip");
        setup.cfl_safety = cfg.wind_cfl_safety;
        setup.steady_tol = cfg.steady_tol;
        setup.max_steps = cfg.wind_max_steps;
        wind = airflow::run_to_steady(mesh, setup);
        airflow::save_snapshot(wind_path.string(), wind.v, wind_key);
    });
    info.wind_converged = wind.converged;
    info.wind_div_after = wind.div_after;
    info.outputs.push_back(wind_path.string());
    {
        ScalarField speed(mesh.node_count(), 0.0, "km/h");
        for (index_t i = 0; i < mesh.node_count(); ++i) speed[i] = wind.v.norm(i);
        info.mean_urban_wind_kmh =
            diag::spatial_mean(speed, zones.zone(zones.urban_zone_id()), mesh);
    }

    // --- pollutant transport -----------------------------------------------------
    std::vector<diag::ZoneSeries> zone_series(zones.zone_count());
    std::vector<std::vector<double>> zone_weights(zones.zone_count());
    for (int z = 0; z < zones.zone_count(); ++z) {
        zone_series[z].zone = zones.zone(z).name;
        zone_weights[z] = diag::zone_mean_weights(zones.zone(z), mesh);
    }
    transport::TransportRunResult transport_run = clock.run("transport", [&] {
        transport::TransportSetup setup;
        setup.porosity = fields.porosity;
        setup.wind = wind.v;
        setup.mu_phi = cfg.mu_phi;
        setup.sigma = cfg.sigma;
        setup.dt = cfg.transport_dt;
        setup.zeta1_scale = cfg.zeta1_scale;
        setup.lin_tol = cfg.lin_tol;
        setup.reassemble_each_step = cfg.reassemble_each_step;
        auto sample = [&](const transport::TransportState& s) {
            for (int z = 0; z < zones.zone_count(); ++z) {
                double m = 0.0;
                for (index_t i = 0; i < mesh.node_count(); ++i)
                    m += zone_weights[z][i] * s.phi[i];
                zone_series[z].times.push_back(s.t);
                zone_series[z].values.push_back(m);
            }
        };
        return transport::run_transport(mesh, setup, ec_series, cfg.horizon, cfg.vtk_every,
                                        cfg.phi0, sample);
    });

    // --- outputs -------------------------------------------------------------------
    clock.run("outputs", [&] {
        // zone mean series
        {
            std::vector<std::string> cols;
            for (int z = 0; z < zones.zone_count(); ++z) cols.push_back(zone_series[z].zone);
            std::vector<std::vector<double>> rows(zone_series[0].times.size());
            for (std::size_t r = 0; r < rows.size(); ++r)
                for (int z = 0; z < zones.zone_count(); ++z)
                    rows[r].push_back(zone_series[z].values[r]);
            fs::path p = out_dir / ("zones_" + cfg.label + ".csv");
            diag::write_series_csv(p.string(), cols, zone_series[0].times, rows);
            info.outputs.push_back(p.string());
        }
        // traffic series (vehicle count, extrema)
        {
            std::vector<double> lump_eps =
                lump(fem::assemble_mass(mesh, fields.porosity));
            std::vector<double> times;
            std::vector<std::vector<double>> rows;
            for (const auto& snap : traffic_run.snapshots) {
                double mass = 0.0, maxr = 0.0, maxs = 0.0;
                for (index_t i = 0; i < mesh.node_count(); ++i) {
                    mass += lump_eps[i] * snap.rho[i];
                    maxr = std::max(maxr, snap.rho[i]);
                    maxs = std::max(maxs, snap.u.norm(i));
                }
                times.push_back(snap.t);
                rows.push_back({mass, maxr, maxs});
            }
            fs::path p = out_dir / ("traffic_" + cfg.label + ".csv");
            diag::write_series_csv(p.string(), {"vehicles", "max_rho", "max_speed"}, times, rows);
            info.outputs.push_back(p.string());
        }
        // time-averaged zone means, per-label summary row + merged table
        {
            std::vector<std::string> cols{"scenario"};
            std::string row = cfg.label;
            char buf[32];
            std::string header = "scenario";
            int uid = zones.urban_zone_id();
            std::vector<int> order;
            if (uid >= 0) order.push_back(uid);
            for (int z = 0; z < zones.zone_count(); ++z)
                if (zones.zone(z).role == ZoneRole::Selected) order.push_back(z);
            for (int z : order) {
                double phi_mean = diag::time_mean(zone_series[z]);
                info.zone_time_means[zones.zone(z).name] = phi_mean;
                header += "," + zones.zone(z).name;
                std::snprintf(buf, sizeof buf, ",%.6e", phi_mean);
                row += buf;
            }
            fs::path p = out_dir / ("summary_" + cfg.label + ".csv");
            std::ofstream out(p, std::ios::binary);
            out << header << "\n" << row << "\n";
            out.close();
            info.outputs.push_back(p.string());
            rebuild_summary(out_dir, header);
            info.outputs.push_back((out_dir / "summary.csv").string());
        }
        // VTK frames
        if (cfg.vtk) {
            ScalarField wind_speed(mesh.node_count(), 0.0, "km/h");
            for (index_t i = 0; i < mesh.node_count(); ++i) wind_speed[i] = wind.v.norm(i);
            {
                fs::path p = out_dir / ("wind_" + cfg.label + ".vtk");
                diag::write_vtk(p.string(), mesh,
                                {{"porosity", &fields.porosity}, {"wind_speed", &wind_speed}},
                                {{"wind", &wind.v}});
                info.outputs.push_back(p.string());
            }
            double next = 0.0;
            int frame = 0;
            for (std::size_t s = 0; s < traffic_run.snapshots.size(); ++s) {
                const auto& snap = traffic_run.snapshots[s];
                if (snap.t < next - 1e-9) continue;
                next += cfg.vtk_every;
                char name[64];
                std::snprintf(name, sizeof name, "traffic_%s_%04d.vtk", cfg.label.c_str(), frame);
                fs::path p = out_dir / name;
                diag::write_vtk(p.string(), mesh,
                                {{"rho", &snap.rho}, {"emission", &emission_series[s]},
                                 {"emission_concentration", &ec_series.values[s]}},
                                {{"u", &snap.u}, {"u_desired", &snap.u_d}, {"accel", &snap.accel}});
                info.outputs.push_back(p.string());
                ++frame;
            }
            frame = 0;
            for (const auto& snap : transport_run.snapshots) {
                char name[64];
                std::snprintf(name, sizeof name, "pollution_%s_%04d.vtk", cfg.label.c_str(), frame);
                fs::path p = out_dir / name;
                diag::write_vtk(p.string(), mesh, {{"phi", &snap.phi}}, {});
                info.outputs.push_back(p.string());
                ++frame;
            }
        }
    });

    // --- manifest --------------------------------------------------------------------
    clock.run("manifest", [&] {
        for (const auto& o : info.outputs) {
            std::error_code ec;
            auto sz = fs::file_size(o, ec);
            if (ec || sz == 0) throw Error("IoFailure", "output missing or empty: " + o);
        }
        nlohmann::json j;
        j["label"] = cfg.label;
        j["config_hash"] = info.config_hash;
        j["mesh"] = {{"identity", info.mesh_identity},
                     {"nodes", mesh.node_count()},
                     {"triangles", mesh.triangle_count()}};
        j["stages"] = nlohmann::json::array();
        for (const auto& st : info.stages) j["stages"].push_back({{"name", st.name}, {"ms", st.ms}});
        j["outputs"] = info.outputs;
        j["flags"] = {{"wind_converged", info.wind_converged},
                      {"wind_cached", info.wind_cached},
                      {"evacuated", info.evacuated}};
        j["traffic"] = {{"steps", info.traffic_steps},
                        {"node_steps", info.node_steps},
                        {"clamp_events", info.clamp_events},
                        {"max_budget_residual", info.max_budget_residual},
                        {"max_wall_normal_speed", info.max_wall_normal_speed},
                        {"evacuation_time_h", info.evacuation_time_h}};
        j["wind"] = {{"mean_urban_speed_kmh", info.mean_urban_wind_kmh},
                     {"div_l2_after", info.wind_div_after}};
        j["transport"] = {{"steps", transport_run.steps},
                          {"max_iterations", transport_run.max_iterations},
                          {"max_residual", transport_run.max_residual},
                          {"min_phi", transport_run.min_phi},
                          {"max_phi", transport_run.max_phi}};
        j["zone_time_means"] = info.zone_time_means;
        fs::path p = out_dir / ("manifest_" + cfg.label + ".json");
        std::ofstream out(p, std::ios::binary);
        out << j.dump(2) << "\n";
        info.manifest_path = p.string();
    });

    return info;
}

} // namespace pcity::pipeline
