#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pcity/config.hpp"
#include "pcity/errors.hpp"
#include "pcity/mesh.hpp"
#include "pcity/pipeline.hpp"
#include "pcity/synth.hpp"
#include "pcity/zones.hpp"

namespace {

// exit codes: 0 success, 2 config error, 3 stage/runtime error
constexpr int kConfigExit = 2;
constexpr int kStageExit = 3;

void apply_env_threads(pcity::ScenarioConfig& cfg) {
    if (const char* env = std::getenv("POROUS_CITY_THREADS")) {
        int t = std::atoi(env);
        if (t >= 1) cfg.threads = t;
    }
}

int cmd_run(const std::string& config_path, const std::string& scenario, double speed_limit,
            const std::string& out_dir) {
    pcity::ScenarioConfig cfg = pcity::load_config(config_path);
    if (!scenario.empty()) {
        cfg.city_kind = scenario;
        cfg.label = scenario;
        cfg.eps_center.reset(); // let the city kind pick its porosity preset
    }
    if (speed_limit > 0.0) {
        cfg.u_max = speed_limit;
        char buf[32];
        std::snprintf(buf, sizeof buf, "-u%g", speed_limit);
        cfg.label += buf;
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    apply_env_threads(cfg);
    pcity::validate_config(cfg);

    pcity::pipeline::RunInfo info = pcity::pipeline::run_scenario(cfg);

    std::printf("scenario %s (config %s)\n", info.label.c_str(), info.config_hash.c_str());
    std::printf("  mesh: %s\n", info.mesh_identity.c_str());
    std::printf("  traffic: %ld steps, evacuated=%s at t=%.3f h, clamp events %ld/%ld\n",
                info.traffic_steps, info.evacuated ? "yes" : "no", info.evacuation_time_h,
                info.clamp_events, info.node_steps);
    std::printf("  wind: converged=%s%s, mean urban speed %.3f km/h\n",
                info.wind_converged ? "yes" : "no", info.wind_cached ? " (cached)" : "",
                info.mean_urban_wind_kmh);
    for (const auto& [zone, mean] : info.zone_time_means)
        std::printf("  mean concentration %-12s %.6e kg/km^2\n", zone.c_str(), mean);
    for (const auto& st : info.stages) std::printf("  stage %-16s %8.1f ms\n", st.name.c_str(), st.ms);
    std::printf("  manifest: %s\n", info.manifest_path.c_str());
    return 0;
}

int cmd_validate(const std::string& config_path) {
    pcity::ScenarioConfig cfg = pcity::load_config(config_path);
    apply_env_threads(cfg);
    pcity::validate_config(cfg);
    std::printf("config OK: %s\n", config_path.c_str());
    std::printf("U_max = %g km/h, city = %s, porosity %g -> %g, T = %g h\n", cfg.u_max,
                cfg.city_kind.c_str(), cfg.porosity_center(), cfg.eps_layout, cfg.horizon);
    std::printf("emission coefficients: %s\n", cfg.co2.provenance.c_str());
    std::printf("config hash: %s\n", pcity::config_hash(cfg).c_str());
    std::printf("%s", pcity::canonical_config(cfg).c_str());
    return 0;
}

int cmd_mesh_info(const std::string& path) {
    pcity::Mesh mesh = pcity::msh::parse_file(path);
    pcity::ZoneMap zones = pcity::ZoneMap::from_mesh_tags(mesh);
    std::printf("nodes: %d\ntriangles: %d\n", mesh.node_count(), mesh.triangle_count());
    int counts[4] = {0, 0, 0, 0};
    for (const auto& be : mesh.boundary_edges()) ++counts[static_cast<int>(be.tag)];
    std::printf("boundary edges: inlet %d, outlet %d, wall %d, exit %d\n", counts[0], counts[1],
                counts[2], counts[3]);
    for (const auto& z : zones.zones())
        std::printf("zone %-12s %6zu triangles, area %.4f km^2\n", z.name.c_str(), z.tris.size(),
                    z.area);
    return 0;
}

int cmd_mesh_synth(const std::string& out_path, double width, double height, double h,
                   double city_radius) {
    pcity::SyntheticCityParams p;
    p.width_km = width;
    p.height_km = height;
    p.edge_length_km = h;
    p.city_radius_km = city_radius;
    auto [mesh, zones] = pcity::synthetic_city_mesh(p);
    (void)zones;
    pcity::msh::write_file(mesh, out_path);
    std::printf("wrote %s: %d nodes, %d triangles\n", out_path.c_str(), mesh.node_count(),
                mesh.triangle_count());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "porous-city multiphysics: traffic, emissions, wind and pollutant transport on a shared "
        "triangular mesh"};
    app.require_subcommand(1);

    std::string config_path, scenario, out_dir, mesh_path, synth_out;
    double speed_limit = 0.0;
    double sw = 40.0, sh = 30.0, sedge = 1.0, scity = 10.0;

    auto* run = app.add_subcommand("run", "run a full scenario from a TOML config");
    run->add_option("--config", config_path, "scenario config file")->required();
    run->add_option("--scenario", scenario, "override the city kind (dense|disperse)");
    run->add_option("--speed-limit", speed_limit, "override the speed limit U_max [km/h]");
    run->add_option("--out", out_dir, "override the output directory");

    auto* val = app.add_subcommand("validate", "check a config and echo the normalized values");
    val->add_option("--config", config_path, "scenario config file")->required();

    auto* mesh = app.add_subcommand("mesh", "mesh utilities");
    mesh->require_subcommand(1);
    auto* info = mesh->add_subcommand("info", "print node/triangle/tag/zone counts of an MSH file");
    info->add_option("file", mesh_path, "MSH 2.2/4.1 ASCII file")->required();
    auto* synth = mesh->add_subcommand("synth", "write a synthetic concentric-city MSH");
    synth->add_option("--out", synth_out, "output MSH path")->required();
    synth->add_option("--width", sw, "rectangle width [km]");
    synth->add_option("--height", sh, "rectangle height [km]");
    synth->add_option("--edge", sedge, "target edge length [km]");
    synth->add_option("--city-radius", scity, "urban zone radius [km]");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, scenario, speed_limit, out_dir);
        if (val->parsed()) return cmd_validate(config_path);
        if (info->parsed()) return cmd_mesh_info(mesh_path);
        if (synth->parsed()) return cmd_mesh_synth(synth_out, sw, sh, sedge, scity);
    } catch (const pcity::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kConfigExit;
    } catch (const pcity::StageError& e) {
        std::cerr << e.what() << "\n";
        return kStageExit;
    } catch (const pcity::Error& e) {
        std::cerr << e.what() << "\n";
        return kStageExit;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kStageExit;
    }
    return 0;
}
