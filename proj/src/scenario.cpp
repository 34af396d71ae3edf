#include "pcity/scenario.hpp"

#include <cmath>

#include "pcity/errors.hpp"

namespace pcity::scenario {

std::array<double, 2> urban_centroid(const Mesh& mesh, const ZoneMap& zones) {
    double cx = 0.0, cy = 0.0, area = 0.0;
    int uid = zones.urban_zone_id();
    if (uid >= 0) {
        for (index_t e : zones.zone(uid).tris) {
            cx += mesh.area(e) * mesh.centroid_x(e);
            cy += mesh.area(e) * mesh.centroid_y(e);
            area += mesh.area(e);
        }
    }
    if (!(area > 0.0)) throw Error("EmptyUrbanZone", "the urban zone has no triangles");
    return {cx / area, cy / area};
}

ScalarField build_porosity(const Mesh& mesh, const ZoneMap& zones, const ScenarioConfig& cfg) {
    auto c = urban_centroid(mesh, zones);
    const double eps_c = cfg.porosity_center();
    const double eps_l = cfg.eps_layout;

    double R = 0.0;
    for (index_t i = 0; i < mesh.node_count(); ++i)
        if (zones.node_in_urban(i)) R = std::max(R, std::hypot(mesh.x(i) - c[0], mesh.y(i) - c[1]));

    ScalarField eps(mesh.node_count(), ScenarioConfig::eps_rural, "1");
    for (index_t i = 0; i < mesh.node_count(); ++i) {
        if (!zones.node_in_urban(i)) continue; // rural and selected zones stay at 1.0
        double r = std::hypot(mesh.x(i) - c[0], mesh.y(i) - c[1]);
        double val = R > 0.0 ? eps_c + (eps_l - eps_c) * (r / R) : eps_c;
        eps[i] = std::min(std::max(val, eps_c), eps_l);
    }
    return eps;
}

ScalarField permeability_field(const ScalarField& porosity, double k_ref) {
    constexpr double delta = 0.01;
    ScalarField k(porosity.size(), 0.0, "km^2");
    for (std::size_t i = 0; i < porosity.size(); ++i) {
        double e = porosity[i];
        double d = 1.0 - e + delta;
        k.v[i] = k_ref * e * e * e / (d * d);
    }
    return k;
}

ScalarField parking_rate_field(const Mesh& mesh, const ZoneMap& zones, const ScenarioConfig& cfg) {
    std::array<double, 2> c =
        cfg.attraction_center ? *cfg.attraction_center : urban_centroid(mesh, zones);
    const double s2 = 2.0 * cfg.kappa_spread * cfg.kappa_spread;
    ScalarField kappa(mesh.node_count(), 0.0, "1/h");
    for (index_t i = 0; i < mesh.node_count(); ++i) {
        if (!zones.node_in_urban(i)) continue;
        double r2 = std::pow(mesh.x(i) - c[0], 2) + std::pow(mesh.y(i) - c[1], 2);
        kappa[i] = cfg.kappa0 * std::exp(-r2 / s2);
    }
    return kappa;
}

ScalarField demand_field(const Mesh& mesh, const ScenarioConfig& cfg) {
    return ScalarField(mesh.node_count(), cfg.demand_rate, "veh/km^2/h");
}

ScalarField gaussian_initial_density(const Mesh& mesh, const ZoneMap& zones,
                                     std::array<double, 2> center, double spread, double peak,
                                     const std::string& mode, double ring_radius) {
    if (peak < 0.0) throw Error("NegativePeak", "initial density peak must be >= 0");
    const double s2 = 2.0 * spread * spread;
    const bool ring = (mode == "ring");
    ScalarField rho(mesh.node_count(), 0.0, "veh/km^2");
    for (index_t i = 0; i < mesh.node_count(); ++i) {
        if (!zones.node_in_urban(i)) continue;
        double r = std::hypot(mesh.x(i) - center[0], mesh.y(i) - center[1]);
        double d = ring ? (r - ring_radius) : r;
        rho[i] = peak * std::exp(-d * d / s2);
    }
    return rho;
}

} // namespace pcity::scenario
