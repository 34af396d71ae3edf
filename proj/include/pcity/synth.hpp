#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pcity/mesh.hpp"
#include "pcity/zones.hpp"

namespace pcity {

struct Disc {
    double cx = 0, cy = 0, r = 0; // [km]
};

/// Desk-scale stand-in for a real metropolitan mesh: a structured-grid
/// triangulation of a rectangle with circular holes (obstacles), a circular
/// urban zone centered in the rectangle and optional selected zones nested in
/// it. Left edge is tagged inlet, right edge outlet, everything else wall.
struct SyntheticCityParams {
    double width_km = 40.0;
    double height_km = 30.0;
    double edge_length_km = 1.0;
    double city_radius_km = 10.0; // 0 disables the urban zone
    std::vector<Disc> obstacles;
    std::vector<std::pair<std::string, Disc>> selected; // nested in the city circle
};

std::pair<Mesh, ZoneMap> synthetic_city_mesh(const SyntheticCityParams& p);

} // namespace pcity
