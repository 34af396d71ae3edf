#pragma once

#include <array>

#include "pcity/config.hpp"
#include "pcity/fields.hpp"
#include "pcity/mesh.hpp"
#include "pcity/zones.hpp"

namespace pcity::scenario {

/// Area-weighted centroid of the urban zone. Throws EmptyUrbanZone.
std::array<double, 2> urban_centroid(const Mesh& mesh, const ZoneMap& zones);

/// Porosity: rural and selected zones get 1.0, urban nodes interpolate
/// radially from eps_center at the centroid to eps_layout at the city edge.
ScalarField build_porosity(const Mesh& mesh, const ZoneMap& zones, const ScenarioConfig& cfg);

/// Kozeny-Carman permeability from porosity: K = K_ref eps³/(1-eps+0.01)².
ScalarField permeability_field(const ScalarField& porosity, double k_ref);

/// Parking absorption rate: kappa0 Gaussian around the attraction center on
/// urban nodes, zero elsewhere.
ScalarField parking_rate_field(const Mesh& mesh, const ZoneMap& zones, const ScenarioConfig& cfg);

/// Traffic demand q (config hook; shipped scenarios use 0).
ScalarField demand_field(const Mesh& mesh, const ScenarioConfig& cfg);

/// Initial car density: "ring" mode peaks on the circle of the given radius
/// around the center, "peak" mode is a plain Gaussian; zero outside the
/// urban-proper zone. Throws NegativePeak.
ScalarField gaussian_initial_density(const Mesh& mesh, const ZoneMap& zones,
                                     std::array<double, 2> center, double spread, double peak,
                                     const std::string& mode, double ring_radius);

} // namespace pcity::scenario
