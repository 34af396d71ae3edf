#pragma once

#include <array>

#include "pcity/config.hpp"
#include "pcity/fields.hpp"
#include "pcity/mesh.hpp"
#include "pcity/zones.hpp"

namespace pcity::eikonal {

// Fixed numerical guards (not configurable):
constexpr double f_min_frac = 0.05;  // travel-cost floor as a fraction of U_max
constexpr double grad_eps = 1e-8;    // ‖∇phi‖ below this => u_d = 0
constexpr double psi_min = 1e-300;   // clamp before the log

struct RoutingField {
    ScalarField f;    // local travel cost (km/h in the city, 1 outside)
    ScalarField psi;  // screened-Poisson solution, > 0
    ScalarField phi;  // potential, phi = -eta ln psi
    VectorField u_d;  // desired speed [km/h]
};

/// f = U_max (1 - 1_urban rho/rho_max - 1_nonurban) + 1_nonurban, with the
/// urban branch floored at f_min_frac*U_max (the model allows f = 0 at
/// rho_max, which is singular in the screened-Poisson coefficient).
ScalarField travel_cost(const ScalarField& rho, const Mesh& mesh, const ZoneMap& zones,
                        const ScenarioConfig& cfg);

/// Attraction field G = -g0 exp(-‖x-c‖²/(2 s²)) (negative source keeps psi > 0).
ScalarField attraction_source(const Mesh& mesh, std::array<double, 2> center, double g0,
                              double spread);

/// P1-Galerkin solve of eta² Δpsi - psi/f² = G with natural (Neumann) BCs.
ScalarField solve_screened_poisson(const Mesh& mesh, const ScalarField& f, const ScalarField& g,
                                   double eta, double rel_tol = 1e-10);

/// phi = -eta ln(max(psi, psi_min)); throws AllZeroPsi when max psi <= 0.
ScalarField recover_potential(const ScalarField& psi, double eta);

/// u_d = -f ∇phi/‖∇phi‖ with the area-weighted nodal gradient; zero where the
/// gradient vanishes.
VectorField desired_speed(const Mesh& mesh, const ScalarField& f, const ScalarField& phi);

/// Full routing chain for a given density. eta and the attraction center are
/// resolved from the config (defaults: 0.1*domain diameter, urban centroid).
RoutingField compute_routing(const Mesh& mesh, const ZoneMap& zones, const ScalarField& rho,
                             const ScenarioConfig& cfg, std::array<double, 2> attraction_center);

} // namespace pcity::eikonal
