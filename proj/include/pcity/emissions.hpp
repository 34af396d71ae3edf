#pragma once

#include "pcity/config.hpp"
#include "pcity/fields.hpp"

namespace pcity::emissions {

// Fixed unit-conversion constants of the emission chain.
constexpr double gamma1 = 3.6;                     // g/s -> kg/h, km/h -> m/s
constexpr double gamma2 = 1e-3 / (3.6 * 3.6);      // km/h² -> m/s²
constexpr double u_eps = 1e-3;                     // m/s guard for the U division

/// U = ‖u‖ / 3.6 [m/s].
ScalarField scalar_speed(const VectorField& u);

/// Tangential microscopic acceleration [m/s²]: gamma2 (a·u)/(U gamma1),
/// i.e. the along-flow component of a converted from km/h²; 0 where U < u_eps.
ScalarField scalar_acceleration(const VectorField& a_vec, const VectorField& u,
                                const ScalarField& speed);

/// E = max(f1 + f2 U + f3 U² + f4 a + f5 a² + f6 U a, 0) [g/veh/s].
ScalarField instantaneous_emission(const ScalarField& speed, const ScalarField& accel,
                                   const EmissionCoeffs& coeffs);

/// EC = rho E gamma1 [kg/km²/h].
ScalarField emission_concentration(const ScalarField& rho, const ScalarField& emission);

} // namespace pcity::emissions
