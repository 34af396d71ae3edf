#include "pcity/emissions.hpp"

#include <cmath>

#include "pcity/errors.hpp"

namespace pcity::emissions {

ScalarField scalar_speed(const VectorField& u) {
    ScalarField s(u.size(), 0.0, "m/s");
    for (std::size_t i = 0; i < u.size(); ++i) s.v[i] = u.norm(i) / gamma1;
    return s;
}

ScalarField scalar_acceleration(const VectorField& a_vec, const VectorField& u,
                                const ScalarField& speed) {
    ScalarField a(u.size(), 0.0, "m/s^2");
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (speed[i] < u_eps) continue; // cars at rest carry no tangential acceleration
        double dot = a_vec.x[i] * u.x[i] + a_vec.y[i] * u.y[i];
        a.v[i] = gamma2 * dot / (speed[i] * gamma1);
    }
    return a;
}

ScalarField instantaneous_emission(const ScalarField& speed, const ScalarField& accel,
                                   const EmissionCoeffs& coeffs) {
    if (coeffs.provenance.empty())
        throw Error("MissingCoefficients", "emission coefficient set lacks a provenance record");
    const auto& f = coeffs.f;
    ScalarField e(speed.size(), 0.0, "g/veh/s");
    for (std::size_t i = 0; i < speed.size(); ++i) {
        double u = speed[i], a = accel[i];
        e.v[i] = std::max(f[0] + f[1] * u + f[2] * u * u + f[3] * a + f[4] * a * a + f[5] * u * a,
                          0.0);
    }
    return e;
}

ScalarField emission_concentration(const ScalarField& rho, const ScalarField& emission) {
    ScalarField ec(rho.size(), 0.0, "kg/km^2/h");
    for (std::size_t i = 0; i < rho.size(); ++i) ec.v[i] = rho[i] * emission[i] * gamma1;
    return ec;
}

} // namespace pcity::emissions
