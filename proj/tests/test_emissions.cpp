#include <doctest.h>

#include <cmath>
#include <random>

#include "pcity/emissions.hpp"
#include "pcity/errors.hpp"

using namespace pcity;

namespace {

EmissionCoeffs shipped() {
    EmissionCoeffs c;
    c.f = {0.553, 0.161, -0.00289, 0.266, 0.511, 0.183};
    c.provenance = "Int Panis et al. (2006), CO2 petrol";
    return c;
}

double poly_naive(const std::array<double, 6>& f, double u, double a) {
    // naive power evaluation, the dual of the implementation's form
    return std::max(f[0] + f[1] * std::pow(u, 1) + f[2] * std::pow(u, 2) + f[3] * std::pow(a, 1) +
                        f[4] * std::pow(a, 2) + f[5] * std::pow(u, 1) * std::pow(a, 1),
                    0.0);
}

} // namespace

TEST_CASE("scalar speed is the Euclidean norm over 3.6") {
    VectorField u(3, 0.0, 0.0);
    u.x = {3.6, 0.0, 45.0};
    u.y = {0.0, 0.0, 0.0};
    ScalarField s = emissions::scalar_speed(u);
    CHECK(s[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s[1] == 0.0);
    CHECK(s[2] == doctest::Approx(12.5).epsilon(1e-15));
}

TEST_CASE("scalar acceleration: orthogonality, rest guard, unit conversion") {
    VectorField u(3, 0.0, 0.0), a(3, 0.0, 0.0);
    // node 0: a perpendicular to u
    u.x[0] = 10.0;
    a.y[0] = 100.0;
    // node 1: u = 0
    a.x[1] = 50.0;
    // node 2: a parallel to u with |a| = 3.6^2 * 1e3 km/h^2 -> 1 m/s^2
    u.x[2] = 20.0;
    a.x[2] = 3.6 * 3.6 * 1e3;
    ScalarField speed = emissions::scalar_speed(u);
    ScalarField s = emissions::scalar_acceleration(a, u, speed);
    CHECK(s[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(s[1] == 0.0);
    CHECK(s[2] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("instantaneous emission: constant term, zero set, clamped at zero") {
    ScalarField u(3, 0.0), a(3, 0.0);
    ScalarField e = emissions::instantaneous_emission(u, a, shipped());
    for (int i = 0; i < 3; ++i) CHECK(e[i] == doctest::Approx(0.553).epsilon(1e-15));
    EmissionCoeffs zero;
    zero.provenance = "zeros (test)";
    ScalarField ez = emissions::instantaneous_emission(u, a, zero);
    for (int i = 0; i < 3; ++i) CHECK(ez[i] == 0.0);
    // strongly negative combination clamps to zero
    EmissionCoeffs neg = zero;
    neg.f[0] = -1.0;
    ScalarField en = emissions::instantaneous_emission(u, a, neg);
    for (int i = 0; i < 3; ++i) CHECK(en[i] == 0.0);
    EmissionCoeffs anon;
    CHECK_THROWS_WITH_AS(emissions::instantaneous_emission(u, a, anon),
                         doctest::Contains("MissingCoefficients"), Error);
}

TEST_CASE("polynomial evaluation agrees with an independent oracle on a random grid") {
    auto coeffs = shipped();
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> du(0.0, 14.0), da(-3.0, 3.0);
    ScalarField u(1000, 0.0), a(1000, 0.0);
    for (int i = 0; i < 1000; ++i) {
        u[i] = du(rng);
        a[i] = da(rng);
    }
    ScalarField e = emissions::instantaneous_emission(u, a, coeffs);
    for (int i = 0; i < 1000; ++i) {
        double expect = poly_naive(coeffs.f, u[i], a[i]);
        CHECK(e[i] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("emission concentration: zeros, unit scaling, linearity in density") {
    ScalarField rho(3, 0.0), e(3, 1.0);
    rho[1] = 1.0;
    rho[2] = 2.0;
    ScalarField ec = emissions::emission_concentration(rho, e);
    CHECK(ec[0] == 0.0);
    CHECK(ec[1] == doctest::Approx(3.6).epsilon(1e-15)); // 1 g/veh/s * 1 veh/km2 = 3.6 kg/km2/h
    CHECK(ec[2] == doctest::Approx(2.0 * ec[1]).epsilon(1e-15));
}

TEST_CASE("emission is invariant under joint rotation of velocity and acceleration") {
    auto coeffs = shipped();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-30.0, 30.0), dth(0.0, 2.0 * M_PI);
    const int n = 200;
    VectorField u(n, 0.0, 0.0), a(n, 0.0, 0.0), ur(n, 0.0, 0.0), ar(n, 0.0, 0.0);
    const double th = dth(rng), c = std::cos(th), s = std::sin(th);
    for (int i = 0; i < n; ++i) {
        u.x[i] = d(rng);
        u.y[i] = d(rng);
        a.x[i] = d(rng);
        a.y[i] = d(rng);
        ur.x[i] = c * u.x[i] - s * u.y[i];
        ur.y[i] = s * u.x[i] + c * u.y[i];
        ar.x[i] = c * a.x[i] - s * a.y[i];
        ar.y[i] = s * a.x[i] + c * a.y[i];
    }
    ScalarField s1 = emissions::scalar_speed(u), s2 = emissions::scalar_speed(ur);
    ScalarField a1 = emissions::scalar_acceleration(a, u, s1);
    ScalarField a2 = emissions::scalar_acceleration(ar, ur, s2);
    ScalarField e1 = emissions::instantaneous_emission(s1, a1, coeffs);
    ScalarField e2 = emissions::instantaneous_emission(s2, a2, coeffs);
    for (int i = 0; i < n; ++i)
        CHECK(e2[i] == doctest::Approx(e1[i]).epsilon(1e-12));
}

TEST_CASE("shipped set: cruise emission exceeds the idle emission") {
    auto coeffs = shipped();
    ScalarField u(2, 0.0), a(2, 0.0);
    u[1] = 12.5; // 45 km/h
    ScalarField e = emissions::instantaneous_emission(u, a, coeffs);
    CHECK(e[1] > e[0]);
}
