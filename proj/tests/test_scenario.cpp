#include <doctest.h>

#include <cmath>

#include "pcity/errors.hpp"
#include "pcity/scenario.hpp"
#include "pcity/synth.hpp"

#include "oracles.hpp"

using namespace pcity;

namespace {

std::pair<Mesh, ZoneMap> city(double h = 1.0) {
    SyntheticCityParams p;
    p.edge_length_km = h;
    return synthetic_city_mesh(p);
}

} // namespace

TEST_CASE("porosity presets: dense 0.38, disperse 0.68 at the centroid; rural 1.0") {
    auto [m, zones] = city();
    ScenarioConfig cfg;
    cfg.city_kind = "dense";
    ScalarField dense = scenario::build_porosity(m, zones, cfg);
    cfg.city_kind = "disperse";
    ScalarField disperse = scenario::build_porosity(m, zones, cfg);

    auto c = scenario::urban_centroid(m, zones);
    // value at the node closest to the centroid
    index_t best = 0;
    double bd = 1e30;
    for (index_t i = 0; i < m.node_count(); ++i) {
        double d = std::hypot(m.x(i) - c[0], m.y(i) - c[1]);
        if (d < bd && zones.node_in_urban(i)) {
            bd = d;
            best = i;
        }
    }
    CHECK(dense[best] == doctest::Approx(0.38).epsilon(0.02));
    CHECK(disperse[best] == doctest::Approx(0.68).epsilon(0.01));
    for (index_t i = 0; i < m.node_count(); ++i) {
        if (zones.node_role(i) == ZoneRole::Rural) {
            CHECK(dense[i] == 1.0);
            CHECK(disperse[i] == dense[i]); // rural values identical across city kinds
        }
        CHECK(dense[i] >= 0.38);
        CHECK(dense[i] <= 1.0);
    }
}

TEST_CASE("porosity is monotone along a ray from the urban centroid") {
    auto [m, zones] = city();
    ScenarioConfig cfg;
    ScalarField eps = scenario::build_porosity(m, zones, cfg);
    auto c = scenario::urban_centroid(m, zones);
    // urban nodes sorted by radius must satisfy eps(r1) <= eps(r2) + tol for r1 < r2
    std::vector<std::pair<double, double>> by_r;
    for (index_t i = 0; i < m.node_count(); ++i)
        if (zones.node_in_urban(i))
            by_r.push_back({std::hypot(m.x(i) - c[0], m.y(i) - c[1]), eps[i]});
    std::sort(by_r.begin(), by_r.end());
    for (std::size_t k = 1; k < by_r.size(); ++k)
        CHECK(by_r[k].second >= by_r[k - 1].second - 1e-9);
}

TEST_CASE("selected zones take the rural porosity 1.0") {
    SyntheticCityParams p;
    p.selected = {{"campus", {23.0, 12.0, 1.5}}};
    auto [m, zones] = synthetic_city_mesh(p);
    ScenarioConfig cfg;
    ScalarField eps = scenario::build_porosity(m, zones, cfg);
    bool any = false;
    for (index_t i = 0; i < m.node_count(); ++i) {
        if (zones.node_role(i) == ZoneRole::Selected) {
            CHECK(eps[i] == 1.0);
            any = true;
        }
    }
    CHECK(any);
}

TEST_CASE("porosity requires a nonempty urban zone") {
    auto [m, zones] = oracle::unit_square(4); // all rural
    ScenarioConfig cfg;
    CHECK_THROWS_WITH_AS(scenario::build_porosity(m, zones, cfg),
                         doctest::Contains("EmptyUrbanZone"), Error);
}

TEST_CASE("permeability follows the Kozeny-Carman shape") {
    ScalarField eps(3, 0.0);
    eps[0] = 0.38;
    eps[1] = 0.82;
    eps[2] = 1.0;
    ScalarField k = scenario::permeability_field(eps, 1e-3);
    auto kc = [](double e) { return 1e-3 * e * e * e / std::pow(1.0 - e + 0.01, 2); };
    for (int i = 0; i < 3; ++i) CHECK(k[i] == doctest::Approx(kc(eps[i])).epsilon(1e-14));
    CHECK(k[0] < k[1]);
    CHECK(k[1] < k[2]);
}

TEST_CASE("parking rate: peak at the center, zero on rural nodes, zero kappa0") {
    auto [m, zones] = city();
    ScenarioConfig cfg;
    ScalarField kap = scenario::parking_rate_field(m, zones, cfg);
    auto c = scenario::urban_centroid(m, zones);
    for (index_t i = 0; i < m.node_count(); ++i) {
        if (!zones.node_in_urban(i)) CHECK(kap[i] == 0.0);
        double r = std::hypot(m.x(i) - c[0], m.y(i) - c[1]);
        if (zones.node_in_urban(i) && r < 0.6)
            CHECK(kap[i] == doctest::Approx(cfg.kappa0).epsilon(0.01));
    }
    cfg.kappa0 = 0.0;
    ScalarField zero = scenario::parking_rate_field(m, zones, cfg);
    for (index_t i = 0; i < m.node_count(); ++i) CHECK(zero[i] == 0.0);
}

TEST_CASE("initial density: zero peak, ring value at the ring radius, negative rejected") {
    auto [m, zones] = city();
    auto c = scenario::urban_centroid(m, zones);
    ScalarField z = scenario::gaussian_initial_density(m, zones, c, 1.5, 0.0, "ring", 6.0);
    for (index_t i = 0; i < m.node_count(); ++i) CHECK(z[i] == 0.0);

    ScalarField ring = scenario::gaussian_initial_density(m, zones, c, 1.5, 40.0, "ring", 6.0);
    for (index_t i = 0; i < m.node_count(); ++i) {
        double r = std::hypot(m.x(i) - c[0], m.y(i) - c[1]);
        if (zones.node_in_urban(i) && std::abs(r - 6.0) < 1e-9)
            CHECK(ring[i] == doctest::Approx(40.0).epsilon(1e-12));
        if (!zones.node_in_urban(i)) CHECK(ring[i] == 0.0);
    }
    CHECK_THROWS_WITH_AS(
        scenario::gaussian_initial_density(m, zones, c, 1.5, -1.0, "ring", 6.0),
        doctest::Contains("NegativePeak"), Error);
}

TEST_CASE("total initial vehicles match a fine quadrature oracle to 0.5%") {
    auto [m, zones] = city(1.0);
    auto c = scenario::urban_centroid(m, zones);
    const double spread = 1.5, peak = 40.0, r0 = 6.0;
    ScalarField ring = scenario::gaussian_initial_density(m, zones, c, spread, peak, "ring", r0);
    double total = oracle::quadrature_p1(m, ring.v); // ∫ of the P1 field
    // independent fine quadrature of the closed form restricted to the urban disc
    double expect = oracle::quadrature(
        m,
        [&](double x, double y) {
            double r = std::hypot(x - c[0], y - c[1]);
            double rc = std::hypot(x - 20.0, y - 15.0);
            if (rc > 10.0) return 0.0; // outside the urban disc
            double d = r - r0;
            return peak * std::exp(-d * d / (2.0 * spread * spread));
        },
        12);
    CHECK(total == doctest::Approx(expect).epsilon(0.005));
}
