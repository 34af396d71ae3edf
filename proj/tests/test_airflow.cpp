#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "pcity/airflow.hpp"
#include "pcity/assembly.hpp"
#include "pcity/errors.hpp"
#include "pcity/synth.hpp"

#include "oracles.hpp"

using namespace pcity;

namespace {

// straight channel [0,L]x[0,W], inlet left, outlet right, walls top/bottom
std::pair<Mesh, ZoneMap> channel(double length, double width, int ny) {
    SyntheticCityParams p;
    p.width_km = length;
    p.height_km = width;
    p.edge_length_km = width / ny;
    p.city_radius_km = 0.0;
    return synthetic_city_mesh(p);
}

airflow::WindSetup flat_setup(const Mesh& m, double mu, double kperm, double cf) {
    airflow::WindSetup s;
    s.porosity = ScalarField(m.node_count(), 1.0);
    s.permeability = ScalarField(m.node_count(), kperm);
    s.mu_air = mu;
    s.forchheimer = cf;
    s.inlet_vx.assign(m.node_count(), 0.0);
    s.inlet_vy.assign(m.node_count(), 0.0);
    return s;
}

} // namespace

TEST_CASE("rest state with zero inlet is a fixed point of the splitting") {
    auto [m, zones] = channel(4.0, 1.0, 8);
    airflow::WindSetup setup = flat_setup(m, 0.1, 1e12, 0.0);
    setup.max_steps = 3;
    airflow::WindState s = airflow::run_to_steady(m, setup);
    CHECK(s.converged);
    for (index_t i = 0; i < m.node_count(); ++i) {
        CHECK(s.v.x[i] == 0.0);
        CHECK(s.v.y[i] == 0.0);
    }
}

TEST_CASE("uniform channel-aligned flow with no drag passes through the tentative step") {
    auto [m, zones] = channel(4.0, 1.0, 8);
    airflow::WindSetup setup = flat_setup(m, 0.1, 1e12, 0.0);
    for (index_t i = 0; i < m.node_count(); ++i) setup.inlet_vx[i] = 2.0;
    airflow::Projector proj(m, setup);
    airflow::WindState s;
    s.v = VectorField(m.node_count(), 2.0, 0.0);
    proj.apply_bcs(s.v);
    VectorField vs = proj.tentative_velocity(s, 0.01);
    for (index_t i = 0; i < m.node_count(); ++i) {
        CHECK(vs.x[i] == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(vs.y[i] == doctest::Approx(0.0).epsilon(1e-14));
    }
}

TEST_CASE("pure Darcy decay matches the explicit Euler factor exactly") {
    auto [m, zones] = channel(4.0, 1.0, 8);
    const double mu = 0.2, kperm = 0.05;
    airflow::WindSetup setup = flat_setup(m, mu, kperm, 0.0);
    // kill viscosity's spatial action by keeping the field uniform and
    // tangential; drag is the only active term
    for (index_t i = 0; i < m.node_count(); ++i) setup.inlet_vx[i] = 3.0;
    airflow::Projector proj(m, setup);
    airflow::WindState s;
    s.v = VectorField(m.node_count(), 3.0, 0.0);
    proj.apply_bcs(s.v);
    const double dt = 0.5 * proj.cfl_dt(s.v);
    VectorField vs = proj.tentative_velocity(s, dt);
    const double factor = 1.0 - dt * 1.0 * mu / kperm; // eps = 1
    for (index_t i = 0; i < m.node_count(); ++i) {
        if (std::abs(m.x(i)) < 1e-9) continue; // inlet Dirichlet re-imposed
        CHECK(vs.x[i] == doctest::Approx(3.0 * factor).epsilon(1e-13));
    }
}

TEST_CASE("pressure Poisson: divergence-free tentative velocity gives zero pressure") {
    auto [m, zones] = channel(4.0, 1.0, 8);
    airflow::WindSetup setup = flat_setup(m, 0.1, 1e12, 0.0);
    airflow::Projector proj(m, setup);
    VectorField vs(m.node_count(), 1.5, 0.0); // constant: divergence-free
    ScalarField p = proj.pressure_poisson(vs, 0.01);
    for (index_t i = 0; i < m.node_count(); ++i) CHECK(std::abs(p[i]) <= 1e-10);
}

TEST_CASE("pressure rhs integrates div(v*) and scales as 1/dt") {
    auto [m, zones] = channel(1.0, 1.0, 12);
    airflow::WindSetup setup = flat_setup(m, 0.1, 1e12, 0.0);
    airflow::Projector proj(m, setup);
    VectorField vs(m.node_count(), 0.0, 0.0);
    for (index_t i = 0; i < m.node_count(); ++i) vs.x[i] = m.x(i); // div = 1
    ScalarField p1 = proj.pressure_poisson(vs, 0.01);
    ScalarField p2 = proj.pressure_poisson(vs, 0.02);
    for (index_t i = 0; i < m.node_count(); ++i)
        CHECK(p2[i] == doctest::Approx(0.5 * p1[i]).epsilon(1e-6));
    // rhs total: ∫ div v* = area (computed through the load identity)
    auto div = fem::element_divergence(m, vs);
    double total = 0.0;
    for (index_t e = 0; e < m.triangle_count(); ++e) total += div[e] * m.area(e);
    CHECK(total == doctest::Approx(m.total_area()).epsilon(1e-10));
}

TEST_CASE("constant pressure leaves the velocity unchanged; linear pressure shifts it") {
    auto [m, zones] = channel(4.0, 1.0, 8);
    airflow::WindSetup setup = flat_setup(m, 0.1, 1e12, 0.0);
    for (index_t i = 0; i < m.node_count(); ++i) setup.inlet_vx[i] = 1.0;
    airflow::Projector proj(m, setup);
    VectorField vs(m.node_count(), 1.0, 0.0);
    ScalarField pc(m.node_count(), 7.5);
    VectorField v1 = proj.correct_velocity(vs, pc, 0.01);
    for (index_t i = 0; i < m.node_count(); ++i) {
        CHECK(v1.x[i] == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(v1.y[i] == doctest::Approx(0.0).epsilon(1e-13));
    }
    ScalarField pl(m.node_count(), 0.0);
    for (index_t i = 0; i < m.node_count(); ++i) pl[i] = 2.0 * m.x(i);
    VectorField v2 = proj.correct_velocity(vs, pl, 0.01);
    for (index_t i = 0; i < m.node_count(); ++i) {
        if (std::abs(m.x(i)) < 1e-9) continue; // inlet re-imposed
        CHECK(v2.x[i] == doctest::Approx(1.0 - 0.01 * 2.0).epsilon(1e-12));
    }
}

TEST_CASE("one projection step halves the divergence of a developing channel flow") {
    auto [m, zones] = channel(4.0, 1.0, 12);
    airflow::WindSetup setup = flat_setup(m, 0.1, 1e12, 0.0);
    for (index_t i = 0; i < m.node_count(); ++i)
        setup.inlet_vx[i] = 4.0 * m.y(i) * (1.0 - m.y(i));
    setup.noslip_walls = true;
    airflow::Projector proj(m, setup);
    airflow::WindState s;
    s.v = VectorField(m.node_count(), 0.0, 0.0);
    s.P = ScalarField(m.node_count(), 0.0);
    proj.apply_bcs(s.v);
    // a few steps into the transient, where v* has substantial divergence
    for (int k = 0; k < 5; ++k) {
        double dt = proj.cfl_dt(s.v);
        VectorField vs = proj.tentative_velocity(s, dt);
        ScalarField p = proj.pressure_poisson(vs, dt, &s.P);
        VectorField vn = proj.correct_velocity(vs, p, dt);
        double before = proj.divergence_l2(vs);
        double after = proj.divergence_l2(vn);
        if (k >= 2) CHECK(after <= 0.5 * before);
        s.v = vn;
        s.P = p;
    }
}

TEST_CASE("steady Poiseuille: parabolic profile within 5 percent, tiny divergence") {
    const double W = 1.0, L = 4.0;
    auto [m, zones] = channel(L, W, 16); // h = width/16
    airflow::WindSetup setup = flat_setup(m, 0.1, 1e12, 0.0);
    setup.noslip_walls = true;
    setup.steady_tol = 1e-4;
    setup.max_steps = 60000;
    const double u0 = 1.0;
    for (index_t i = 0; i < m.node_count(); ++i)
        setup.inlet_vx[i] = 4.0 * u0 * m.y(i) * (W - m.y(i)) / (W * W);
    airflow::WindState s = airflow::run_to_steady(m, setup);
    CHECK(s.converged);
    double err2 = 0.0, ref2 = 0.0;
    for (index_t i = 0; i < m.node_count(); ++i) {
        double exact = 4.0 * u0 * m.y(i) * (W - m.y(i)) / (W * W);
        err2 += std::pow(s.v.x[i] - exact, 2) + std::pow(s.v.y[i], 2);
        ref2 += exact * exact;
    }
    CHECK(std::sqrt(err2 / ref2) <= 0.05);
    // divergence criterion: <= 1e-3 * mean speed * sqrt(area)
    double mean_speed = 0.0;
    for (index_t i = 0; i < m.node_count(); ++i) mean_speed += s.v.norm(i);
    mean_speed /= m.node_count();
    CHECK(s.div_after <= 1e-3 * mean_speed * std::sqrt(m.total_area()));
}

TEST_CASE("boundary conditions hold exactly after every step") {
    SyntheticCityParams p;
    p.edge_length_km = 2.0;
    p.obstacles.push_back({26.0, 20.0, 4.0});
    auto [m, zones] = synthetic_city_mesh(p);
    airflow::WindSetup setup = flat_setup(m, 0.1, 10.0, 0.05);
    for (index_t i = 0; i < m.node_count(); ++i) {
        setup.inlet_vx[i] = 5.0;
        setup.inlet_vy[i] = -5.0;
    }
    setup.max_steps = 50;
    setup.steady_tol = 1e-12; // force all 50 steps
    airflow::WindState s = airflow::run_to_steady(m, setup);
    for (index_t i : m.nodes_of(BoundaryTag::Inlet)) {
        CHECK(s.v.x[i] == 5.0);
        CHECK(s.v.y[i] == -5.0);
    }
    const auto& wn = m.nodes_of(BoundaryTag::Wall);
    const auto& nrm = m.wall_node_normals();
    for (std::size_t k = 0; k < wn.size(); ++k) {
        double vn = s.v.x[wn[k]] * nrm[k][0] + s.v.y[wn[k]] * nrm[k][1];
        CHECK(std::abs(vn) <= 1e-10);
    }
}

TEST_CASE("wind snapshot: write, load, key and size checks") {
    VectorField v(37, 0.0, 0.0);
    for (int i = 0; i < 37; ++i) {
        v.x[i] = std::sin(0.1 * i) * 1e-3;
        v.y[i] = std::cos(0.2 * i) * 17.0;
    }
    const std::string path = "/tmp/pcity_test_wind.bin";
    airflow::save_snapshot(path, v, "abcdef0123456789");
    VectorField r;
    REQUIRE(airflow::load_snapshot(path, "abcdef0123456789", 37, r));
    CHECK(r.x == v.x); // bit-exact
    CHECK(r.y == v.y);
    VectorField r2;
    CHECK_FALSE(airflow::load_snapshot(path, "deadbeefdeadbeef", 37, r2)); // wrong key
    CHECK_FALSE(airflow::load_snapshot(path, "abcdef0123456789", 36, r2)); // wrong size
    CHECK_FALSE(airflow::load_snapshot("/tmp/absent_wind.bin", "abcdef0123456789", 37, r2));
    std::remove(path.c_str());
}
