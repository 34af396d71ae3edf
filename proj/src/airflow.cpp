#include "pcity/airflow.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "pcity/assembly.hpp"
#include "pcity/errors.hpp"

namespace pcity::airflow {

Projector::Projector(const Mesh& mesh, WindSetup setup) : mesh_(mesh), setup_(std::move(setup)) {
    const index_t n = mesh.node_count();
    if (setup_.inlet_vx.size() != static_cast<std::size_t>(n) ||
        setup_.inlet_vy.size() != static_cast<std::size_t>(n))
        throw Error("BadSetup", "inlet velocity arrays must cover all nodes");

    pressure_op_ = fem::assemble_stiffness(mesh, setup_.porosity);
    pressure_op_.set_dirichlet_symmetric(mesh.nodes_of(BoundaryTag::Outlet));

    ScalarField mua_over_eps(n, 0.0);
    for (index_t i = 0; i < n; ++i) mua_over_eps[i] = setup_.mu_air / setup_.porosity[i];
    stiff_mua_over_eps_ = fem::assemble_stiffness(mesh, mua_over_eps);
    lump_mass_ = lump(fem::assemble_mass(mesh, ScalarField(n, 1.0)));
}

void Projector::apply_bcs(VectorField& v) const {
    const auto& wall_nodes = mesh_.nodes_of(BoundaryTag::Wall);
    const auto& wall_normals = mesh_.wall_node_normals();
    if (setup_.noslip_walls) {
        for (index_t i : wall_nodes) {
            v.x[i] = 0.0;
            v.y[i] = 0.0;
        }
    } else {
        for (std::size_t w = 0; w < wall_nodes.size(); ++w) {
            index_t i = wall_nodes[w];
            double nx = wall_normals[w][0], ny = wall_normals[w][1];
            double vn = v.x[i] * nx + v.y[i] * ny;
            v.x[i] -= vn * nx;
            v.y[i] -= vn * ny;
        }
    }
    for (index_t i : mesh_.nodes_of(BoundaryTag::Inlet)) {
        v.x[i] = setup_.inlet_vx[i];
        v.y[i] = setup_.inlet_vy[i];
    }
}

VectorField Projector::tentative_velocity(const WindState& s, double dt) const {
    const index_t np = mesh_.node_count();
    VectorField out(np, 0.0, 0.0, "km/h");

    // -(1/eps)(v·∇)v, weak elementwise, lumped. A streamline-diffusion term
    // nu_sd = h_K ‖v/eps‖ / 2 along the local flow direction stabilizes the
    // single explicit substep (plain Galerkin advection is unstable under
    // forward Euler at any dt); it acts on (s·∇)v only, so it vanishes on
    // flows that are constant along streamlines (uniform fields, developed
    // channel profiles).
    std::vector<double> adv_x(np, 0.0), adv_y(np, 0.0);
    for (index_t e = 0; e < mesh_.triangle_count(); ++e) {
        index_t n[3] = {mesh_.tri(e, 0), mesh_.tri(e, 1), mesh_.tri(e, 2)};
        double gxx = 0.0, gxy = 0.0, gyx = 0.0, gyy = 0.0;
        for (int k = 0; k < 3; ++k) {
            gxx += s.v.x[n[k]] * mesh_.grad_x(e, k);
            gxy += s.v.x[n[k]] * mesh_.grad_y(e, k);
            gyx += s.v.y[n[k]] * mesh_.grad_x(e, k);
            gyy += s.v.y[n[k]] * mesh_.grad_y(e, k);
        }
        double sx = s.v.x[n[0]] + s.v.x[n[1]] + s.v.x[n[2]];
        double sy = s.v.y[n[0]] + s.v.y[n[1]] + s.v.y[n[2]];
        double w = mesh_.area(e) / 12.0;
        for (int i = 0; i < 3; ++i) {
            adv_x[n[i]] += w * (gxx * (sx + s.v.x[n[i]]) + gxy * (sy + s.v.y[n[i]]));
            adv_y[n[i]] += w * (gyx * (sx + s.v.x[n[i]]) + gyy * (sy + s.v.y[n[i]]));
        }
        double eps_bar =
            (setup_.porosity[n[0]] + setup_.porosity[n[1]] + setup_.porosity[n[2]]) / 3.0;
        double vbx = sx / (3.0 * eps_bar), vby = sy / (3.0 * eps_bar);
        double speed = std::hypot(vbx, vby);
        if (speed > 1e-12) {
            double hx = vbx / speed, hy = vby / speed;
            double nu_sd = 0.5 * mesh_.tri_diameter(e) * speed;
            double dvx = hx * gxx + hy * gxy; // (s·∇)v_x, constant per element
            double dvy = hx * gyx + hy * gyy;
            double area = mesh_.area(e);
            for (int i = 0; i < 3; ++i) {
                double ti = hx * mesh_.grad_x(e, i) + hy * mesh_.grad_y(e, i);
                adv_x[n[i]] += nu_sd * area * dvx * ti;
                adv_y[n[i]] += nu_sd * area * dvy * ti;
            }
        }
    }

    std::vector<double> brink_x = stiff_mua_over_eps_.mul(s.v.x);
    std::vector<double> brink_y = stiff_mua_over_eps_.mul(s.v.y);

    for (index_t i = 0; i < np; ++i) {
        const double eps = setup_.porosity[i];
        const double kperm = setup_.permeability[i];
        const double speed = s.v.norm(i);
        const double darcy = eps * setup_.mu_air / kperm;
        const double forch = eps * setup_.forchheimer / std::sqrt(kperm) * speed;
        double ax = -adv_x[i] / (lump_mass_[i] * eps) + eps * (-brink_x[i] / lump_mass_[i]) -
                    (darcy + forch) * s.v.x[i];
        double ay = -adv_y[i] / (lump_mass_[i] * eps) + eps * (-brink_y[i] / lump_mass_[i]) -
                    (darcy + forch) * s.v.y[i];
        out.x[i] = s.v.x[i] + dt * ax;
        out.y[i] = s.v.y[i] + dt * ay;
    }
    apply_bcs(out);
    require_finite(out, "tentative wind velocity");
    return out;
}

ScalarField Projector::pressure_poisson(const VectorField& v_star, double dt,
                                        const ScalarField* warm_start) const {
    // ∇·(eps ∇P) = (1/dt) ∇·v*, ∇P·n = 0 on inlet/walls, P = 0 on the outlet
    std::vector<double> div = fem::element_divergence(mesh_, v_star);
    std::vector<double> rhs(mesh_.node_count(), 0.0);
    for (index_t e = 0; e < mesh_.triangle_count(); ++e) {
        double w = -div[e] * mesh_.area(e) / (3.0 * dt);
        for (int k = 0; k < 3; ++k) rhs[mesh_.tri(e, k)] += w;
    }
    for (index_t i : mesh_.nodes_of(BoundaryTag::Outlet)) rhs[i] = 0.0;

    SolveOpts opts;
    opts.symmetric = true;
    opts.rel_tol = setup_.pressure_tol;
    if (warm_start && warm_start->size() == rhs.size()) opts.x0 = &warm_start->v;
    auto res = solve(pressure_op_, rhs, opts);
    ScalarField p(mesh_.node_count(), 0.0, "km^2/h^2");
    p.v = std::move(res.x);
    return p;
}

VectorField Projector::correct_velocity(const VectorField& v_star, const ScalarField& p,
                                        double dt) const {
    VectorField grad = fem::recover_gradient(mesh_, p);
    VectorField out(mesh_.node_count(), 0.0, 0.0, "km/h");
    for (index_t i = 0; i < mesh_.node_count(); ++i) {
        out.x[i] = v_star.x[i] - dt * setup_.porosity[i] * grad.x[i];
        out.y[i] = v_star.y[i] - dt * setup_.porosity[i] * grad.y[i];
    }
    apply_bcs(out);
    return out;
}

double Projector::cfl_dt(const VectorField& v) const {
    // effective transport speed is v/eps; algebraic sinks add a 2/rate bound
    double max_v = 0.0, eps_min = 1.0, lambda = 0.0;
    for (index_t i = 0; i < mesh_.node_count(); ++i) {
        double speed = v.norm(i) / setup_.porosity[i];
        max_v = std::max(max_v, speed);
        eps_min = std::min(eps_min, setup_.porosity[i]);
        double rate = setup_.porosity[i] * setup_.mu_air / setup_.permeability[i] +
                      setup_.porosity[i] * setup_.forchheimer /
                          std::sqrt(setup_.permeability[i]) * v.norm(i);
        lambda = std::max(lambda, rate);
    }
    double inlet_speed = 0.0;
    for (index_t i : mesh_.nodes_of(BoundaryTag::Inlet))
        inlet_speed = std::max(inlet_speed,
                               std::hypot(setup_.inlet_vx[i], setup_.inlet_vy[i]) /
                                   setup_.porosity[i]);
    const double h = mesh_.min_edge_length();
    double dt = setup_.cfl_safety * h / std::max(max_v + inlet_speed, 1e-6);
    if (setup_.mu_air > 0.0)
        dt = std::min(dt, setup_.cfl_safety * h * h * eps_min / (2.0 * setup_.mu_air));
    // the streamline-diffusion stabilizer acts like nu_sd = h*max_v/2
    if (max_v > 1e-12)
        dt = std::min(dt, setup_.cfl_safety * h * h * eps_min / (2.0 * 0.5 * h * max_v));
    if (lambda > 0.0) dt = std::min(dt, setup_.cfl_safety * 2.0 / lambda);
    return dt;
}

double Projector::divergence_l2(const VectorField& v) const {
    std::vector<double> div = fem::element_divergence(mesh_, v);
    double s = 0.0;
    for (index_t e = 0; e < mesh_.triangle_count(); ++e) s += mesh_.area(e) * div[e] * div[e];
    return std::sqrt(s);
}

WindState run_to_steady(const Mesh& mesh, WindSetup setup) {
    Projector proj(mesh, std::move(setup));
    WindState s;
    s.v = VectorField(mesh.node_count(), 0.0, 0.0, "km/h"); // calm initial air
    s.P = ScalarField(mesh.node_count(), 0.0, "km^2/h^2");
    proj.apply_bcs(s.v);

    const auto& cf = proj.setup();
    for (int step = 0; step < cf.max_steps; ++step) {
        double dt = proj.cfl_dt(s.v);
        VectorField v_star = proj.tentative_velocity(s, dt);
        ScalarField p = proj.pressure_poisson(v_star, dt, &s.P);
        VectorField v_new = proj.correct_velocity(v_star, p, dt);

        double delta = 0.0;
        for (index_t i = 0; i < mesh.node_count(); ++i) {
            delta = std::max(delta, std::abs(v_new.x[i] - s.v.x[i]));
            delta = std::max(delta, std::abs(v_new.y[i] - s.v.y[i]));
        }
        s.div_before = proj.divergence_l2(v_star);
        s.div_after = proj.divergence_l2(v_new);
        s.v = std::move(v_new);
        s.P = std::move(p);
        s.t += dt;
        s.steps = step + 1;
        if (delta / dt < cf.steady_tol) {
            s.converged = true;
            break;
        }
    }
    return s;
}

void save_snapshot(const std::string& path, const VectorField& v, const std::string& key) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("IoFailure", "cannot write " + path);
    char magic[8] = {'P', 'C', 'W', 'D', '0', '0', '0', '1'};
    out.write(magic, 8);
    char keybuf[16] = {};
    std::memcpy(keybuf, key.data(), std::min<std::size_t>(16, key.size()));
    out.write(keybuf, 16);
    std::uint64_t n = v.size();
    out.write(reinterpret_cast<const char*>(&n), 8);
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.write(reinterpret_cast<const char*>(&v.x[i]), 8);
        out.write(reinterpret_cast<const char*>(&v.y[i]), 8);
    }
}

bool load_snapshot(const std::string& path, const std::string& key, index_t node_count,
                   VectorField& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    char magic[8], keybuf[16] = {};
    in.read(magic, 8);
    if (!in || std::memcmp(magic, "PCWD0001", 8) != 0) return false;
    in.read(keybuf, 16);
    char expect[16] = {};
    std::memcpy(expect, key.data(), std::min<std::size_t>(16, key.size()));
    if (!in || std::memcmp(keybuf, expect, 16) != 0) return false;
    std::uint64_t n = 0;
    in.read(reinterpret_cast<char*>(&n), 8);
    if (!in || n != static_cast<std::uint64_t>(node_count)) return false;
    out = VectorField(node_count, 0.0, 0.0, "km/h");
    for (index_t i = 0; i < node_count; ++i) {
        in.read(reinterpret_cast<char*>(&out.x[i]), 8);
        in.read(reinterpret_cast<char*>(&out.y[i]), 8);
    }
    return static_cast<bool>(in);
}

} // namespace pcity::airflow
