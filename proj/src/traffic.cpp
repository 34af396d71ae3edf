#include "pcity/traffic.hpp"

#include <cmath>

#include "pcity/assembly.hpp"
#include "pcity/errors.hpp"
#include "pcity/scenario.hpp"
#include "pcity/ssp.hpp"

namespace pcity::traffic {

Stepper::Stepper(const Mesh& mesh, const CoefficientFields& fields, const ScenarioConfig& cfg)
    : mesh_(mesh), f_(fields), cfg_(cfg) {
    const index_t n = mesh.node_count();
    ScalarField eps_nu(n, 0.0), eps_kappa(n, 0.0), mu_over_eps(n, 0.0), q_solid(n, 0.0);
    for (index_t i = 0; i < n; ++i) {
        eps_nu[i] = f_.porosity[i] * cfg.nu;
        eps_kappa[i] = f_.porosity[i] * f_.kappa[i];
        mu_over_eps[i] = cfg.mu_traffic / f_.porosity[i];
        q_solid[i] = (1.0 - f_.porosity[i]) * f_.demand[i];
    }
    stiff_nu_ = fem::assemble_stiffness(mesh, eps_nu);
    sink_kappa_ = fem::assemble_mass(mesh, eps_kappa).row_sums();
    stiff_mu_over_eps_ = fem::assemble_stiffness(mesh, mu_over_eps);
    q_load_ = fem::load_vector(mesh, q_solid);
    lump_mass_ = lump(fem::assemble_mass(mesh, ScalarField(n, 1.0)));
    lump_eps_ = lump(fem::assemble_mass(mesh, f_.porosity));
    c2_ = cfg.theta / cfg.rho_max;
}

double Stepper::vehicle_mass(const ScalarField& rho) const {
    double m = 0.0;
    for (index_t i = 0; i < mesh_.node_count(); ++i) m += lump_eps_[i] * rho[i];
    return m;
}

void Stepper::advection_raw(const double* ux, const double* uy, const double* comp,
                            std::vector<double>& vec) const {
    // vec_i += ∫ (u·∇comp) λ_i, elementwise: ∇comp constant, u piecewise
    // linear; streamline diffusion as in the density equation
    for (index_t e = 0; e < mesh_.triangle_count(); ++e) {
        index_t n[3] = {mesh_.tri(e, 0), mesh_.tri(e, 1), mesh_.tri(e, 2)};
        double gx = 0.0, gy = 0.0;
        for (int k = 0; k < 3; ++k) {
            gx += comp[n[k]] * mesh_.grad_x(e, k);
            gy += comp[n[k]] * mesh_.grad_y(e, k);
        }
        double sx = ux[n[0]] + ux[n[1]] + ux[n[2]];
        double sy = uy[n[0]] + uy[n[1]] + uy[n[2]];
        double w = mesh_.area(e) / 12.0;
        for (int i = 0; i < 3; ++i)
            vec[n[i]] += w * (gx * (sx + ux[n[i]]) + gy * (sy + uy[n[i]]));
        double speed = std::hypot(sx, sy) / 3.0;
        if (speed > 1e-12) {
            double hx = sx / (3.0 * speed), hy = sy / (3.0 * speed);
            double nu_sd = 0.5 * mesh_.tri_diameter(e) * speed;
            double dcomp = hx * gx + hy * gy;
            double area = mesh_.area(e);
            for (int i = 0; i < 3; ++i) {
                double ti = hx * mesh_.grad_x(e, i) + hy * mesh_.grad_y(e, i);
                vec[n[i]] += nu_sd * area * dcomp * ti;
            }
        }
    }
}

void Stepper::density_rhs_raw(const double* rho, const double* ux, const double* uy,
                              std::vector<double>& vec) const {
    const index_t np = mesh_.node_count();
    vec.assign(np, 0.0);
    // -∫ ∇·(rho u) λ_i as an elemental matrix C_ij = ∫(u·∇λ_j)λ_i +
    // ∫(∇·u)λ_j λ_i, upwinded by the discrete local-extremum-diminishing
    // correction d_ij = max(0, -C_ij, -C_ji): keeps the explicit stages
    // positivity-preserving at the wave fronts. The correction is symmetric
    // with zero row sums, so the global mass budget is untouched.
    for (index_t e = 0; e < mesh_.triangle_count(); ++e) {
        index_t n[3] = {mesh_.tri(e, 0), mesh_.tri(e, 1), mesh_.tri(e, 2)};
        double div = 0.0;
        for (int k = 0; k < 3; ++k)
            div += ux[n[k]] * mesh_.grad_x(e, k) + uy[n[k]] * mesh_.grad_y(e, k);
        double w = mesh_.area(e) / 12.0;
        double c[3][3];
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) {
                    double ug = ux[n[k]] * mesh_.grad_x(e, j) + uy[n[k]] * mesh_.grad_y(e, j);
                    s += ug * (k == i ? 2.0 : 1.0);
                }
                c[i][j] = w * (s + div * (i == j ? 2.0 : 1.0));
            }
        }
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                // rho feels -C, so positive off-diagonals of C are the
                // anti-diffusive ones that must be damped
                double d = std::max({0.0, c[i][j], c[j][i]});
                c[i][j] -= d;
                c[j][i] -= d;
                c[i][i] += d;
                c[j][j] += d;
            }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) vec[n[i]] -= c[i][j] * rho[n[j]];
    }
    // diffusion (M-matrix on non-obtuse triangles) and lumped parking sink
    for (index_t i = 0; i < np; ++i) {
        double diff = 0.0;
        const auto& off = stiff_nu_.row_offsets();
        const auto& cols = stiff_nu_.cols();
        const auto& sv = stiff_nu_.values();
        for (index_t k = off[i]; k < off[i + 1]; ++k) diff += sv[k] * rho[cols[k]];
        vec[i] += q_load_[i] - diff - sink_kappa_[i] * rho[i];
    }
}

ScalarField Stepper::density_rhs(const TrafficState& s) const {
    std::vector<double> vec;
    density_rhs_raw(s.rho.v.data(), s.u.x.data(), s.u.y.data(), vec);
    ScalarField out(mesh_.node_count(), 0.0, "veh/km^2/h");
    for (index_t i = 0; i < mesh_.node_count(); ++i) out[i] = vec[i] / lump_eps_[i];
    return out;
}

VectorField Stepper::material_acceleration(const TrafficState& s, const VectorField& u_d) const {
    const index_t np = mesh_.node_count();
    VectorField a(np, 0.0, 0.0, "km/h^2");

    std::vector<double> div_n;
    if (cfg_.pressure_coupling)
        div_n = fem::recover_nodal(mesh_, fem::element_divergence(mesh_, s.u)).v;

    std::vector<double> brink_x = stiff_mu_over_eps_.mul(s.u.x);
    std::vector<double> brink_y = stiff_mu_over_eps_.mul(s.u.y);

    for (index_t i = 0; i < np; ++i) {
        const double eps = f_.porosity[i];
        const double rho_s = std::max(s.rho[i], rho_floor);
        const double kperm = f_.permeability[i];
        const double speed = s.u.norm(i);
        const double darcy = eps * cfg_.mu_traffic / (rho_s * kperm);
        const double forch = eps * cfg_.forchheimer / std::sqrt(kperm) * speed;

        double ax = (u_d.x[i] - s.u.x[i]) / cfg_.tau;
        double ay = (u_d.y[i] - s.u.y[i]) / cfg_.tau;
        if (cfg_.pressure_coupling) {
            // c²rho(∇·u)(1,1); rho capped at rho_max inside the coefficient:
            // beyond capacity the raw product feeds an unstable rho-divergence
            // loop that the model never intends (rho <= rho_max by modeling)
            double p = c2_ * std::min(s.rho[i], cfg_.rho_max) * div_n[i];
            ax += p;
            ay += p;
        }
        ax += (eps / rho_s) * (-brink_x[i] / lump_mass_[i]);
        ay += (eps / rho_s) * (-brink_y[i] / lump_mass_[i]);
        ax -= (darcy + forch) * s.u.x[i];
        ay -= (darcy + forch) * s.u.y[i];
        a.x[i] = ax;
        a.y[i] = ay;
    }
    return a;
}

double Stepper::cfl_dt(const TrafficState& s) const {
    double max_u = 0.0, eps_min = 1.0, lambda = 1.0 / cfg_.tau;
    for (index_t i = 0; i < mesh_.node_count(); ++i) {
        const double speed = s.u.norm(i);
        max_u = std::max(max_u, speed);
        eps_min = std::min(eps_min, f_.porosity[i]);
        const double rho_s = std::max(s.rho[i], rho_floor);
        double rate = f_.porosity[i] * cfg_.mu_traffic / (rho_s * f_.permeability[i]) +
                      f_.porosity[i] * cfg_.forchheimer / std::sqrt(f_.permeability[i]) * speed +
                      1.0 / cfg_.tau + f_.kappa[i];
        lambda = std::max(lambda, rate);
    }
    const double h = mesh_.min_edge_length();
    const double c_char = std::sqrt(c2_);
    double dt = cfg_.cfl_safety * h / (max_u + c_char + cfg_.u_max);
    // streamline diffusion contributes like h*max_u/2 on top of nu and mu
    const double visc = std::max({cfg_.nu, cfg_.mu_traffic, 0.5 * h * max_u});
    if (visc > 0.0) dt = std::min(dt, cfg_.cfl_safety * h * h * eps_min / (2.0 * visc));
    dt = std::min(dt, cfg_.cfl_safety * 2.0 / lambda);
    return dt;
}

TrafficState Stepper::step(const TrafficState& s, const eikonal::RoutingField& routing, double dt,
                           StepStats* stats) const {
    if (dt > cfl_dt(s) * (1.0 + 1e-9))
        throw Error("CFLViolation", "dt " + std::to_string(dt) + " exceeds the stability bound " +
                                        std::to_string(cfl_dt(s)));
    const index_t np = mesh_.node_count();
    std::vector<double> state(3 * static_cast<std::size_t>(np));
    for (index_t i = 0; i < np; ++i) {
        state[i] = s.rho[i];
        state[np + i] = s.u.x[i];
        state[2 * np + i] = s.u.y[i];
    }

    // stage-wise mass audit: realized mass must equal the convex-combination
    // prediction plus clamp additions, to roundoff
    const double m0 = vehicle_mass(s.rho);
    double m_prev = m0, s_rho = 0.0, residual = 0.0, clamp_mass = 0.0;
    std::vector<char> clamped(np, 0); // an event is a node clamped within the step
    double max_wall = 0.0;

    TrafficState work;
    work.rho = ScalarField(np, 0.0, s.rho.unit);
    work.u = VectorField(np, 0.0, 0.0, s.u.unit);

    auto rhs = [&](const std::vector<double>& u, std::vector<double>& k) {
        const double* rho = u.data();
        const double* ux = u.data() + np;
        const double* uy = u.data() + 2 * np;
        std::vector<double> vec;
        density_rhs_raw(rho, ux, uy, vec);
        s_rho = 0.0;
        for (index_t i = 0; i < np; ++i) {
            s_rho += vec[i];
            k[i] = vec[i] / lump_eps_[i];
        }
        // velocity: material acceleration minus (1/eps)(u·∇)u
        for (index_t i = 0; i < np; ++i) {
            work.rho[i] = rho[i];
            work.u.x[i] = ux[i];
            work.u.y[i] = uy[i];
        }
        VectorField acc = material_acceleration(work, routing.u_d);
        std::vector<double> adv_x(np, 0.0), adv_y(np, 0.0);
        advection_raw(ux, uy, ux, adv_x);
        advection_raw(ux, uy, uy, adv_y);
        for (index_t i = 0; i < np; ++i) {
            k[np + i] = acc.x[i] - adv_x[i] / (lump_mass_[i] * f_.porosity[i]);
            k[2 * np + i] = acc.y[i] - adv_y[i] / (lump_mass_[i] * f_.porosity[i]);
        }
    };

    const auto& wall_nodes = mesh_.nodes_of(BoundaryTag::Wall);
    const auto& wall_normals = mesh_.wall_node_normals();
    auto post = [&](std::vector<double>& u, int stage) {
        double m_pre = 0.0;
        for (index_t i = 0; i < np; ++i) m_pre += lump_eps_[i] * u[i];
        double pred;
        if (stage == 0) pred = m_prev + dt * s_rho;
        else if (stage == 1) pred = 0.75 * m0 + 0.25 * (m_prev + dt * s_rho);
        else pred = (1.0 / 3.0) * m0 + (2.0 / 3.0) * (m_prev + dt * s_rho);
        residual += std::abs(m_pre - pred);
        double stage_clamp = 0.0;
        for (index_t i = 0; i < np; ++i) {
            if (u[i] < 0.0) {
                stage_clamp -= lump_eps_[i] * u[i];
                u[i] = 0.0;
                clamped[i] = 1;
            }
        }
        clamp_mass += stage_clamp;
        m_prev = m_pre + stage_clamp; // post-clamp mass feeds the next prediction
        // slip projection: u <- u - (u·n̂)n̂ at wall nodes
        for (std::size_t w = 0; w < wall_nodes.size(); ++w) {
            index_t i = wall_nodes[w];
            double nx = wall_normals[w][0], ny = wall_normals[w][1];
            double un = u[np + i] * nx + u[2 * np + i] * ny;
            u[np + i] -= un * nx;
            u[2 * np + i] -= un * ny;
        }
    };

    ssp_rk3_step(state, dt, rhs, post);

    TrafficState out;
    out.t = s.t + dt;
    out.rho = ScalarField(np, 0.0, s.rho.unit);
    out.u = VectorField(np, 0.0, 0.0, s.u.unit);
    for (index_t i = 0; i < np; ++i) {
        out.rho[i] = state[i];
        out.u.x[i] = state[np + i];
        out.u.y[i] = state[2 * np + i];
    }
    require_finite(out.rho, "traffic density");
    require_finite(out.u, "traffic velocity");

    for (std::size_t w = 0; w < wall_nodes.size(); ++w) {
        index_t i = wall_nodes[w];
        double un = out.u.x[i] * wall_normals[w][0] + out.u.y[i] * wall_normals[w][1];
        max_wall = std::max(max_wall, std::abs(un));
    }
    if (stats) {
        stats->clamp_events = 0;
        for (char c : clamped) stats->clamp_events += c;
        stats->clamp_mass = clamp_mass;
        stats->budget_residual = residual;
        stats->max_wall_normal_speed = max_wall;
    }
    return out;
}

RunResult run_traffic(const Mesh& mesh, const ZoneMap& zones, const CoefficientFields& fields,
                      const ScalarField& rho0, const ScenarioConfig& cfg) {
    Stepper stepper(mesh, fields, cfg);
    std::array<double, 2> attraction =
        cfg.attraction_center ? *cfg.attraction_center : scenario::urban_centroid(mesh, zones);

    TrafficState state;
    state.t = 0.0;
    state.rho = rho0;
    state.u = VectorField(mesh.node_count(), 0.0, 0.0, "km/h"); // all cars at rest

    eikonal::RoutingField routing = eikonal::compute_routing(mesh, zones, state.rho, cfg, attraction);

    RunResult out;
    const double mass0 = stepper.vehicle_mass(state.rho);
    auto record = [&](const TrafficState& s) {
        Snapshot snap;
        snap.t = s.t;
        snap.rho = s.rho;
        snap.u = s.u;
        snap.u_d = routing.u_d;
        snap.accel = stepper.material_acceleration(s, routing.u_d);
        out.snapshots.push_back(std::move(snap));
    };
    record(state);
    for (index_t i = 0; i < mesh.node_count(); ++i)
        out.max_desired_speed = std::max(out.max_desired_speed, routing.u_d.norm(i));

    double next_snap = cfg.snapshot_every;
    const double T = cfg.horizon;
    out.evacuation_time = T;
    int step_idx = 0;
    while (state.t < T - 1e-12) {
        if (step_idx > 0 && step_idx % cfg.routing_every == 0) {
            routing = eikonal::compute_routing(mesh, zones, state.rho, cfg, attraction);
            for (index_t i = 0; i < mesh.node_count(); ++i)
                out.max_desired_speed = std::max(out.max_desired_speed, routing.u_d.norm(i));
        }
        double dt = std::min(stepper.cfl_dt(state), T - state.t);
        if (!(dt > 1e-12))
            throw Error("CFLViolation", "traffic time step collapsed at t = " +
                                            std::to_string(state.t));
        StepStats st;
        state = stepper.step(state, routing, dt, &st);
        ++step_idx;
        out.steps = step_idx;
        out.node_steps += mesh.node_count();
        out.clamp_events += st.clamp_events;
        out.max_budget_residual = std::max(out.max_budget_residual, st.budget_residual);
        out.max_wall_normal_speed = std::max(out.max_wall_normal_speed, st.max_wall_normal_speed);
        for (index_t i = 0; i < mesh.node_count(); ++i)
            out.max_speed = std::max(out.max_speed, state.u.norm(i));

        const double mass = stepper.vehicle_mass(state.rho);
        if (!out.evacuated && mass < cfg.vehicle_epsilon_frac * mass0 && mass0 > 0.0) {
            out.evacuated = true;
            out.evacuation_time = state.t;
            record(state);
            break;
        }
        if (state.t >= next_snap - 1e-12) {
            record(state);
            while (next_snap <= state.t + 1e-12) next_snap += cfg.snapshot_every;
        }
    }
    if (out.snapshots.back().t < state.t - 1e-12) record(state);
    return out;
}

} // namespace pcity::traffic
