#include "pcity/transport.hpp"

#include <cmath>
#include <optional>

#include "pcity/assembly.hpp"
#include "pcity/errors.hpp"

namespace pcity::transport {

GlsOperator::GlsOperator(const Mesh& mesh, const TransportSetup& setup)
    : mesh_(mesh), setup_(setup) {
    const index_t n = mesh.node_count();
    mass_eps_ = fem::assemble_mass(mesh, setup_.porosity);

    ScalarField eps_mu(n, 0.0), eps_sigma(n, 0.0);
    for (index_t i = 0; i < n; ++i) {
        eps_mu[i] = setup_.porosity[i] * setup_.mu_phi;
        eps_sigma[i] = setup_.porosity[i] * setup_.sigma;
    }

    a_ = SparseMatrix::zeros(mesh);
    a_ += mass_eps_;
    a_.scale(1.0 / setup_.dt);
    a_ += fem::assemble_convection(mesh, setup_.wind);
    a_ += fem::assemble_stiffness(mesh, eps_mu);
    {
        SparseMatrix bnd = fem::assemble_boundary_flux(mesh, setup_.wind, BoundaryTag::Inlet);
        bnd.scale(-1.0);
        a_ += bnd;
    }
    a_ += fem::assemble_mass(mesh, eps_sigma);

    // streamline stabilizer, element-mean wind
    zeta1_.assign(mesh.triangle_count(), 0.0);
    vbx_.assign(mesh.triangle_count(), 0.0);
    vby_.assign(mesh.triangle_count(), 0.0);
    for (index_t e = 0; e < mesh.triangle_count(); ++e) {
        index_t nd[3] = {mesh.tri(e, 0), mesh.tri(e, 1), mesh.tri(e, 2)};
        double vx = (setup_.wind.x[nd[0]] + setup_.wind.x[nd[1]] + setup_.wind.x[nd[2]]) / 3.0;
        double vy = (setup_.wind.y[nd[0]] + setup_.wind.y[nd[1]] + setup_.wind.y[nd[2]]) / 3.0;
        double z = setup_.zeta1_scale * mesh.tri_diameter(e) / (2.0 * std::hypot(vx, vy) + 1e-12);
        zeta1_[e] = std::min(z, setup_.dt);
        vbx_[e] = vx;
        vby_[e] = vy;
        if (zeta1_[e] == 0.0) continue;
        double eps_sig =
            setup_.sigma * (setup_.porosity[nd[0]] + setup_.porosity[nd[1]] + setup_.porosity[nd[2]]) / 3.0;
        double area = mesh.area(e);
        for (int i = 0; i < 3; ++i) {
            double ti = vx * mesh.grad_x(e, i) + vy * mesh.grad_y(e, i); // v·∇λ_i
            for (int j = 0; j < 3; ++j) {
                double tj = vx * mesh.grad_x(e, j) + vy * mesh.grad_y(e, j);
                a_.add(nd[i], nd[j], zeta1_[e] * (area * tj * ti + eps_sig * area / 3.0 * ti));
            }
        }
    }
}

std::vector<double> GlsOperator::rhs(const ScalarField& phi_n, const ScalarField& ec) const {
    std::vector<double> b = mass_eps_.mul(phi_n.v);
    for (double& v : b) v /= setup_.dt;
    std::vector<double> f = fem::load_vector(mesh_, ec);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] += f[i];
    for (index_t e = 0; e < mesh_.triangle_count(); ++e) {
        if (zeta1_[e] == 0.0) continue;
        index_t nd[3] = {mesh_.tri(e, 0), mesh_.tri(e, 1), mesh_.tri(e, 2)};
        double ec_bar = (ec[nd[0]] + ec[nd[1]] + ec[nd[2]]) / 3.0;
        double area = mesh_.area(e);
        for (int i = 0; i < 3; ++i) {
            double ti = vbx_[e] * mesh_.grad_x(e, i) + vby_[e] * mesh_.grad_y(e, i);
            b[nd[i]] += zeta1_[e] * ec_bar * area * ti;
        }
    }
    return b;
}

GlsOperator::StepResult GlsOperator::step(const ScalarField& phi_n, const ScalarField& ec) const {
    std::vector<double> b = rhs(phi_n, ec);
    SolveOpts opts;
    opts.symmetric = false;
    opts.rel_tol = setup_.lin_tol;
    opts.x0 = &phi_n.v; // warm start from the previous concentration
    SolveResult r = solve(a_, b, opts);
    StepResult out;
    out.phi = ScalarField(phi_n.size(), 0.0, phi_n.unit);
    out.phi.v = std::move(r.x);
    out.iterations = r.iterations;
    out.residual = r.rel_residual;
    require_finite(out.phi, "pollutant concentration");
    return out;
}

std::pair<SparseMatrix, std::vector<double>> assemble_gls_step(const Mesh& mesh,
                                                               const TransportSetup& setup,
                                                               const ScalarField& phi_n,
                                                               const ScalarField& ec) {
    GlsOperator op(mesh, setup);
    return {op.matrix(), op.rhs(phi_n, ec)};
}

ScalarField EcSeries::at(double t) const {
    if (times.empty()) throw Error("BadSetup", "empty EC series");
    if (t <= times.front()) return values.front();
    if (t >= times.back()) return values.back();
    std::size_t k = 1;
    while (k < times.size() && times[k] < t) ++k;
    const double t0 = times[k - 1], t1 = times[k];
    const double w = (t1 > t0) ? (t - t0) / (t1 - t0) : 0.0;
    ScalarField out(values[k].size(), 0.0, values[k].unit);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = (1.0 - w) * values[k - 1][i] + w * values[k][i];
    return out;
}

TransportRunResult run_transport(const Mesh& mesh, const TransportSetup& setup,
                                 const EcSeries& ec, double T, double snapshot_every,
                                 double phi0,
                                 const std::function<void(const TransportState&)>& on_step) {
    TransportRunResult out;
    TransportState state;
    state.t = 0.0;
    state.phi = ScalarField(mesh.node_count(), phi0, "kg/km^2");

    out.snapshots.push_back(state);
    if (on_step) on_step(state);
    out.min_phi = out.max_phi = phi0;

    GlsOperator op(mesh, setup);
    double next_snap = snapshot_every;
    while (state.t < T - 1e-12) {
        double dt_eff = std::min(setup.dt, T - state.t);
        const GlsOperator* stepper = &op;
        std::optional<GlsOperator> local;
        if (setup.reassemble_each_step || dt_eff != setup.dt) {
            TransportSetup s2 = setup;
            s2.dt = dt_eff;
            local.emplace(mesh, s2);
            stepper = &*local;
        }

        ScalarField ec_next = ec.at(state.t + dt_eff);
        auto res = stepper->step(state.phi, ec_next);
        state.phi = std::move(res.phi);
        state.t += dt_eff;
        state.iterations = res.iterations;
        state.residual = res.residual;
        ++out.steps;
        out.max_iterations = std::max(out.max_iterations, res.iterations);
        out.max_residual = std::max(out.max_residual, res.residual);
        for (double v : state.phi.v) {
            out.min_phi = std::min(out.min_phi, v);
            out.max_phi = std::max(out.max_phi, v);
        }
        if (on_step) on_step(state);
        if (state.t >= next_snap - 1e-12 || state.t >= T - 1e-12) {
            out.snapshots.push_back(state);
            while (next_snap <= state.t + 1e-12) next_snap += snapshot_every;
        }
    }
    return out;
}

} // namespace pcity::transport
