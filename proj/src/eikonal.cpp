#include "pcity/eikonal.hpp"

#include <cmath>

#include "pcity/assembly.hpp"
#include "pcity/errors.hpp"
#include "pcity/sparse.hpp"

namespace pcity::eikonal {

ScalarField travel_cost(const ScalarField& rho, const Mesh& mesh, const ZoneMap& zones,
                        const ScenarioConfig& cfg) {
    ScalarField f(mesh.node_count(), 1.0, "km/h");
    const double f_min = f_min_frac * cfg.u_max;
    for (index_t i = 0; i < mesh.node_count(); ++i) {
        if (zones.node_in_urban(i))
            f[i] = std::max(cfg.u_max * (1.0 - rho[i] / cfg.rho_max), f_min);
        // non-urban ground keeps the unit travel cost
    }
    return f;
}

ScalarField attraction_source(const Mesh& mesh, std::array<double, 2> center, double g0,
                              double spread) {
    const double s2 = 2.0 * spread * spread;
    ScalarField g(mesh.node_count(), 0.0, "1");
    for (index_t i = 0; i < mesh.node_count(); ++i) {
        double r2 = std::pow(mesh.x(i) - center[0], 2) + std::pow(mesh.y(i) - center[1], 2);
        g[i] = -g0 * std::exp(-r2 / s2);
    }
    return g;
}

ScalarField solve_screened_poisson(const Mesh& mesh, const ScalarField& f, const ScalarField& g,
                                   double eta, double rel_tol) {
    // weak form: eta² ∫∇psi·∇v + ∫ psi v / f² = -∫ G v
    ScalarField inv_f2(mesh.node_count(), 0.0);
    for (index_t i = 0; i < mesh.node_count(); ++i) inv_f2[i] = 1.0 / (f[i] * f[i]);

    SparseMatrix a = fem::assemble_stiffness(mesh, ScalarField(mesh.node_count(), 1.0));
    a.scale(eta * eta);
    a += fem::assemble_mass(mesh, inv_f2);

    std::vector<double> rhs = fem::load_vector(mesh, g);
    for (double& v : rhs) v = -v;

    SolveOpts opts;
    opts.symmetric = true;
    opts.rel_tol = rel_tol;
    auto res = solve(a, rhs, opts);
    ScalarField psi(mesh.node_count(), 0.0, "1");
    psi.v = std::move(res.x);
    return psi;
}

ScalarField recover_potential(const ScalarField& psi, double eta) {
    double mx = 0.0;
    for (double v : psi.v) mx = std::max(mx, v);
    if (!(mx > 0.0)) throw Error("AllZeroPsi", "psi vanishes everywhere; no potential to recover");
    ScalarField phi(psi.size(), 0.0, "km");
    for (std::size_t i = 0; i < psi.size(); ++i)
        phi.v[i] = -eta * std::log(std::max(psi[i], psi_min));
    return phi;
}

VectorField desired_speed(const Mesh& mesh, const ScalarField& f, const ScalarField& phi) {
    VectorField grad = fem::recover_gradient(mesh, phi);
    VectorField ud(mesh.node_count(), 0.0, 0.0, "km/h");
    for (index_t i = 0; i < mesh.node_count(); ++i) {
        double n = grad.norm(i);
        if (n < grad_eps) continue;
        ud.x[i] = -f[i] * grad.x[i] / n;
        ud.y[i] = -f[i] * grad.y[i] / n;
    }
    return ud;
}

RoutingField compute_routing(const Mesh& mesh, const ZoneMap& zones, const ScalarField& rho,
                             const ScenarioConfig& cfg, std::array<double, 2> attraction_center) {
    RoutingField r;
    const double eta = cfg.eta ? *cfg.eta : 0.1 * mesh.bbox_diameter();
    r.f = travel_cost(rho, mesh, zones, cfg);
    ScalarField g =
        attraction_source(mesh, attraction_center, cfg.attraction_g0, cfg.attraction_spread);
    r.psi = solve_screened_poisson(mesh, r.f, g, eta);
    r.phi = recover_potential(r.psi, eta);
    r.u_d = desired_speed(mesh, r.f, r.phi);
    return r;
}

} // namespace pcity::eikonal
