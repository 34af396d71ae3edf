#include "pcity/assembly.hpp"

namespace pcity::fem {

SparseMatrix assemble_mass(const Mesh& mesh, const ScalarField& coeff) {
    SparseMatrix m = SparseMatrix::zeros(mesh);
    for (index_t e = 0; e < mesh.triangle_count(); ++e) {
        index_t n[3] = {mesh.tri(e, 0), mesh.tri(e, 1), mesh.tri(e, 2)};
        double c = (coeff[n[0]] + coeff[n[1]] + coeff[n[2]]) / 3.0;
        double w = c * mesh.area(e) / 12.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m.add(n[i], n[j], w * (i == j ? 2.0 : 1.0));
    }
    return m;
}

SparseMatrix assemble_mass_elementwise(const Mesh& mesh, const std::vector<double>& tri_coeff) {
    SparseMatrix m = SparseMatrix::zeros(mesh);
    for (index_t e = 0; e < mesh.triangle_count(); ++e) {
        index_t n[3] = {mesh.tri(e, 0), mesh.tri(e, 1), mesh.tri(e, 2)};
        double w = tri_coeff[e] * mesh.area(e) / 12.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m.add(n[i], n[j], w * (i == j ? 2.0 : 1.0));
    }
    return m;
}

SparseMatrix assemble_stiffness(const Mesh& mesh, const ScalarField& coeff) {
    SparseMatrix m = SparseMatrix::zeros(mesh);
    for (index_t e = 0; e < mesh.triangle_count(); ++e) {
        index_t n[3] = {mesh.tri(e, 0), mesh.tri(e, 1), mesh.tri(e, 2)};
        double c = (coeff[n[0]] + coeff[n[1]] + coeff[n[2]]) / 3.0;
        double w = c * mesh.area(e);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                m.add(n[i], n[j],
                      w * (mesh.grad_x(e, i) * mesh.grad_x(e, j) +
                           mesh.grad_y(e, i) * mesh.grad_y(e, j)));
    }
    return m;
}

SparseMatrix assemble_convection(const Mesh& mesh, const VectorField& v) {
    SparseMatrix m = SparseMatrix::zeros(mesh);
    for (index_t e = 0; e < mesh.triangle_count(); ++e) {
        index_t n[3] = {mesh.tri(e, 0), mesh.tri(e, 1), mesh.tri(e, 2)};
        double w = mesh.area(e) / 12.0;
        for (int j = 0; j < 3; ++j) {
            double gx = mesh.grad_x(e, j), gy = mesh.grad_y(e, j);
            for (int i = 0; i < 3; ++i) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k)
                    s += (v.x[n[k]] * gx + v.y[n[k]] * gy) * (k == i ? 2.0 : 1.0);
                m.add(n[i], n[j], w * s);
            }
        }
    }
    return m;
}

SparseMatrix assemble_boundary_flux(const Mesh& mesh, const VectorField& v, BoundaryTag tag) {
    SparseMatrix m = SparseMatrix::zeros(mesh);
    for (const auto& be : mesh.boundary_edges()) {
        if (be.tag != tag) continue;
        double vna = v.x[be.a] * be.nx + v.y[be.a] * be.ny;
        double vnb = v.x[be.b] * be.nx + v.y[be.b] * be.ny;
        double L = be.length;
        // exact integrals of lambda^p lambda^q (v·n) on the edge
        m.add(be.a, be.a, L * (vna / 4.0 + vnb / 12.0));
        m.add(be.a, be.b, L * (vna + vnb) / 12.0);
        m.add(be.b, be.a, L * (vna + vnb) / 12.0);
        m.add(be.b, be.b, L * (vna / 12.0 + vnb / 4.0));
    }
    return m;
}

std::vector<double> load_vector(const Mesh& mesh, const ScalarField& f) {
    std::vector<double> b(mesh.node_count(), 0.0);
    for (index_t e = 0; e < mesh.triangle_count(); ++e) {
        index_t n[3] = {mesh.tri(e, 0), mesh.tri(e, 1), mesh.tri(e, 2)};
        double sum = f[n[0]] + f[n[1]] + f[n[2]];
        double w = mesh.area(e) / 12.0;
        for (int i = 0; i < 3; ++i) b[n[i]] += w * (sum + f[n[i]]);
    }
    return b;
}

double integrate(const Mesh& mesh, const ScalarField& f) {
    double s = 0.0;
    for (index_t e = 0; e < mesh.triangle_count(); ++e)
        s += mesh.area(e) / 3.0 * (f[mesh.tri(e, 0)] + f[mesh.tri(e, 1)] + f[mesh.tri(e, 2)]);
    return s;
}

std::vector<double> element_divergence(const Mesh& mesh, const VectorField& v) {
    std::vector<double> d(mesh.triangle_count(), 0.0);
    for (index_t e = 0; e < mesh.triangle_count(); ++e) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) {
            index_t n = mesh.tri(e, k);
            s += v.x[n] * mesh.grad_x(e, k) + v.y[n] * mesh.grad_y(e, k);
        }
        d[e] = s;
    }
    return d;
}

void element_gradient(const Mesh& mesh, const ScalarField& f, std::vector<double>& gx,
                      std::vector<double>& gy) {
    gx.assign(mesh.triangle_count(), 0.0);
    gy.assign(mesh.triangle_count(), 0.0);
    for (index_t e = 0; e < mesh.triangle_count(); ++e) {
        for (int k = 0; k < 3; ++k) {
            index_t n = mesh.tri(e, k);
            gx[e] += f[n] * mesh.grad_x(e, k);
            gy[e] += f[n] * mesh.grad_y(e, k);
        }
    }
}

ScalarField recover_nodal(const Mesh& mesh, const std::vector<double>& tri_vals) {
    ScalarField out(mesh.node_count(), 0.0);
    const auto& off = mesh.node_tri_offsets();
    const auto& nts = mesh.node_tris();
    for (index_t i = 0; i < mesh.node_count(); ++i) {
        double num = 0.0, den = 0.0;
        for (index_t k = off[i]; k < off[i + 1]; ++k) {
            num += mesh.area(nts[k]) * tri_vals[nts[k]];
            den += mesh.area(nts[k]);
        }
        out[i] = den > 0.0 ? num / den : 0.0;
    }
    return out;
}

VectorField recover_gradient(const Mesh& mesh, const ScalarField& f) {
    std::vector<double> gx, gy;
    element_gradient(mesh, f, gx, gy);
    VectorField out(mesh.node_count(), 0.0, 0.0);
    const auto& off = mesh.node_tri_offsets();
    const auto& nts = mesh.node_tris();
    for (index_t i = 0; i < mesh.node_count(); ++i) {
        double nx = 0.0, ny = 0.0, den = 0.0;
        for (index_t k = off[i]; k < off[i + 1]; ++k) {
            double a = mesh.area(nts[k]);
            nx += a * gx[nts[k]];
            ny += a * gy[nts[k]];
            den += a;
        }
        if (den > 0.0) {
            out.x[i] = nx / den;
            out.y[i] = ny / den;
        }
    }
    return out;
}

double boundary_advective_flux(const Mesh& mesh, const ScalarField& rho, const VectorField& v) {
    double s = 0.0;
    for (const auto& be : mesh.boundary_edges()) {
        double vna = v.x[be.a] * be.nx + v.y[be.a] * be.ny;
        double vnb = v.x[be.b] * be.nx + v.y[be.b] * be.ny;
        s += be.length * (rho[be.a] * vna / 3.0 + (rho[be.a] * vnb + rho[be.b] * vna) / 6.0 +
                          rho[be.b] * vnb / 3.0);
    }
    return s;
}

} // namespace pcity::fem
