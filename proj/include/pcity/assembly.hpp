#pragma once

#include "pcity/fields.hpp"
#include "pcity/mesh.hpp"
#include "pcity/sparse.hpp"

namespace pcity::fem {

// All assemblies accumulate per-element contributions in ascending element
// order into the mesh's pre-built pattern, so two assemblies of identical
// inputs are bit-identical. Variable coefficients enter as triangle vertex
// means (midpoint-rule accuracy, consistent with P1).

/// (i,j) = ∫ coeff λ_j λ_i. SPD for coeff > 0.
SparseMatrix assemble_mass(const Mesh& mesh, const ScalarField& coeff);

/// Same with a piecewise-constant per-triangle coefficient.
SparseMatrix assemble_mass_elementwise(const Mesh& mesh, const std::vector<double>& tri_coeff);

/// (i,j) = ∫ coeff ∇λ_j · ∇λ_i. Constants are in the null space.
SparseMatrix assemble_stiffness(const Mesh& mesh, const ScalarField& coeff);

/// (i,j) = ∫ (v · ∇λ_j) λ_i with piecewise-linear v. Generally nonsymmetric.
SparseMatrix assemble_convection(const Mesh& mesh, const VectorField& velocity);

/// Edge-wise (i,j) = ∫_{Γ_tag} λ_j λ_i (v·n), exact for the cubic integrand.
/// v·n varies linearly along each tagged edge; n is the outward normal.
SparseMatrix assemble_boundary_flux(const Mesh& mesh, const VectorField& velocity,
                                    BoundaryTag tag);

/// b_i = ∫ f λ_i (consistent load).
std::vector<double> load_vector(const Mesh& mesh, const ScalarField& f);

/// ∫ f over the mesh, exact for P1.
double integrate(const Mesh& mesh, const ScalarField& f);

/// Per-triangle constant divergence of a P1 vector field.
std::vector<double> element_divergence(const Mesh& mesh, const VectorField& v);

/// Per-triangle constant gradient of a P1 scalar field.
void element_gradient(const Mesh& mesh, const ScalarField& f, std::vector<double>& gx,
                      std::vector<double>& gy);

/// Area-weighted average of per-triangle values onto nodes.
ScalarField recover_nodal(const Mesh& mesh, const std::vector<double>& tri_vals);

/// Area-weighted nodal gradient of a P1 scalar field.
VectorField recover_gradient(const Mesh& mesh, const ScalarField& f);

/// ∮ rho (v·n) over the whole boundary, exact for P1 rho and v.
double boundary_advective_flux(const Mesh& mesh, const ScalarField& rho, const VectorField& v);

} // namespace pcity::fem
