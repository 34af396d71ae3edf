#pragma once

#include <string>
#include <vector>

#include "pcity/fields.hpp"
#include "pcity/mesh.hpp"
#include "pcity/sparse.hpp"

namespace pcity::airflow {

/// Everything the wind solver needs. Pressure is kinematic inside the solver
/// (rho_a absorbed); reported pressure multiplies rho_a back.
struct WindSetup {
    ScalarField porosity;
    ScalarField permeability;
    double mu_air = 0.1;      // km²/h
    double forchheimer = 0.0; // C_F
    double rho_air = 1.2e9;   // kg/km³, reported pressure only
    std::vector<double> inlet_vx, inlet_vy; // one value per inlet node (mesh order)
    bool noslip_walls = false;
    double cfl_safety = 0.4;
    double steady_tol = 1e-4; // km/h per h
    int max_steps = 200000;
    double pressure_tol = 1e-10;
};

struct WindState {
    double t = 0.0;
    VectorField v;      // km/h
    ScalarField P;      // kinematic pressure [km²/h²]
    bool converged = false;
    int steps = 0;
    double div_before = 0.0; // L² norm of element divergence of v*
    double div_after = 0.0;  // same after the pressure correction
};

/// Chorin-style splitting on P1/P1: explicit tentative momentum, SPD pressure
/// Poisson with P = 0 on the outlet (the projection-compatible reading of the
/// outlet traction condition) and nodal gradient correction.
class Projector {
public:
    Projector(const Mesh& mesh, WindSetup setup);

    VectorField tentative_velocity(const WindState& s, double dt) const;
    ScalarField pressure_poisson(const VectorField& v_star, double dt,
                                 const ScalarField* warm_start = nullptr) const;
    VectorField correct_velocity(const VectorField& v_star, const ScalarField& p, double dt) const;

    /// Inlet Dirichlet and wall slip (or no-slip), re-imposed exactly.
    void apply_bcs(VectorField& v) const;

    double cfl_dt(const VectorField& v) const;
    double divergence_l2(const VectorField& v) const; // sqrt(Σ_K area·div²)

    const WindSetup& setup() const { return setup_; }

private:
    const Mesh& mesh_;
    WindSetup setup_;
    SparseMatrix pressure_op_;       // eps-stiffness with outlet rows eliminated
    SparseMatrix stiff_mua_over_eps_;
    std::vector<double> lump_mass_;
};

WindState run_to_steady(const Mesh& mesh, WindSetup setup);

/// Versioned binary snapshot of a converged wind field:
/// magic "PCWD0001" (8 bytes) + 16-char key + u64 node count + 2 f64 per node.
void save_snapshot(const std::string& path, const VectorField& v, const std::string& key);
bool load_snapshot(const std::string& path, const std::string& key, index_t node_count,
                   VectorField& out);

} // namespace pcity::airflow
