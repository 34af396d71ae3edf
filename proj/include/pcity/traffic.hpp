#pragma once

#include <vector>

#include "pcity/config.hpp"
#include "pcity/eikonal.hpp"
#include "pcity/fields.hpp"
#include "pcity/mesh.hpp"
#include "pcity/sparse.hpp"
#include "pcity/zones.hpp"

namespace pcity::traffic {

constexpr double rho_floor = 1.0; // veh/km², floor for every division by rho

struct CoefficientFields {
    ScalarField porosity;     // eps
    ScalarField permeability; // K(x) [km²]
    ScalarField kappa;        // parking rate [1/h]
    ScalarField demand;       // q [veh/km²/h]
};

struct TrafficState {
    double t = 0.0;  // [h]
    ScalarField rho; // [veh/km²], >= 0
    VectorField u;   // [km/h], u·n = 0 on walls
};

struct StepStats {
    long clamp_events = 0;
    double clamp_mass = 0.0;           // vehicles added by clamping rho at 0
    double budget_residual = 0.0;      // |realized - predicted - clamp| mass audit
    double max_wall_normal_speed = 0.0;
};

/// Precomputes the constant operators (diffusion, reaction, source load,
/// lumped masses) for a mesh + coefficient set; all step operations run
/// through it. Deterministic: fixed element order, no parallelism.
class Stepper {
public:
    Stepper(const Mesh& mesh, const CoefficientFields& fields, const ScenarioConfig& cfg);

    /// drho/dt: lumped-eps-mass inverse of (source - convection - diffusion - reaction).
    ScalarField density_rhs(const TrafficState& s) const;

    /// Material acceleration (relaxation, anticipation, Brinkman, Darcy,
    /// Forchheimer); this is also the acceleration the emission chain consumes.
    VectorField material_acceleration(const TrafficState& s, const VectorField& u_d) const;

    /// Stability bound combining advective, diffusive and algebraic-sink rates.
    double cfl_dt(const TrafficState& s) const;

    /// One SSP-RK3 step; each stage clamps rho at 0 and projects wall slip.
    TrafficState step(const TrafficState& s, const eikonal::RoutingField& routing, double dt,
                      StepStats* stats = nullptr) const;

    double vehicle_mass(const ScalarField& rho) const; // ∫ eps rho, lumped
    const std::vector<double>& lumped_eps_mass() const { return lump_eps_; }

private:
    void density_rhs_raw(const double* rho, const double* ux, const double* uy,
                         std::vector<double>& vec) const; // before lumped-mass inverse
    void advection_raw(const double* ux, const double* uy, const double* comp,
                       std::vector<double>& vec) const; // ∫ (u·∇comp) λ_i

    const Mesh& mesh_;
    const CoefficientFields& f_;
    const ScenarioConfig& cfg_;
    SparseMatrix stiff_nu_;          // eps*nu stiffness
    std::vector<double> sink_kappa_; // lumped eps*kappa mass (vertex quadrature keeps
                                     // the parking sink positivity-safe at support edges)
    SparseMatrix stiff_mu_over_eps_; // mu/eps stiffness (Brinkman inner operator)
    std::vector<double> q_load_;     // ∫ (1-eps) q λ_i
    std::vector<double> lump_mass_;  // plain lumped mass
    std::vector<double> lump_eps_;   // eps-weighted lumped mass
    double c2_ = 0.0;                // theta / rho_max

    friend struct StepperTestAccess;
};

struct Snapshot {
    double t = 0.0;
    ScalarField rho;
    VectorField u, u_d, accel;
};

struct RunResult {
    std::vector<Snapshot> snapshots; // at the configured cadence
    double evacuation_time = 0.0;    // first t with mass < frac*initial; T when never
    bool evacuated = false;
    int steps = 0;
    long node_steps = 0;
    long clamp_events = 0;
    double max_budget_residual = 0.0;
    double max_wall_normal_speed = 0.0;
    double max_speed = 0.0;         // max ‖u‖ over the run
    double max_desired_speed = 0.0; // max ‖u_d‖ over the run
};

/// March from the given initial density (vehicles at rest) to cfg.horizon,
/// refreshing the routing every cfg.routing_every steps and stopping early
/// once the vehicle count drops below cfg.vehicle_epsilon_frac of the start.
RunResult run_traffic(const Mesh& mesh, const ZoneMap& zones, const CoefficientFields& fields,
                      const ScalarField& rho0, const ScenarioConfig& cfg);

} // namespace pcity::traffic
