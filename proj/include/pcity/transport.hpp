#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "pcity/fields.hpp"
#include "pcity/mesh.hpp"
#include "pcity/sparse.hpp"

namespace pcity::transport {

struct TransportSetup {
    ScalarField porosity;
    VectorField wind;      // steady reference wind [km/h]
    double mu_phi = 0.5;   // km²/h
    double sigma = 0.1;    // 1/h
    double dt = 0.01;      // h, backward Euler
    double zeta1_scale = 1.0; // 0 turns the streamline stabilizer off
    double lin_tol = 1e-8;
    bool reassemble_each_step = false;
};

/// Backward-Euler GLS operator
///   (1/dt) M + C + R - Bnd_in + M_sigma + SL
/// with the streamline term SL built from zeta1|_K = scale*h_K/(2‖v‖_K+1e-12)
/// capped at dt (element-mean wind). Assembled once and reused across steps
/// unless reassemble_each_step is set; reassembly is bit-identical.
class GlsOperator {
public:
    GlsOperator(const Mesh& mesh, const TransportSetup& setup);

    const SparseMatrix& matrix() const { return a_; }
    std::vector<double> rhs(const ScalarField& phi_n, const ScalarField& ec) const;

    struct StepResult {
        ScalarField phi;
        int iterations = 0;
        double residual = 0.0;
    };
    StepResult step(const ScalarField& phi_n, const ScalarField& ec) const;

private:
    const Mesh& mesh_;
    TransportSetup setup_;
    SparseMatrix a_;
    SparseMatrix mass_eps_;
    std::vector<double> zeta1_, vbx_, vby_; // per element
};

/// The assembled linear system of one step: operator matrix and full rhs.
std::pair<SparseMatrix, std::vector<double>> assemble_gls_step(const Mesh& mesh,
                                                               const TransportSetup& setup,
                                                               const ScalarField& phi_n,
                                                               const ScalarField& ec);

struct TransportState {
    double t = 0.0;
    ScalarField phi; // kg/km²
    int iterations = 0;
    double residual = 0.0;
};

/// Emission-concentration series sampled in time; evaluation interpolates
/// linearly and holds the end values outside the sampled span.
struct EcSeries {
    std::vector<double> times;
    std::vector<ScalarField> values;
    ScalarField at(double t) const;
};

struct TransportRunResult {
    std::vector<TransportState> snapshots;
    double min_phi = 0.0, max_phi = 0.0;
    int max_iterations = 0;
    double max_residual = 0.0;
    int steps = 0;
};

/// March to T; on_step (optional) sees every accepted state, snapshots are
/// kept at the given cadence (plus the initial and final states).
TransportRunResult run_transport(const Mesh& mesh, const TransportSetup& setup,
                                 const EcSeries& ec, double T, double snapshot_every,
                                 double phi0 = 0.0,
                                 const std::function<void(const TransportState&)>& on_step = {});

} // namespace pcity::transport
