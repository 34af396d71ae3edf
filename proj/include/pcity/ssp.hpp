#pragma once

#include <vector>

namespace pcity {

/// Three-stage, third-order strong-stability-preserving Runge-Kutta step in
/// Shu-Osher convex-combination form, acting on a flat state vector:
///   u1 = u + dt L(u)
///   u2 = 3/4 u + 1/4 (u1 + dt L(u1))
///   u  = 1/3 u + 2/3 (u2 + dt L(u2))
/// rhs(state, out) evaluates L; post(state, stage) applies stage-wise fixes
/// (clamps, boundary projections) and may be a no-op.
template <class Rhs, class Post>
void ssp_rk3_step(std::vector<double>& u, double dt, Rhs&& rhs, Post&& post) {
    const std::vector<double> u0 = u;
    std::vector<double> k(u.size());

    rhs(u, k);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += dt * k[i];
    post(u, 0);

    rhs(u, k);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = 0.75 * u0[i] + 0.25 * (u[i] + dt * k[i]);
    post(u, 1);

    rhs(u, k);
    for (std::size_t i = 0; i < u.size(); ++i)
        u[i] = (1.0 / 3.0) * u0[i] + (2.0 / 3.0) * (u[i] + dt * k[i]);
    post(u, 2);
}

} // namespace pcity
