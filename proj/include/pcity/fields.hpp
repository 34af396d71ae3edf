#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pcity/errors.hpp"

namespace pcity {

using index_t = std::int32_t;

/// One real value per mesh node, with a unit label carried as metadata.
struct ScalarField {
    std::vector<double> v;
    std::string unit;

    ScalarField() = default;
    ScalarField(std::size_t n, double fill, std::string unit_ = "")
        : v(n, fill), unit(std::move(unit_)) {}

    std::size_t size() const { return v.size(); }
    double& operator[](std::size_t i) { return v[i]; }
    double operator[](std::size_t i) const { return v[i]; }
};

/// Two real values per mesh node (component arrays), with a unit label.
struct VectorField {
    std::vector<double> x, y;
    std::string unit;

    VectorField() = default;
    VectorField(std::size_t n, double fx, double fy, std::string unit_ = "")
        : x(n, fx), y(n, fy), unit(std::move(unit_)) {}

    std::size_t size() const { return x.size(); }
    double norm(std::size_t i) const { return std::hypot(x[i], y[i]); }
};

inline void require_finite(const ScalarField& f, const char* what) {
    for (double a : f.v)
        if (!std::isfinite(a)) throw Error("NonFiniteState", std::string(what) + " contains NaN/Inf");
}

inline void require_finite(const VectorField& f, const char* what) {
    for (std::size_t i = 0; i < f.size(); ++i)
        if (!std::isfinite(f.x[i]) || !std::isfinite(f.y[i]))
            throw Error("NonFiniteState", std::string(what) + " contains NaN/Inf");
}

} // namespace pcity
