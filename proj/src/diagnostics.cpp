#include "pcity/diagnostics.hpp"

#include <cstdio>
#include <fstream>

#include "pcity/errors.hpp"

namespace pcity::diag {

std::vector<double> zone_mean_weights(const Zone& zone, const Mesh& mesh) {
    if (zone.tris.empty() || !(zone.area > 0.0))
        throw Error("EmptyZone", "zone \"" + zone.name + "\" has no triangles");
    std::vector<double> w(mesh.node_count(), 0.0);
    for (index_t e : zone.tris) {
        double a3 = mesh.area(e) / 3.0;
        for (int k = 0; k < 3; ++k) w[mesh.tri(e, k)] += a3;
    }
    for (double& v : w) v /= zone.area;
    return w;
}

double spatial_mean(const ScalarField& f, const Zone& zone, const Mesh& mesh) {
    if (zone.tris.empty() || !(zone.area > 0.0))
        throw Error("EmptyZone", "zone \"" + zone.name + "\" has no triangles");
    double s = 0.0;
    for (index_t e : zone.tris)
        s += mesh.area(e) / 3.0 * (f[mesh.tri(e, 0)] + f[mesh.tri(e, 1)] + f[mesh.tri(e, 2)]);
    return s / zone.area;
}

double time_mean(const ZoneSeries& series) {
    if (series.times.size() < 2)
        throw Error("TooFewSamples", "time mean needs at least two samples");
    double integral = 0.0;
    for (std::size_t k = 1; k < series.times.size(); ++k) {
        double dt = series.times[k] - series.times[k - 1];
        integral += 0.5 * dt * (series.values[k] + series.values[k - 1]);
    }
    double span = series.times.back() - series.times.front();
    return integral / span;
}

void write_vtk(const std::string& path, const Mesh& mesh,
               const std::vector<std::pair<std::string, const ScalarField*>>& scalars,
               const std::vector<std::pair<std::string, const VectorField*>>& vectors) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("IoFailure", "cannot write " + path);
    char buf[96];
    out << "# vtk DataFile Version 2.0\nporous city fields\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.node_count() << " double\n";
    for (index_t i = 0; i < mesh.node_count(); ++i) {
        std::snprintf(buf, sizeof buf, "%.9g %.9g 0\n", mesh.x(i), mesh.y(i));
        out << buf;
    }
    out << "CELLS " << mesh.triangle_count() << " " << 4 * mesh.triangle_count() << "\n";
    for (index_t e = 0; e < mesh.triangle_count(); ++e)
        out << "3 " << mesh.tri(e, 0) << " " << mesh.tri(e, 1) << " " << mesh.tri(e, 2) << "\n";
    out << "CELL_TYPES " << mesh.triangle_count() << "\n";
    for (index_t e = 0; e < mesh.triangle_count(); ++e) out << "5\n";
    out << "POINT_DATA " << mesh.node_count() << "\n";
    for (const auto& [name, f] : scalars) {
        out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (index_t i = 0; i < mesh.node_count(); ++i) {
            std::snprintf(buf, sizeof buf, "%.6e\n", (*f)[i]);
            out << buf;
        }
    }
    for (const auto& [name, v] : vectors) {
        out << "VECTORS " << name << " double\n";
        for (index_t i = 0; i < mesh.node_count(); ++i) {
            std::snprintf(buf, sizeof buf, "%.6e %.6e 0\n", v->x[i], v->y[i]);
            out << buf;
        }
    }
    if (!out) throw Error("IoFailure", "write failed for " + path);
}

void write_series_csv(const std::string& path, const std::vector<std::string>& columns,
                      const std::vector<double>& times,
                      const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("IoFailure", "cannot write " + path);
    out << "time_h";
    for (const auto& c : columns) out << "," << c;
    out << "\n";
    char buf[32];
    for (std::size_t r = 0; r < times.size(); ++r) {
        std::snprintf(buf, sizeof buf, "%.6e", times[r]);
        out << buf;
        for (double v : rows[r]) {
            std::snprintf(buf, sizeof buf, ",%.6e", v);
            out << buf;
        }
        out << "\n";
    }
    if (!out) throw Error("IoFailure", "write failed for " + path);
}

} // namespace pcity::diag
