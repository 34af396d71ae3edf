#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pcity/fields.hpp"
#include "pcity/mesh.hpp"
#include "pcity/zones.hpp"

namespace pcity::diag {

/// P1-exact zone average: ∫_zone f / area(zone). Throws EmptyZone.
double spatial_mean(const ScalarField& f, const Zone& zone, const Mesh& mesh);

/// Nodal weights w with w·f == spatial_mean(f, zone); precompute per zone for
/// cheap per-step sampling.
std::vector<double> zone_mean_weights(const Zone& zone, const Mesh& mesh);

struct ZoneSeries {
    std::string zone;
    std::vector<double> times;  // strictly increasing [h]
    std::vector<double> values; // zone means [kg/km²]
};

/// Trapezoid time average over the sampled span. Throws TooFewSamples.
double time_mean(const ZoneSeries& series);

/// Legacy VTK 2.0 ASCII, UNSTRUCTURED_GRID, triangles as cell type 5,
/// POINT_DATA scalars and vectors. Throws IoFailure.
void write_vtk(const std::string& path, const Mesh& mesh,
               const std::vector<std::pair<std::string, const ScalarField*>>& scalars,
               const std::vector<std::pair<std::string, const VectorField*>>& vectors);

/// RFC-4180 CSV with LF endings, header "time_h,<col>...", %.6e values.
void write_series_csv(const std::string& path, const std::vector<std::string>& columns,
                      const std::vector<double>& times,
                      const std::vector<std::vector<double>>& rows);

} // namespace pcity::diag
