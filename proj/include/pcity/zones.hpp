#pragma once

#include <string>
#include <vector>

#include "pcity/mesh.hpp"

namespace pcity {

enum class ZoneRole { Rural, Urban, Selected };

struct Zone {
    std::string name;
    ZoneRole role;
    std::vector<index_t> tris;
    std::vector<index_t> nodes;
    double area = 0.0; // [km²], sum of member triangle areas
};

struct ZonePolygon {
    std::string name;
    ZoneRole role;
    std::vector<double> xy; // closed implicitly; >= 3 vertices
};

/// Named regions over a mesh. Triangle membership is unique; node membership
/// follows the majority of incident triangles with ties resolved to the lower
/// zone id. Zone 0 is always the rural zone (possibly empty).
class ZoneMap {
public:
    /// Adopt the zone ids embedded in the mesh; roles come from the names:
    /// "rural" -> Rural, "urban" -> Urban, everything else -> Selected.
    static ZoneMap from_mesh_tags(const Mesh& mesh);

    /// Assign triangles by centroid containment. Polygons are painted in
    /// order (urban first, selected zones nested inside it); uncovered
    /// triangles are rural. Throws OpenPolygon / ZoneOutsideDomain.
    static ZoneMap from_polygons(const Mesh& mesh, const std::vector<ZonePolygon>& polys);

    int zone_count() const { return static_cast<int>(zones_.size()); }
    const Zone& zone(int id) const { return zones_[static_cast<std::size_t>(id)]; }
    const std::vector<Zone>& zones() const { return zones_; }

    int tri_zone(index_t e) const { return tri_zone_[static_cast<std::size_t>(e)]; }
    int node_zone(index_t i) const { return node_zone_[static_cast<std::size_t>(i)]; }
    ZoneRole node_role(index_t i) const { return zones_[node_zone_[i]].role; }

    /// Indicator for the urban-proper zone (selected zones count as non-urban:
    /// they are restricted to traffic, so travel cost there is rural-valued).
    bool node_in_urban(index_t i) const { return node_role(i) == ZoneRole::Urban; }

    int urban_zone_id() const { return urban_id_; } // -1 when absent

private:
    static ZoneMap finalize(const Mesh& mesh, std::vector<int> tri_zone,
                            std::vector<std::string> names, std::vector<ZoneRole> roles);

    std::vector<Zone> zones_;
    std::vector<int> tri_zone_, node_zone_;
    int urban_id_ = -1;
};

/// Alias matching the operation vocabulary: ZoneMap from named polygons.
inline ZoneMap build_zone_map(const Mesh& mesh, const std::vector<ZonePolygon>& polys) {
    return ZoneMap::from_polygons(mesh, polys);
}

bool point_in_polygon(double px, double py, const std::vector<double>& xy);

} // namespace pcity
