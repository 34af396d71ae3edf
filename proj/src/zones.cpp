#include "pcity/zones.hpp"

#include <algorithm>
#include <map>

#include "pcity/errors.hpp"

namespace pcity {

bool point_in_polygon(double px, double py, const std::vector<double>& xy) {
    // even-odd ray casting; adequate for centroids in generic position
    const std::size_t n = xy.size() / 2;
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        double xi = xy[2 * i], yi = xy[2 * i + 1];
        double xj = xy[2 * j], yj = xy[2 * j + 1];
        if ((yi > py) != (yj > py)) {
            double t = (py - yi) / (yj - yi);
            if (px < xi + t * (xj - xi)) inside = !inside;
        }
    }
    return inside;
}

ZoneMap ZoneMap::finalize(const Mesh& mesh, std::vector<int> tri_zone,
                          std::vector<std::string> names, std::vector<ZoneRole> roles) {
    ZoneMap zm;
    const index_t np = mesh.node_count();
    const index_t nt = mesh.triangle_count();
    zm.tri_zone_ = std::move(tri_zone);

    zm.zones_.resize(names.size());
    for (std::size_t z = 0; z < names.size(); ++z) {
        zm.zones_[z].name = std::move(names[z]);
        zm.zones_[z].role = roles[z];
        if (roles[z] == ZoneRole::Urban) zm.urban_id_ = static_cast<int>(z);
    }
    for (index_t e = 0; e < nt; ++e) {
        Zone& z = zm.zones_[zm.tri_zone_[e]];
        z.tris.push_back(e);
        z.area += mesh.area(e);
    }

    // Node zone: majority of incident triangles, ties to the lower zone id.
    zm.node_zone_.assign(np, 0);
    const auto& off = mesh.node_tri_offsets();
    const auto& nts = mesh.node_tris();
    std::vector<int> count(zm.zones_.size());
    for (index_t i = 0; i < np; ++i) {
        std::fill(count.begin(), count.end(), 0);
        for (index_t k = off[i]; k < off[i + 1]; ++k) ++count[zm.tri_zone_[nts[k]]];
        int best = 0;
        for (std::size_t z = 1; z < count.size(); ++z)
            if (count[z] > count[best]) best = static_cast<int>(z);
        zm.node_zone_[i] = best;
    }
    for (index_t i = 0; i < np; ++i) zm.zones_[zm.node_zone_[i]].nodes.push_back(i);
    return zm;
}

ZoneMap ZoneMap::from_mesh_tags(const Mesh& mesh) {
    std::vector<std::string> names = mesh.zone_names();
    std::vector<ZoneRole> roles(names.size(), ZoneRole::Selected);
    for (std::size_t z = 0; z < names.size(); ++z) {
        if (names[z] == "rural") roles[z] = ZoneRole::Rural;
        else if (names[z] == "urban") roles[z] = ZoneRole::Urban;
    }
    return finalize(mesh, mesh.tri_zone(), std::move(names), std::move(roles));
}

ZoneMap ZoneMap::from_polygons(const Mesh& mesh, const std::vector<ZonePolygon>& polys) {
    for (const auto& p : polys)
        if (p.xy.size() < 6) throw MeshError("OpenPolygon", "zone \"" + p.name + "\" has < 3 vertices");

    std::vector<std::string> names = {"rural"};
    std::vector<ZoneRole> roles = {ZoneRole::Rural};
    for (const auto& p : polys) {
        names.push_back(p.name);
        roles.push_back(p.role);
    }

    const index_t nt = mesh.triangle_count();
    std::vector<int> tri_zone(nt, 0);
    for (std::size_t pi = 0; pi < polys.size(); ++pi) {
        bool any = false;
        for (index_t e = 0; e < nt; ++e) {
            if (point_in_polygon(mesh.centroid_x(e), mesh.centroid_y(e), polys[pi].xy)) {
                tri_zone[e] = static_cast<int>(pi + 1); // later polygons paint over earlier ones
                any = true;
            }
        }
        if (!any)
            throw MeshError("ZoneOutsideDomain",
                            "zone \"" + polys[pi].name + "\" contains no triangle centroid");
    }
    return finalize(mesh, std::move(tri_zone), std::move(names), std::move(roles));
}

} // namespace pcity
