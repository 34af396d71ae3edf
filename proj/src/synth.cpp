#include "pcity/synth.hpp"

#include <cmath>
#include <map>

#include "pcity/errors.hpp"

namespace pcity {

namespace {

std::vector<double> disc_polygon(const Disc& d, int segments) {
    std::vector<double> xy;
    xy.reserve(2 * segments);
    for (int k = 0; k < segments; ++k) {
        double a = 2.0 * M_PI * k / segments;
        xy.push_back(d.cx + d.r * std::cos(a));
        xy.push_back(d.cy + d.r * std::sin(a));
    }
    return xy;
}

} // namespace

std::pair<Mesh, ZoneMap> synthetic_city_mesh(const SyntheticCityParams& p) {
    if (!(p.edge_length_km > 0.0))
        throw MeshError("DegenerateGeometry", "edge length must be positive");
    if (!(p.width_km > 2 * p.edge_length_km && p.height_km > 2 * p.edge_length_km))
        throw MeshError("DegenerateGeometry", "rectangle smaller than the edge length");

    const int nx = std::max(2, static_cast<int>(std::lround(p.width_km / p.edge_length_km)));
    const int ny = std::max(2, static_cast<int>(std::lround(p.height_km / p.edge_length_km)));
    const double dx = p.width_km / nx, dy = p.height_km / ny;
    const double h = std::min(dx, dy);

    for (const auto& ob : p.obstacles) {
        if (!(ob.r >= 1.5 * h))
            throw MeshError("DegenerateGeometry", "obstacle radius must exceed 1.5 mesh spacings");
        if (!(ob.cx - ob.r > dx && ob.cx + ob.r < p.width_km - dx && ob.cy - ob.r > dy &&
              ob.cy + ob.r < p.height_km - dy))
            throw MeshError("DegenerateGeometry", "obstacle not strictly inside the rectangle");
    }
    const double ccx = 0.5 * p.width_km, ccy = 0.5 * p.height_km;
    for (const auto& [name, d] : p.selected) {
        if (!(d.r > 0.0)) throw MeshError("DegenerateGeometry", "selected zone radius must be positive");
        double dist = std::hypot(d.cx - ccx, d.cy - ccy);
        if (!(dist + d.r <= p.city_radius_km))
            throw MeshError("DegenerateGeometry", "selected zone \"" + name + "\" not nested in the city");
    }

    // Grid nodes; nodes near an obstacle circle snap radially onto it so the
    // hole boundary is body-fitted. Interior rows/columns only may snap.
    std::vector<double> xy(2 * static_cast<std::size_t>(nx + 1) * (ny + 1));
    auto nid = [&](int i, int j) { return static_cast<index_t>(j * (nx + 1) + i); };
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            double px = i * dx, py = j * dy;
            if (i > 0 && i < nx && j > 0 && j < ny) {
                for (const auto& ob : p.obstacles) {
                    double rr = std::hypot(px - ob.cx, py - ob.cy);
                    if (rr > 1e-12 && std::abs(rr - ob.r) < 0.4 * h) {
                        px = ob.cx + (px - ob.cx) * ob.r / rr;
                        py = ob.cy + (py - ob.cy) * ob.r / rr;
                        break;
                    }
                }
            }
            xy[2 * nid(i, j)] = px;
            xy[2 * nid(i, j) + 1] = py;
        }
    }

    // Alternating-diagonal split; drop triangles whose centroid falls in a hole.
    auto in_hole = [&](double cx, double cy) {
        for (const auto& ob : p.obstacles)
            if (std::hypot(cx - ob.cx, cy - ob.cy) < ob.r) return true;
        return false;
    };
    std::vector<index_t> tris;
    auto push_tri = [&](index_t a, index_t b, index_t c) {
        double cx = (xy[2 * a] + xy[2 * b] + xy[2 * c]) / 3.0;
        double cy = (xy[2 * a + 1] + xy[2 * b + 1] + xy[2 * c + 1]) / 3.0;
        if (in_hole(cx, cy)) return;
        tris.push_back(a);
        tris.push_back(b);
        tris.push_back(c);
    };
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            index_t a = nid(i, j), b = nid(i + 1, j), c = nid(i + 1, j + 1), d = nid(i, j + 1);
            if ((i + j) % 2 == 0) {
                push_tri(a, b, c);
                push_tri(a, c, d);
            } else {
                push_tri(a, b, d);
                push_tri(b, c, d);
            }
        }
    }
    if (tris.empty()) throw MeshError("DegenerateGeometry", "all triangles removed by obstacles");

    // Compact node numbering over referenced nodes only.
    std::vector<index_t> remap(xy.size() / 2, -1);
    std::vector<double> cxy;
    index_t next = 0;
    for (index_t v : tris)
        if (remap[v] < 0) {
            remap[v] = next++;
            cxy.push_back(xy[2 * v]);
            cxy.push_back(xy[2 * v + 1]);
        }
    for (index_t& v : tris) v = remap[v];

    // Boundary edges: exactly one adjacent triangle. Left -> inlet, right ->
    // outlet, everything else (top, bottom, hole rims) -> wall.
    std::map<std::pair<index_t, index_t>, int> ecount;
    for (std::size_t e = 0; e < tris.size() / 3; ++e)
        for (int k = 0; k < 3; ++k) {
            index_t a = tris[3 * e + k], b = tris[3 * e + (k + 1) % 3];
            auto key = std::minmax(a, b);
            ++ecount[{key.first, key.second}];
        }
    const double tol = 1e-9 * std::max(p.width_km, p.height_km);
    std::vector<Mesh::TaggedSegment> segs;
    for (const auto& [key, count] : ecount) {
        if (count != 1) continue;
        double xa = cxy[2 * key.first], xb = cxy[2 * key.second];
        BoundaryTag tag = BoundaryTag::Wall;
        if (std::abs(xa) < tol && std::abs(xb) < tol) tag = BoundaryTag::Inlet;
        else if (std::abs(xa - p.width_km) < tol && std::abs(xb - p.width_km) < tol)
            tag = BoundaryTag::Outlet;
        segs.push_back({key.first, key.second, tag});
    }

    Mesh bare = [&] {
        try {
            return Mesh::build(cxy, tris, segs);
        } catch (const MeshError& e) {
            throw MeshError("DegenerateGeometry", e.what());
        }
    }();

    std::vector<ZonePolygon> polys;
    if (p.city_radius_km > 0.0)
        polys.push_back({"urban", ZoneRole::Urban,
                         disc_polygon({ccx, ccy, p.city_radius_km}, 128)});
    for (const auto& [name, d] : p.selected)
        polys.push_back({name, ZoneRole::Selected, disc_polygon(d, 64)});
    ZoneMap zones = ZoneMap::from_polygons(bare, polys);

    // Rebuild carrying the zone assignment so MSH round-trips keep the zones.
    std::vector<int> tri_zone(bare.triangle_count());
    std::vector<std::string> names;
    for (const auto& z : zones.zones()) names.push_back(z.name);
    for (index_t e = 0; e < bare.triangle_count(); ++e) tri_zone[e] = zones.tri_zone(e);
    Mesh mesh = Mesh::build(std::move(cxy), std::move(tris), std::move(segs), std::move(tri_zone),
                            std::move(names));
    ZoneMap final_zones = ZoneMap::from_mesh_tags(mesh);
    return {std::move(mesh), std::move(final_zones)};
}

} // namespace pcity
