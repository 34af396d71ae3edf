#include "pcity/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

#include "pcity/errors.hpp"

namespace pcity {

const char* to_string(BoundaryTag t) {
    switch (t) {
        case BoundaryTag::Inlet: return "inlet";
        case BoundaryTag::Outlet: return "outlet";
        case BoundaryTag::Wall: return "wall";
        case BoundaryTag::Exit: return "exit";
    }
    return "?";
}

double Mesh::tri_diameter(index_t e) const {
    double d = 0.0;
    for (int k = 0; k < 3; ++k) {
        index_t a = tri(e, k), b = tri(e, (k + 1) % 3);
        d = std::max(d, std::hypot(x(b) - x(a), y(b) - y(a)));
    }
    return d;
}

double Mesh::bbox_diameter() const {
    return std::hypot(bbox_[1] - bbox_[0], bbox_[3] - bbox_[2]);
}

const std::vector<index_t>& Mesh::nodes_of(BoundaryTag t) const {
    return tag_nodes_[static_cast<int>(t)];
}

Mesh Mesh::build(std::vector<double> node_xy,
                 std::vector<index_t> tri_nodes,
                 std::vector<TaggedSegment> boundary_segments,
                 std::vector<int> tri_zone,
                 std::vector<std::string> zone_names) {
    Mesh m;
    if (node_xy.size() % 2 != 0 || tri_nodes.size() % 3 != 0)
        throw MeshError("MalformedHeader", "node/triangle array size mismatch");
    m.xy_ = std::move(node_xy);
    m.tris_ = std::move(tri_nodes);
    const index_t np = m.node_count();
    const index_t nt = m.triangle_count();
    if (np < 3 || nt < 1) throw MeshError("MalformedHeader", "empty mesh");

    for (index_t v : m.tris_)
        if (v < 0 || v >= np)
            throw MeshError("DanglingNodeReference",
                            "triangle references node " + std::to_string(v));
    for (const auto& s : boundary_segments)
        if (s.a < 0 || s.a >= np || s.b < 0 || s.b >= np)
            throw MeshError("DanglingNodeReference", "boundary segment references missing node");

    // Orientation fix and P1 geometry. Clockwise triangles get two indices
    // swapped; exactly degenerate ones are rejected.
    m.areas_.resize(nt);
    m.grads_.resize(6 * static_cast<std::size_t>(nt));
    for (index_t e = 0; e < nt; ++e) {
        index_t* n = &m.tris_[3 * static_cast<std::size_t>(e)];
        double x0 = m.x(n[0]), y0 = m.y(n[0]);
        double x1 = m.x(n[1]), y1 = m.y(n[1]);
        double x2 = m.x(n[2]), y2 = m.y(n[2]);
        double twice = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0);
        if (twice < 0.0) {
            std::swap(n[1], n[2]);
            std::swap(x1, x2);
            std::swap(y1, y2);
            twice = -twice;
        }
        if (!(twice > 0.0))
            throw MeshError("NonPositiveArea", "triangle " + std::to_string(e) + " is degenerate");
        m.areas_[e] = 0.5 * twice;
        // grad lambda_i = (y_j - y_k, x_k - x_j) / (2A), (i,j,k) cyclic
        double* g = &m.grads_[6 * static_cast<std::size_t>(e)];
        g[0] = (y1 - y2) / twice; g[1] = (x2 - x1) / twice;
        g[2] = (y2 - y0) / twice; g[3] = (x0 - x2) / twice;
        g[4] = (y0 - y1) / twice; g[5] = (x1 - x0) / twice;
    }
    m.total_area_ = 0.0;
    for (double a : m.areas_) m.total_area_ += a;

    // Edge -> adjacent-triangle map; boundary edges have exactly one triangle.
    struct EdgeInfo { int count = 0; index_t tri = -1; index_t a = -1, b = -1; };
    std::map<std::pair<index_t, index_t>, EdgeInfo> edges;
    for (index_t e = 0; e < nt; ++e) {
        for (int k = 0; k < 3; ++k) {
            index_t a = m.tri(e, k), b = m.tri(e, (k + 1) % 3);
            auto key = std::minmax(a, b);
            auto& info = edges[{key.first, key.second}];
            ++info.count;
            if (info.count == 1) { info.tri = e; info.a = a; info.b = b; }
        }
    }

    std::map<std::pair<index_t, index_t>, BoundaryTag> seg_tags;
    for (const auto& s : boundary_segments) {
        auto key = std::minmax(s.a, s.b);
        auto it = edges.find({key.first, key.second});
        if (it == edges.end() || it->second.count != 1) continue; // interior or stray segment: ignored
        auto ins = seg_tags.insert({{key.first, key.second}, s.tag});
        if (!ins.second && ins.first->second != s.tag)
            throw MeshError("UntaggedBoundaryEdge",
                            "boundary edge carries two different tags");
    }

    std::vector<int> bdeg(np, 0);
    for (const auto& [key, info] : edges) {
        if (info.count > 2)
            throw MeshError("MalformedHeader", "non-manifold edge (3+ triangles)");
        if (info.count != 1) continue;
        auto tg = seg_tags.find(key);
        if (tg == seg_tags.end())
            throw MeshError("UntaggedBoundaryEdge",
                            "boundary edge " + std::to_string(key.first) + "-" +
                                std::to_string(key.second) + " has no bnd tag");
        BoundaryEdge be;
        be.a = info.a;
        be.b = info.b;
        be.tag = tg->second;
        double ex = m.x(be.b) - m.x(be.a), ey = m.y(be.b) - m.y(be.a);
        be.length = std::hypot(ex, ey);
        double nx = ey / be.length, ny = -ex / be.length;
        double mx = 0.5 * (m.x(be.a) + m.x(be.b)) - m.centroid_x(info.tri);
        double my = 0.5 * (m.y(be.a) + m.y(be.b)) - m.centroid_y(info.tri);
        if (nx * mx + ny * my < 0.0) { nx = -nx; ny = -ny; }
        be.nx = nx;
        be.ny = ny;
        m.bedges_.push_back(be);
        ++bdeg[be.a];
        ++bdeg[be.b];
    }
    for (index_t i = 0; i < np; ++i)
        if (bdeg[i] != 0 && bdeg[i] != 2)
            throw MeshError("OpenBoundaryLoop",
                            "boundary node " + std::to_string(i) + " has degree " +
                                std::to_string(bdeg[i]));

    // Node tag ownership: wall beats inlet beats outlet beats exit.
    auto rank = [](BoundaryTag t) {
        switch (t) {
            case BoundaryTag::Wall: return 0;
            case BoundaryTag::Inlet: return 1;
            case BoundaryTag::Outlet: return 2;
            case BoundaryTag::Exit: return 3;
        }
        return 4;
    };
    std::vector<int> best(np, 99);
    std::vector<BoundaryTag> best_tag(np, BoundaryTag::Exit);
    for (const auto& be : m.bedges_)
        for (index_t v : {be.a, be.b})
            if (rank(be.tag) < best[v]) { best[v] = rank(be.tag); best_tag[v] = be.tag; }
    for (index_t i = 0; i < np; ++i)
        if (best[i] != 99) m.tag_nodes_[static_cast<int>(best_tag[i])].push_back(i);

    // Wall node normals: length-weighted average of adjacent wall-edge normals.
    const auto& wnodes = m.tag_nodes_[static_cast<int>(BoundaryTag::Wall)];
    std::unordered_map<index_t, index_t> wpos;
    for (index_t i = 0; i < static_cast<index_t>(wnodes.size()); ++i) wpos[wnodes[i]] = i;
    m.wall_normals_.assign(wnodes.size(), {0.0, 0.0});
    for (const auto& be : m.bedges_) {
        if (be.tag != BoundaryTag::Wall) continue;
        for (index_t v : {be.a, be.b}) {
            auto it = wpos.find(v);
            if (it == wpos.end()) continue;
            m.wall_normals_[it->second][0] += be.length * be.nx;
            m.wall_normals_[it->second][1] += be.length * be.ny;
        }
    }
    for (auto& nrm : m.wall_normals_) {
        double len = std::hypot(nrm[0], nrm[1]);
        if (len > 1e-14) { nrm[0] /= len; nrm[1] /= len; }
        else { nrm[0] = nrm[1] = 0.0; } // pinched corner between opposing walls
    }

    // Zones
    if (zone_names.empty()) zone_names = {"rural"};
    if (tri_zone.empty()) tri_zone.assign(nt, 0);
    if (static_cast<index_t>(tri_zone.size()) != nt)
        throw MeshError("MalformedHeader", "triangle zone array size mismatch");
    for (int z : tri_zone)
        if (z < 0 || z >= static_cast<int>(zone_names.size()))
            throw MeshError("MalformedHeader", "triangle zone id out of range");
    m.tri_zone_ = std::move(tri_zone);
    m.zone_names_ = std::move(zone_names);

    // Node -> incident triangles (CSR)
    m.ntri_off_.assign(np + 1, 0);
    for (index_t v : m.tris_) ++m.ntri_off_[v + 1];
    for (index_t i = 0; i < np; ++i) m.ntri_off_[i + 1] += m.ntri_off_[i];
    m.ntri_.resize(m.tris_.size());
    {
        std::vector<index_t> cursor(m.ntri_off_.begin(), m.ntri_off_.end() - 1);
        for (index_t e = 0; e < nt; ++e)
            for (int k = 0; k < 3; ++k) m.ntri_[cursor[m.tri(e, k)]++] = e;
    }

    // P1 adjacency pattern with self, columns sorted
    {
        std::vector<std::vector<index_t>> adj(np);
        for (index_t i = 0; i < np; ++i) adj[i].push_back(i);
        for (index_t e = 0; e < nt; ++e)
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    if (a != b) adj[m.tri(e, a)].push_back(m.tri(e, b));
        m.pat_off_.assign(np + 1, 0);
        for (index_t i = 0; i < np; ++i) {
            auto& row = adj[i];
            std::sort(row.begin(), row.end());
            row.erase(std::unique(row.begin(), row.end()), row.end());
            m.pat_off_[i + 1] = m.pat_off_[i] + static_cast<index_t>(row.size());
        }
        m.pat_cols_.reserve(m.pat_off_[np]);
        for (index_t i = 0; i < np; ++i)
            m.pat_cols_.insert(m.pat_cols_.end(), adj[i].begin(), adj[i].end());
    }

    m.min_edge_ = std::numeric_limits<double>::max();
    for (index_t e = 0; e < nt; ++e)
        for (int k = 0; k < 3; ++k) {
            index_t a = m.tri(e, k), b = m.tri(e, (k + 1) % 3);
            m.min_edge_ = std::min(m.min_edge_, std::hypot(m.x(b) - m.x(a), m.y(b) - m.y(a)));
        }
    m.bbox_[0] = m.bbox_[2] = std::numeric_limits<double>::max();
    m.bbox_[1] = m.bbox_[3] = std::numeric_limits<double>::lowest();
    for (index_t i = 0; i < np; ++i) {
        m.bbox_[0] = std::min(m.bbox_[0], m.x(i));
        m.bbox_[1] = std::max(m.bbox_[1], m.x(i));
        m.bbox_[2] = std::min(m.bbox_[2], m.y(i));
        m.bbox_[3] = std::max(m.bbox_[3], m.y(i));
    }
    return m;
}

// ---------------------------------------------------------------------------
// MSH parsing
// ---------------------------------------------------------------------------

namespace msh {
namespace {

struct Tok {
    std::istringstream in;
    explicit Tok(const std::string& s) : in(s) {}
    std::string word() {
        std::string w;
        if (!(in >> w)) throw MeshError("MalformedHeader", "unexpected end of file");
        return w;
    }
    long integer() {
        long v;
        if (!(in >> v)) throw MeshError("MalformedHeader", "expected an integer");
        return v;
    }
    double real() {
        double v;
        if (!(in >> v)) throw MeshError("MalformedHeader", "expected a number");
        return v;
    }
};

struct PhysGroup {
    int dim = -1;
    std::string name;
};

bool parse_bnd_name(const std::string& name, BoundaryTag& tag) {
    if (name == "bnd:inlet") { tag = BoundaryTag::Inlet; return true; }
    if (name == "bnd:outlet") { tag = BoundaryTag::Outlet; return true; }
    if (name == "bnd:wall") { tag = BoundaryTag::Wall; return true; }
    if (name == "bnd:exit") { tag = BoundaryTag::Exit; return true; }
    return false;
}

} // namespace

Mesh parse(const std::string& content) {
    Tok tk(content);
    std::string w = tk.word();
    if (w != "$MeshFormat") throw MeshError("MalformedHeader", "missing $MeshFormat");
    std::string version = tk.word();
    long file_type = tk.integer();
    tk.integer(); // data size
    if (file_type != 0) throw MeshError("UnsupportedVersion", "binary MSH is not supported");
    const bool v22 = (version == "2.2");
    const bool v41 = (version == "4.1");
    if (!v22 && !v41)
        throw MeshError("UnsupportedVersion", "MSH version " + version + " (only 2.2 / 4.1 ASCII)");
    if (tk.word() != "$EndMeshFormat") throw MeshError("MalformedHeader", "missing $EndMeshFormat");

    std::map<long, PhysGroup> phys;                 // physical id -> group
    std::map<long, long> curve_phys, surface_phys;  // 4.1 entity -> physical id
    std::unordered_map<long, index_t> node_index;
    std::vector<double> xy;
    std::vector<index_t> tris;
    std::vector<Mesh::TaggedSegment> segs;
    std::vector<long> tri_phys;     // physical id per triangle (-1 = none)
    long declared_nodes = -1, declared_elems = -1;

    auto group_of = [&](long physical_id) -> const PhysGroup& {
        auto it = phys.find(physical_id);
        if (it == phys.end())
            throw MeshError("UnknownPhysicalGroup",
                            "physical id " + std::to_string(physical_id) + " has no name");
        return it->second;
    };

    while (true) {
        std::string section;
        if (!(tk.in >> section)) break;
        if (section == "$PhysicalNames") {
            long n = tk.integer();
            for (long i = 0; i < n; ++i) {
                int dim = static_cast<int>(tk.integer());
                long id = tk.integer();
                std::string name = tk.word();
                // names are quoted and may contain no spaces in our convention
                if (name.size() >= 2 && name.front() == '"' && name.back() == '"')
                    name = name.substr(1, name.size() - 2);
                BoundaryTag tag;
                bool ok = (dim == 1 && parse_bnd_name(name, tag)) ||
                          (dim == 2 && name.rfind("zone:", 0) == 0);
                if (!ok)
                    throw MeshError("UnknownPhysicalGroup",
                                    "group \"" + name + "\" (dim " + std::to_string(dim) +
                                        ") does not follow bnd:*/zone:* convention");
                phys[id] = {dim, name};
            }
            if (tk.word() != "$EndPhysicalNames")
                throw MeshError("MalformedHeader", "missing $EndPhysicalNames");
        } else if (section == "$Entities" && v41) {
            long npt = tk.integer(), ncv = tk.integer(), nsf = tk.integer(), nvol = tk.integer();
            for (long i = 0; i < npt; ++i) {
                tk.integer();
                tk.real(); tk.real(); tk.real();
                long nph = tk.integer();
                for (long j = 0; j < nph; ++j) tk.integer();
            }
            for (long i = 0; i < ncv; ++i) {
                long tag = tk.integer();
                for (int j = 0; j < 6; ++j) tk.real();
                long nph = tk.integer();
                for (long j = 0; j < nph; ++j) {
                    long p = tk.integer();
                    if (j == 0) curve_phys[tag] = p;
                }
                long nb = tk.integer();
                for (long j = 0; j < nb; ++j) tk.integer();
            }
            for (long i = 0; i < nsf; ++i) {
                long tag = tk.integer();
                for (int j = 0; j < 6; ++j) tk.real();
                long nph = tk.integer();
                for (long j = 0; j < nph; ++j) {
                    long p = tk.integer();
                    if (j == 0) surface_phys[tag] = p;
                }
                long nb = tk.integer();
                for (long j = 0; j < nb; ++j) tk.integer();
            }
            if (nvol != 0) throw MeshError("UnsupportedVersion", "3D entities in a 2D mesh");
            if (tk.word() != "$EndEntities") throw MeshError("MalformedHeader", "missing $EndEntities");
        } else if (section == "$Nodes") {
            if (v22) {
                long n = tk.integer();
                declared_nodes = n;
                xy.reserve(2 * n);
                for (long i = 0; i < n; ++i) {
                    long id = tk.integer();
                    double px = tk.real(), py = tk.real();
                    tk.real(); // z ignored
                    node_index[id] = static_cast<index_t>(xy.size() / 2);
                    xy.push_back(px);
                    xy.push_back(py);
                }
            } else {
                long nblocks = tk.integer(), n = tk.integer();
                tk.integer(); tk.integer(); // min/max tag
                declared_nodes = n;
                xy.reserve(2 * n);
                for (long b = 0; b < nblocks; ++b) {
                    tk.integer(); tk.integer(); // dim, entity tag
                    long parametric = tk.integer();
                    long nb = tk.integer();
                    if (parametric != 0)
                        throw MeshError("UnsupportedVersion", "parametric nodes unsupported");
                    std::vector<long> ids(nb);
                    for (long i = 0; i < nb; ++i) ids[i] = tk.integer();
                    for (long i = 0; i < nb; ++i) {
                        double px = tk.real(), py = tk.real();
                        tk.real();
                        node_index[ids[i]] = static_cast<index_t>(xy.size() / 2);
                        xy.push_back(px);
                        xy.push_back(py);
                    }
                }
            }
            if (tk.word() != "$EndNodes") throw MeshError("MalformedHeader", "missing $EndNodes");
        } else if (section == "$Elements") {
            auto node_of = [&](long id) -> index_t {
                auto it = node_index.find(id);
                if (it == node_index.end())
                    throw MeshError("DanglingNodeReference",
                                    "element references node " + std::to_string(id));
                return it->second;
            };
            if (v22) {
                long n = tk.integer();
                declared_elems = n;
                for (long i = 0; i < n; ++i) {
                    tk.integer(); // element id
                    long type = tk.integer();
                    long ntags = tk.integer();
                    long phys_id = -1;
                    for (long j = 0; j < ntags; ++j) {
                        long t = tk.integer();
                        if (j == 0) phys_id = t;
                    }
                    if (type == 15) {
                        tk.integer();
                    } else if (type == 1) {
                        index_t a = node_of(tk.integer());
                        index_t b = node_of(tk.integer());
                        if (phys_id < 0)
                            throw MeshError("UntaggedBoundaryEdge", "line element without physical tag");
                        const auto& g = group_of(phys_id);
                        BoundaryTag tag;
                        if (g.dim != 1 || !parse_bnd_name(g.name, tag))
                            throw MeshError("UnknownPhysicalGroup",
                                            "line element in non-bnd group \"" + g.name + "\"");
                        segs.push_back({a, b, tag});
                    } else if (type == 2) {
                        for (int k = 0; k < 3; ++k) tris.push_back(node_of(tk.integer()));
                        tri_phys.push_back(phys_id);
                    } else {
                        throw MeshError("UnsupportedVersion",
                                        "element type " + std::to_string(type) + " unsupported");
                    }
                }
            } else {
                long nblocks = tk.integer(), n = tk.integer();
                tk.integer(); tk.integer();
                declared_elems = n;
                for (long b = 0; b < nblocks; ++b) {
                    long dim = tk.integer();
                    long etag = tk.integer();
                    long type = tk.integer();
                    long nb = tk.integer();
                    for (long i = 0; i < nb; ++i) {
                        tk.integer(); // element id
                        if (type == 15) {
                            tk.integer();
                        } else if (type == 1 && dim == 1) {
                            index_t a = node_of(tk.integer());
                            index_t bn = node_of(tk.integer());
                            auto cp = curve_phys.find(etag);
                            if (cp == curve_phys.end())
                                throw MeshError("UntaggedBoundaryEdge",
                                                "curve entity without physical group");
                            const auto& g = group_of(cp->second);
                            BoundaryTag tag;
                            if (g.dim != 1 || !parse_bnd_name(g.name, tag))
                                throw MeshError("UnknownPhysicalGroup",
                                                "curve in non-bnd group \"" + g.name + "\"");
                            segs.push_back({a, bn, tag});
                        } else if (type == 2 && dim == 2) {
                            for (int k = 0; k < 3; ++k) tris.push_back(node_of(tk.integer()));
                            auto sp = surface_phys.find(etag);
                            tri_phys.push_back(sp == surface_phys.end() ? -1 : sp->second);
                        } else {
                            throw MeshError("UnsupportedVersion",
                                            "element type " + std::to_string(type) + " unsupported");
                        }
                    }
                }
            }
            if (tk.word() != "$EndElements") throw MeshError("MalformedHeader", "missing $EndElements");
        } else if (!section.empty() && section[0] == '$') {
            // skip unknown section
            std::string end = "$End" + section.substr(1);
            std::string t;
            while (tk.in >> t)
                if (t == end) break;
        } else {
            throw MeshError("MalformedHeader", "unexpected token \"" + section + "\"");
        }
    }

    if (declared_nodes != static_cast<long>(xy.size() / 2))
        throw MeshError("MalformedHeader", "node count does not match header declaration");
    if (tris.empty()) throw MeshError("MalformedHeader", "mesh has no triangles");
    (void)declared_elems;

    // Zone ids from dim-2 physical groups, ordered by physical id; triangles
    // without a zone group fall into an implicit "rural" zone.
    std::vector<std::string> zone_names;
    std::map<long, int> phys_to_zone;
    bool have_untagged = false;
    for (long p : tri_phys)
        if (p < 0) have_untagged = true;
    if (have_untagged) zone_names.push_back("rural");
    for (const auto& [id, g] : phys.empty() ? std::map<long, PhysGroup>{} : phys) {
        if (g.dim != 2) continue;
        phys_to_zone[id] = static_cast<int>(zone_names.size());
        zone_names.push_back(g.name.substr(5)); // strip "zone:"
    }
    if (zone_names.empty()) zone_names.push_back("rural");
    std::vector<int> tri_zone(tris.size() / 3, 0);
    for (std::size_t e = 0; e < tri_zone.size(); ++e) {
        long p = tri_phys[e];
        if (p < 0) continue;
        auto it = phys_to_zone.find(p);
        if (it == phys_to_zone.end()) {
            const auto& g = group_of(p); // throws UnknownPhysicalGroup if unnamed
            throw MeshError("UnknownPhysicalGroup", "triangle in non-zone group \"" + g.name + "\"");
        }
        tri_zone[e] = it->second;
    }

    return Mesh::build(std::move(xy), std::move(tris), std::move(segs), std::move(tri_zone),
                       std::move(zone_names));
}

Mesh parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MeshError("IoFailure", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string write(const Mesh& mesh) {
    std::ostringstream out;
    out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";

    // physical ids: boundary tags 1..4 (as used), zones from 11 upward
    bool tag_used[4] = {false, false, false, false};
    for (const auto& be : mesh.boundary_edges()) tag_used[static_cast<int>(be.tag)] = true;
    int n_phys = 0;
    for (bool u : tag_used) n_phys += u ? 1 : 0;
    n_phys += static_cast<int>(mesh.zone_names().size());
    out << "$PhysicalNames\n" << n_phys << "\n";
    for (int t = 0; t < 4; ++t)
        if (tag_used[t])
            out << "1 " << (t + 1) << " \"bnd:" << to_string(static_cast<BoundaryTag>(t)) << "\"\n";
    for (std::size_t z = 0; z < mesh.zone_names().size(); ++z)
        out << "2 " << (11 + z) << " \"zone:" << mesh.zone_names()[z] << "\"\n";
    out << "$EndPhysicalNames\n";

    char buf[64];
    out << "$Nodes\n" << mesh.node_count() << "\n";
    for (index_t i = 0; i < mesh.node_count(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g", mesh.x(i), mesh.y(i));
        out << (i + 1) << " " << buf << " 0\n";
    }
    out << "$EndNodes\n";

    out << "$Elements\n" << (mesh.boundary_edges().size() + mesh.triangle_count()) << "\n";
    long id = 1;
    for (const auto& be : mesh.boundary_edges()) {
        int p = static_cast<int>(be.tag) + 1;
        out << id++ << " 1 2 " << p << " " << p << " " << (be.a + 1) << " " << (be.b + 1) << "\n";
    }
    for (index_t e = 0; e < mesh.triangle_count(); ++e) {
        int p = 11 + mesh.tri_zone()[e];
        out << id++ << " 2 2 " << p << " " << p << " " << (mesh.tri(e, 0) + 1) << " "
            << (mesh.tri(e, 1) + 1) << " " << (mesh.tri(e, 2) + 1) << "\n";
    }
    out << "$EndElements\n";
    return out.str();
}

void write_file(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw MeshError("IoFailure", "cannot write " + path);
    out << write(mesh);
}

} // namespace msh
} // namespace pcity
