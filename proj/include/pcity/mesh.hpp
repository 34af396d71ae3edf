#pragma once

#include <array>
#include <string>
#include <vector>

#include "pcity/fields.hpp"

namespace pcity {

enum class BoundaryTag { Inlet, Outlet, Wall, Exit };

const char* to_string(BoundaryTag t);

struct BoundaryEdge {
    index_t a, b;      // node indices, ordered as in the owning triangle
    BoundaryTag tag;
    double nx, ny;     // outward unit normal
    double length;     // [km]
};

/// Immutable 2D triangulation with P1 geometry precomputed at construction:
/// triangle areas [km²], constant basis gradients [1/km], tagged boundary
/// edges with outward unit normals, per-node boundary ownership
/// (wall > inlet > outlet > exit at shared corners) and the node-adjacency
/// sparsity pattern shared by every assembled operator.
class Mesh {
public:
    struct TaggedSegment {
        index_t a, b;
        BoundaryTag tag;
    };

    /// Validates connectivity, fixes clockwise triangles by swapping two
    /// indices, and precomputes all derived geometry. Throws MeshError
    /// (DanglingNodeReference, NonPositiveArea, UntaggedBoundaryEdge, ...).
    static Mesh build(std::vector<double> node_xy,
                      std::vector<index_t> tri_nodes,
                      std::vector<TaggedSegment> boundary_segments,
                      std::vector<int> tri_zone = {},
                      std::vector<std::string> zone_names = {});

    index_t node_count() const { return static_cast<index_t>(xy_.size() / 2); }
    index_t triangle_count() const { return static_cast<index_t>(tris_.size() / 3); }

    double x(index_t i) const { return xy_[2 * static_cast<std::size_t>(i)]; }
    double y(index_t i) const { return xy_[2 * static_cast<std::size_t>(i) + 1]; }
    index_t tri(index_t e, int k) const { return tris_[3 * static_cast<std::size_t>(e) + k]; }

    double area(index_t e) const { return areas_[static_cast<std::size_t>(e)]; }
    double total_area() const { return total_area_; }
    /// Gradient of local P1 basis k on triangle e, constant on the triangle.
    double grad_x(index_t e, int k) const { return grads_[6 * static_cast<std::size_t>(e) + 2 * k]; }
    double grad_y(index_t e, int k) const { return grads_[6 * static_cast<std::size_t>(e) + 2 * k + 1]; }

    double centroid_x(index_t e) const { return (x(tri(e, 0)) + x(tri(e, 1)) + x(tri(e, 2))) / 3.0; }
    double centroid_y(index_t e) const { return (y(tri(e, 0)) + y(tri(e, 1)) + y(tri(e, 2))) / 3.0; }
    /// Longest edge of triangle e [km].
    double tri_diameter(index_t e) const;

    double min_edge_length() const { return min_edge_; }
    double bbox_diameter() const;

    const std::vector<BoundaryEdge>& boundary_edges() const { return bedges_; }
    /// Nodes owned by a tag (a corner shared with a wall belongs to the wall).
    const std::vector<index_t>& nodes_of(BoundaryTag t) const;
    /// Unit outward normal at each wall node: length-weighted average of the
    /// adjacent wall-edge normals, renormalized. Aligned with nodes_of(Wall).
    const std::vector<std::array<double, 2>>& wall_node_normals() const { return wall_normals_; }

    /// Zone id per triangle as read from the mesh source (ZoneMap may rebuild).
    const std::vector<int>& tri_zone() const { return tri_zone_; }
    const std::vector<std::string>& zone_names() const { return zone_names_; }

    /// CSR node-adjacency pattern (self included, columns strictly increasing).
    const std::vector<index_t>& pattern_row_offsets() const { return pat_off_; }
    const std::vector<index_t>& pattern_cols() const { return pat_cols_; }

    /// Triangles incident to each node (CSR layout).
    const std::vector<index_t>& node_tri_offsets() const { return ntri_off_; }
    const std::vector<index_t>& node_tris() const { return ntri_; }

private:
    Mesh() = default;

    std::vector<double> xy_;
    std::vector<index_t> tris_;
    std::vector<double> areas_;
    std::vector<double> grads_;
    std::vector<BoundaryEdge> bedges_;
    std::vector<index_t> tag_nodes_[4];
    std::vector<std::array<double, 2>> wall_normals_;
    std::vector<int> tri_zone_;
    std::vector<std::string> zone_names_;
    std::vector<index_t> pat_off_, pat_cols_;
    std::vector<index_t> ntri_off_, ntri_;
    double total_area_ = 0.0;
    double min_edge_ = 0.0;
    double bbox_[4] = {0, 0, 0, 0}; // xmin xmax ymin ymax
};

namespace msh {

/// Parse Gmsh MSH 2.2 or 4.1, ASCII only. Physical-group naming convention:
/// curves `bnd:inlet` | `bnd:outlet` | `bnd:wall` | `bnd:exit`, surfaces
/// `zone:<name>`. Unknown groups are rejected (UnknownPhysicalGroup); binary
/// files are rejected (UnsupportedVersion).
Mesh parse(const std::string& content);
Mesh parse_file(const std::string& path);

/// Serialize as MSH 2.2 ASCII with the same naming convention; coordinates
/// printed with %.17g so parse(write(m)) reproduces the mesh exactly.
std::string write(const Mesh& mesh);
void write_file(const Mesh& mesh, const std::string& path);

} // namespace msh
} // namespace pcity
