#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace phi4 {

enum class Shape { box, rectangle, strip_box, slab_box, half_space_box, block };

std::string to_string(Shape s);
Shape shape_from_string(const std::string& s);

// Sizes by shape:
//   box            n = radius, center (empty means origin)
//   rectangle      n = L, m = M: {-L..L}^{d-1} x {-M..M}
//   strip_box      n = L, m = M: window of height 2M+1 cut from the strip {-L..L}^{d-1} x Z
//   slab_box       n = L, m = N: {-L..L}^{d-2} x {-N..N}^2
//   half_space_box n = L: the box of radius L centred at L e_d
//   block          n, m >= 1: {0..n-1}^{d-1} x {0..m-1}
struct ShapeSpec {
    Shape shape = Shape::box;
    int d = 2;
    int n = 0;
    int m = 0;
    std::vector<int> center;

    bool operator==(const ShapeSpec&) const = default;
};

struct Edge {
    std::uint32_t u;
    std::uint32_t v;
    bool operator==(const Edge&) const = default;
};

struct Neighbour {
    std::uint32_t vertex;
    std::uint32_t edge;
};

// Vertices of the closed set are indexed [0, size()) for Lambda and
// [size(), size() + exterior_size()) for the exterior boundary, each part
// in lexicographic coordinate order.
class Region {
public:
    explicit Region(const ShapeSpec& spec);

    const ShapeSpec& spec() const { return spec_; }
    int dim() const { return spec_.d; }
    int lo(int axis) const { return lo_[axis]; }
    int hi(int axis) const { return hi_[axis]; }

    std::size_t size() const { return n_inner_; }
    std::size_t exterior_size() const { return n_total_ - n_inner_; }
    std::size_t closed_size() const { return n_total_; }

    std::span<const int> coord(std::size_t v) const {
        return {coords_.data() + v * spec_.d, static_cast<std::size_t>(spec_.d)};
    }
    std::optional<std::uint32_t> index(std::span<const int> x) const;
    bool contains(std::span<const int> x) const;

    const std::vector<Edge>& edges() const { return edges_; }
    // Edges of the closed edge set with one endpoint outside; v is exterior.
    const std::vector<Edge>& boundary_edges() const { return boundary_edges_; }
    std::size_t closed_edge_count() const { return edges_.size() + boundary_edges_.size(); }

    // Interior neighbours of an interior vertex.
    std::span<const Neighbour> neighbours(std::size_t v) const {
        return {nbr_.data() + nbr_start_[v], nbr_.data() + nbr_start_[v + 1]};
    }
    int exterior_degree(std::size_t v) const { return ext_deg_[v]; }

    int linf(std::size_t v, std::span<const int> centre = {}) const;

    bool operator==(const Region& o) const {
        return spec_ == o.spec_ && coords_ == o.coords_ && edges_ == o.edges_ &&
               boundary_edges_ == o.boundary_edges_;
    }

private:
    std::size_t lookup(std::span<const int> x) const;

    ShapeSpec spec_;
    std::vector<int> lo_, hi_;
    std::size_t n_inner_ = 0, n_total_ = 0;
    std::vector<int> coords_;
    std::vector<std::int32_t> table_;
    std::vector<std::size_t> stride_;
    std::vector<Edge> edges_, boundary_edges_;
    std::vector<std::uint32_t> nbr_start_;
    std::vector<Neighbour> nbr_;
    std::vector<int> ext_deg_;
};

struct BoundarySets {
    std::vector<std::uint32_t> inner;     // vertex boundary of Lambda
    std::vector<std::uint32_t> exterior;  // exterior boundary
    std::vector<std::uint32_t> closed;    // Lambda followed by the exterior
    std::size_t closed_edges = 0;         // internal edges then boundary edges
};

BoundarySets boundary_sets(const Region& r);

// Thickness used for "log L" layers: max(1, ceil(ln L)).
int log_width(int L);

// C0 (1 v log|Lambda|)^{1/4}
double max_boundary_value(const Region& r, double c0 = 1.0);

enum class FieldKind { zero, constant_on_set, plus_max, thick_plus, dobrushin_pm, dobrushin_pp, weak_plus };
enum class FieldSet { boundary, all };

std::string to_string(FieldKind k);
FieldKind field_kind_from_string(const std::string& s);

struct FieldParams {
    double value = 1.0;
    FieldSet set = FieldSet::boundary;
    double c0 = 1.0;
};

struct BoundaryField {
    FieldKind kind = FieldKind::zero;
    std::vector<double> h;
};

BoundaryField make_boundary_field(FieldKind kind, const Region& r, const FieldParams& p = {});

// Side of each vertex in the thick lateral boundary of R(L,M):
// +1 top, -1 bottom, 0 elsewhere.
std::vector<int> dobrushin_sides(const Region& r);

}  // namespace phi4
