#include "phi4/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace phi4 {

std::string to_string(Shape s)
{
    switch (s) {
    case Shape::box: return "box";
    case Shape::rectangle: return "rectangle";
    case Shape::strip_box: return "strip_box";
    case Shape::slab_box: return "slab_box";
    case Shape::half_space_box: return "half_space_box";
    case Shape::block: return "block";
    }
    return "?";
}

Shape shape_from_string(const std::string& s)
{
    for (Shape k : {Shape::box, Shape::rectangle, Shape::strip_box, Shape::slab_box, Shape::half_space_box,
                    Shape::block})
        if (to_string(k) == s) return k;
    throw std::invalid_argument("unknown shape '" + s + "'");
}

namespace {

void extents(const ShapeSpec& s, std::vector<int>& lo, std::vector<int>& hi)
{
    const int d = s.d;
    lo.assign(d, 0);
    hi.assign(d, 0);
    switch (s.shape) {
    case Shape::box:
        if (!s.center.empty() && static_cast<int>(s.center.size()) != d)
            throw std::invalid_argument("box centre has wrong dimension");
        for (int i = 0; i < d; ++i) {
            int c = s.center.empty() ? 0 : s.center[i];
            lo[i] = c - s.n;
            hi[i] = c + s.n;
        }
        break;
    case Shape::rectangle:
    case Shape::strip_box:
        for (int i = 0; i < d - 1; ++i) { lo[i] = -s.n; hi[i] = s.n; }
        lo[d - 1] = -s.m;
        hi[d - 1] = s.m;
        break;
    case Shape::slab_box:
        for (int i = 0; i < d - 2; ++i) { lo[i] = -s.n; hi[i] = s.n; }
        for (int i = d - 2; i < d; ++i) { lo[i] = -s.m; hi[i] = s.m; }
        break;
    case Shape::half_space_box:
        for (int i = 0; i < d - 1; ++i) { lo[i] = -s.n; hi[i] = s.n; }
        lo[d - 1] = 0;
        hi[d - 1] = 2 * s.n;
        break;
    case Shape::block:
        if (s.n < 1 || s.m < 1) throw std::invalid_argument("block sides must be positive");
        for (int i = 0; i < d - 1; ++i) hi[i] = s.n - 1;
        hi[d - 1] = s.m - 1;
        break;
    }
}

}  // namespace

Region::Region(const ShapeSpec& spec) : spec_(spec)
{
    const int d = spec.d;
    if (d < 2) throw std::invalid_argument("dimension must be at least 2");
    if (spec.n < 0 || spec.m < 0) throw std::invalid_argument("sizes must be nonnegative");
    extents(spec, lo_, hi_);

    // Lookup table over the bounding box of the closed vertex set.
    stride_.assign(d, 1);
    std::size_t total = 1;
    for (int i = d - 1; i >= 0; --i) {
        stride_[i] = total;
        total *= static_cast<std::size_t>(hi_[i] - lo_[i] + 3);
    }
    table_.assign(total, -1);

    std::vector<int> x(d);
    auto inside = [&](const std::vector<int>& y) {
        for (int i = 0; i < d; ++i)
            if (y[i] < lo_[i] || y[i] > hi_[i]) return false;
        return true;
    };

    // Interior in lexicographic order.
    for (int i = 0; i < d; ++i) x[i] = lo_[i];
    for (;;) {
        table_[lookup(x)] = static_cast<std::int32_t>(n_inner_++);
        coords_.insert(coords_.end(), x.begin(), x.end());
        int i = d - 1;
        while (i >= 0 && x[i] == hi_[i]) { x[i] = lo_[i]; --i; }
        if (i < 0) break;
        ++x[i];
    }

    // Exterior: bounding box shell points adjacent to the interior, lexicographic.
    std::vector<int> y(d);
    for (int i = 0; i < d; ++i) x[i] = lo_[i] - 1;
    n_total_ = n_inner_;
    for (;;) {
        if (!inside(x)) {
            bool adj = false;
            for (int k = 0; k < d && !adj; ++k)
                for (int s : {-1, 1}) {
                    y = x;
                    y[k] += s;
                    if (inside(y)) { adj = true; break; }
                }
            if (adj) {
                table_[lookup(x)] = static_cast<std::int32_t>(n_total_++);
                coords_.insert(coords_.end(), x.begin(), x.end());
            }
        }
        int i = d - 1;
        while (i >= 0 && x[i] == hi_[i] + 1) { x[i] = lo_[i] - 1; --i; }
        if (i < 0) break;
        ++x[i];
    }

    std::vector<std::vector<Neighbour>> adj(n_inner_);
    ext_deg_.assign(n_inner_, 0);
    for (std::size_t v = 0; v < n_inner_; ++v) {
        auto c = coord(v);
        for (int k = 0; k < d; ++k) {
            y.assign(c.begin(), c.end());
            y[k] += 1;
            if (inside(y)) {
                auto w = static_cast<std::uint32_t>(table_[lookup(y)]);
                auto e = static_cast<std::uint32_t>(edges_.size());
                edges_.push_back({static_cast<std::uint32_t>(v), w});
                adj[v].push_back({w, e});
                adj[w].push_back({static_cast<std::uint32_t>(v), e});
            }
        }
    }
    for (std::size_t v = 0; v < n_inner_; ++v) {
        auto c = coord(v);
        for (int k = 0; k < d; ++k)
            for (int s : {-1, 1}) {
                y.assign(c.begin(), c.end());
                y[k] += s;
                if (!inside(y)) {
                    boundary_edges_.push_back({static_cast<std::uint32_t>(v),
                                               static_cast<std::uint32_t>(table_[lookup(y)])});
                    ++ext_deg_[v];
                }
            }
    }
    nbr_start_.assign(n_inner_ + 1, 0);
    for (std::size_t v = 0; v < n_inner_; ++v) {
        std::sort(adj[v].begin(), adj[v].end(),
                  [](const Neighbour& p, const Neighbour& q) { return p.vertex < q.vertex; });
        nbr_start_[v + 1] = nbr_start_[v] + static_cast<std::uint32_t>(adj[v].size());
        nbr_.insert(nbr_.end(), adj[v].begin(), adj[v].end());
    }
}

std::size_t Region::lookup(std::span<const int> x) const
{
    std::size_t idx = 0;
    for (int i = 0; i < spec_.d; ++i) idx += static_cast<std::size_t>(x[i] - lo_[i] + 1) * stride_[i];
    return idx;
}

std::optional<std::uint32_t> Region::index(std::span<const int> x) const
{
    if (static_cast<int>(x.size()) != spec_.d) return std::nullopt;
    for (int i = 0; i < spec_.d; ++i)
        if (x[i] < lo_[i] - 1 || x[i] > hi_[i] + 1) return std::nullopt;
    auto t = table_[lookup(x)];
    if (t < 0) return std::nullopt;
    return static_cast<std::uint32_t>(t);
}

bool Region::contains(std::span<const int> x) const
{
    auto i = index(x);
    return i && *i < n_inner_;
}

int Region::linf(std::size_t v, std::span<const int> centre) const
{
    auto c = coord(v);
    int m = 0;
    for (int i = 0; i < spec_.d; ++i) m = std::max(m, std::abs(c[i] - (centre.empty() ? 0 : centre[i])));
    return m;
}

BoundarySets boundary_sets(const Region& r)
{
    BoundarySets s;
    for (std::size_t v = 0; v < r.size(); ++v)
        if (r.exterior_degree(v) > 0) s.inner.push_back(static_cast<std::uint32_t>(v));
    for (std::size_t v = r.size(); v < r.closed_size(); ++v) s.exterior.push_back(static_cast<std::uint32_t>(v));
    for (std::size_t v = 0; v < r.closed_size(); ++v) s.closed.push_back(static_cast<std::uint32_t>(v));
    s.closed_edges = r.closed_edge_count();
    return s;
}

int log_width(int L)
{
    if (L < 1) return 1;
    return std::max(1, static_cast<int>(std::ceil(std::log(static_cast<double>(L)) - 1e-12)));
}

double max_boundary_value(const Region& r, double c0)
{
    return c0 * std::pow(std::max(1.0, std::log(static_cast<double>(r.size()))), 0.25);
}

std::string to_string(FieldKind k)
{
    switch (k) {
    case FieldKind::zero: return "zero";
    case FieldKind::constant_on_set: return "constant";
    case FieldKind::plus_max: return "plus_max";
    case FieldKind::thick_plus: return "thick_plus";
    case FieldKind::dobrushin_pm: return "dobrushin_pm";
    case FieldKind::dobrushin_pp: return "dobrushin_pp";
    case FieldKind::weak_plus: return "weak_plus";
    }
    return "?";
}

FieldKind field_kind_from_string(const std::string& s)
{
    for (FieldKind k : {FieldKind::zero, FieldKind::constant_on_set, FieldKind::plus_max, FieldKind::thick_plus,
                        FieldKind::dobrushin_pm, FieldKind::dobrushin_pp, FieldKind::weak_plus})
        if (to_string(k) == s) return k;
    throw std::invalid_argument("unknown field kind '" + s + "'");
}

std::vector<int> dobrushin_sides(const Region& r)
{
    const auto& s = r.spec();
    if (s.shape != Shape::rectangle && s.shape != Shape::strip_box)
        throw std::invalid_argument("Dobrushin fields need a rectangle or strip box");
    const int d = r.dim();
    const int L = s.n;
    const int w = log_width(L);
    std::vector<int> side(r.size(), 0);
    for (std::size_t v = 0; v < r.size(); ++v) {
        auto c = r.coord(v);
        bool thick = false;
        for (int i = 0; i < d - 1; ++i)
            if (std::abs(c[i]) >= L - w) thick = true;
        if (thick) side[v] = c[d - 1] >= 1 ? 1 : -1;
    }
    return side;
}

BoundaryField make_boundary_field(FieldKind kind, const Region& r, const FieldParams& p)
{
    BoundaryField f{kind, std::vector<double>(r.size(), 0.0)};
    const auto& s = r.spec();
    switch (kind) {
    case FieldKind::zero:
        break;
    case FieldKind::constant_on_set:
        for (std::size_t v = 0; v < r.size(); ++v)
            if (p.set == FieldSet::all || r.exterior_degree(v) > 0) f.h[v] = p.value;
        break;
    case FieldKind::plus_max: {
        double M = max_boundary_value(r, p.c0);
        for (std::size_t v = 0; v < r.size(); ++v) f.h[v] = M * r.exterior_degree(v);
        break;
    }
    case FieldKind::thick_plus: {
        if (s.shape != Shape::box) throw std::invalid_argument("thick-plus field needs a box");
        const int L = s.n;
        const int w = log_width(L);
        if (w > L) throw std::invalid_argument("thick-plus width exceeds L");
        for (std::size_t v = 0; v < r.size(); ++v)
            if (r.linf(v, s.center) > L - w) f.h[v] = 1.0;
        break;
    }
    case FieldKind::dobrushin_pm:
    case FieldKind::dobrushin_pp: {
        auto side = dobrushin_sides(r);
        for (std::size_t v = 0; v < r.size(); ++v) {
            if (side[v] == 0) continue;
            f.h[v] = (side[v] > 0 || kind == FieldKind::dobrushin_pp) ? 1.0 : -1.0;
        }
        break;
    }
    case FieldKind::weak_plus: {
        if (s.shape != Shape::box) throw std::invalid_argument("weak-plus field needs a box");
        double M = max_boundary_value(r, p.c0);
        double scale = std::pow(std::max(1, s.n), -0.5 * (r.dim() - 1));
        for (std::size_t v = 0; v < r.size(); ++v) {
            int k = r.exterior_degree(v);
            f.h[v] = std::min(M * k, scale * k);
        }
        break;
    }
    }
    return f;
}

}  // namespace phi4
