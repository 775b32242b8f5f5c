#include "phi4/events.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "phi4/union_find.hpp"

namespace phi4 {

std::vector<std::uint32_t> restricted_labels(const Region& r, const std::vector<std::uint8_t>& omega,
                                             const std::vector<std::uint8_t>& inside)
{
    const auto& E = r.edges();
    if (omega.size() < E.size()) throw std::invalid_argument("omega shorter than the internal edge set");
    UnionFind uf(r.size());
    for (std::size_t e = 0; e < E.size(); ++e)
        if (omega[e] && inside[E[e].u] && inside[E[e].v]) uf.unite(E[e].u, E[e].v);
    std::vector<std::uint32_t> lab(r.size(), no_label);
    for (std::uint32_t v = 0; v < r.size(); ++v)
        if (inside[v]) lab[v] = uf.find(v);
    return lab;
}

namespace {

bool touches_both(const std::vector<std::uint32_t>& lab, const std::vector<std::uint8_t>& face_a,
                  const std::vector<std::uint8_t>& face_b, std::vector<std::uint32_t>* which)
{
    std::vector<std::uint8_t> seen(lab.size(), 0);
    for (std::size_t v = 0; v < lab.size(); ++v)
        if (face_a[v] && lab[v] != no_label) seen[lab[v]] = 1;
    bool any = false;
    for (std::size_t v = 0; v < lab.size(); ++v)
        if (face_b[v] && lab[v] != no_label && seen[lab[v]] == 1) {
            seen[lab[v]] = 2;
            any = true;
            if (which) which->push_back(lab[v]);
        }
    return any;
}

void require_box_radius(const Region& r, int R)
{
    for (int i = 0; i < r.dim(); ++i)
        if (r.lo(i) > -R || r.hi(i) < R) throw std::invalid_argument("region does not contain the requested box");
}

}  // namespace

bool crossing(const Region& r, const std::vector<std::uint8_t>& omega, int m, int n, int axis)
{
    if (axis < 0 || axis >= r.dim()) throw std::invalid_argument("crossing axis out of range");
    std::vector<std::uint8_t> in(r.size(), 0), left(r.size(), 0), right(r.size(), 0);
    for (std::size_t v = 0; v < r.size(); ++v) {
        auto c = r.coord(v);
        bool ok = true;
        for (int i = 0; i < r.dim(); ++i) {
            int lim = i == axis ? m : n;
            if (std::abs(c[i]) > lim) ok = false;
        }
        if (!ok) continue;
        in[v] = 1;
        left[v] = c[axis] == -m;
        right[v] = c[axis] == m;
    }
    return touches_both(restricted_labels(r, omega, in), left, right, nullptr);
}

AnnulusClusters annulus_clusters(const Region& r, const std::vector<std::uint8_t>& omega, int r_in, int r_out)
{
    require_box_radius(r, r_out);
    std::vector<std::uint8_t> in(r.size(), 0), inner(r.size(), 0), outer(r.size(), 0);
    for (std::size_t v = 0; v < r.size(); ++v) {
        int l = r.linf(v);
        if (l <= r_in || l > r_out) continue;
        in[v] = 1;
        inner[v] = l == r_in + 1;
        outer[v] = l == r_out;
    }
    AnnulusClusters a;
    a.label = restricted_labels(r, omega, in);
    touches_both(a.label, inner, outer, &a.crossing);
    return a;
}

namespace {

// Every cluster crossing the small annulus maps into one cluster of `big`.
bool single_image(const AnnulusClusters& small, const std::vector<std::uint32_t>& big)
{
    std::uint32_t target = no_label;
    for (std::size_t v = 0; v < small.label.size(); ++v) {
        if (small.label[v] == no_label) continue;
        if (!std::binary_search(small.crossing.begin(), small.crossing.end(), small.label[v])) continue;
        if (big[v] == no_label) return false;
        if (target == no_label) target = big[v];
        else if (big[v] != target) return false;
    }
    return true;
}

AnnulusClusters sorted(AnnulusClusters a)
{
    std::sort(a.crossing.begin(), a.crossing.end());
    return a;
}

}  // namespace

bool local_uniqueness(const Region& r, const std::vector<std::uint8_t>& omega, int L)
{
    if (L < 1) throw std::invalid_argument("local uniqueness needs L >= 1");
    auto big = annulus_clusters(r, omega, L, 8 * L);
    if (big.crossing.empty()) return false;
    auto mid = sorted(annulus_clusters(r, omega, 2 * L, 4 * L));
    return single_image(mid, big.label);
}

bool unique_sprinkled(const Region& r, const std::vector<std::uint8_t>& omega, const std::vector<std::uint8_t>& gamma,
                      int L)
{
    if (L < 8 || L % 8 != 0) throw std::invalid_argument("Unique(L) needs L divisible by 8");
    auto big = annulus_clusters(r, omega, L / 8, L);
    if (big.crossing.empty()) return false;
    auto mid = sorted(annulus_clusters(r, omega, L / 4, L / 2));
    std::vector<std::uint8_t> both(omega.size());
    for (std::size_t e = 0; e < both.size(); ++e) both[e] = omega[e] || (e < gamma.size() && gamma[e]);
    std::vector<std::uint8_t> in(r.size(), 0);
    for (std::size_t v = 0; v < r.size(); ++v) in[v] = r.linf(v) <= L / 2;
    return single_image(mid, restricted_labels(r, both, in));
}

bool disconnection(const RCModel& m, const std::vector<std::uint8_t>& omega, const std::vector<int>& sides)
{
    auto c = cluster_labels(m, omega, GhostMode::two, &sides);
    return c.label[m.ghost()] != c.label[m.ghost() + 1];
}

ClusterStats cluster_stats(std::span<const std::uint32_t> labels, std::size_t N, std::size_t K)
{
    ClusterStats s;
    std::map<std::uint32_t, std::size_t> count;
    for (auto l : labels)
        if (l != no_label) ++count[l];
    for (auto [root, size] : count) {
        s.roots.push_back(root);
        s.sizes.push_back(size);
        if (size > s.max_size) {
            s.second_size = s.max_size;
            s.max_size = size;
            s.max_label = root;
        } else if (size > s.second_size) {
            s.second_size = size;
        }
    }
    for (std::size_t i = 0; i < s.roots.size(); ++i)
        if (s.roots[i] != s.max_label && s.sizes[i] >= N) s.restricted_sum += s.sizes[i];
    s.large.assign(labels.size(), 0);
    for (std::size_t v = 0; v < labels.size(); ++v)
        if (labels[v] != no_label) s.large[v] = count[labels[v]] >= K;
    return s;
}

bool site_percolation_surface_event(const Region& box, const std::vector<std::uint8_t>& open, int M, double eps)
{
    const std::size_t n = box.size();
    UnionFind uf(n);
    for (const auto& e : box.edges())
        if (open[e.u] && open[e.v]) uf.unite(e.u, e.v);
    std::vector<std::size_t> size(n, 0);
    for (std::uint32_t v = 0; v < n; ++v)
        if (open[v]) ++size[uf.find(v)];
    auto best = std::max_element(size.begin(), size.end());
    if (best == size.end() || 4 * *best < 3 * n) return false;
    const auto giant = static_cast<std::uint32_t>(best - size.begin());
    std::vector<std::uint8_t> rest(n, 0);
    for (std::uint32_t v = 0; v < n; ++v) rest[v] = !(open[v] && uf.find(v) == giant);
    UnionFind cf(n);
    for (const auto& e : box.edges())
        if (rest[e.u] && rest[e.v]) cf.unite(e.u, e.v);
    std::vector<std::size_t> csize(n, 0);
    for (std::uint32_t v = 0; v < n; ++v)
        if (rest[v]) ++csize[cf.find(v)];
    double total = 0.0;
    for (std::size_t s : csize)
        if (s >= static_cast<std::size_t>(M)) total += static_cast<double>(s);
    return total <= eps * static_cast<double>(n);
}

bool site_percolation_surface_event(double p, int m, int M, double eps, std::mt19937_64& rng, int d)
{
    if (p < 0.0 || p > 1.0 || m < 1 || M < 1 || eps < 0.0)
        throw std::invalid_argument("site percolation event: bad parameters");
    Region box(ShapeSpec{Shape::box, d, m, 0, {}});
    std::bernoulli_distribution coin(p);
    std::vector<std::uint8_t> open(box.size());
    for (auto& o : open) o = coin(rng);
    return site_percolation_surface_event(box, open, M, eps);
}

}  // namespace phi4
