#include "phi4/randomcluster.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "phi4/union_find.hpp"

namespace phi4 {

BoundaryCondition BoundaryCondition::free(const Region& r)
{
    BoundaryCondition bc;
    bc.xi.resize(r.exterior_size());
    std::iota(bc.xi.begin(), bc.xi.end(), 0);
    bc.b.assign(r.exterior_size(), 0.0);
    return bc;
}

BoundaryCondition BoundaryCondition::wired_plus(const Region& r, double c0)
{
    BoundaryCondition bc;
    bc.xi.assign(r.exterior_size(), 0);
    bc.b.assign(r.exterior_size(), max_boundary_value(r, c0));
    return bc;
}

bool BoundaryCondition::is_free() const
{
    for (double v : b)
        if (v != 0.0) return false;
    return true;
}

void BoundaryCondition::validate(const Region& r) const
{
    if (xi.size() != r.exterior_size() || b.size() != r.exterior_size())
        throw std::invalid_argument("boundary condition does not match the exterior boundary");
    for (double v : b)
        if (!(v >= 0.0)) throw std::invalid_argument("boundary values must be nonnegative");
}

RCModel::RCModel(std::shared_ptr<const Region> region, ModelParams params, BoundaryCondition bc)
    : spin_(std::move(region), std::move(params)), bc_(std::move(bc))
{
    bc_.validate(spin_.region());
    ghost_index_.assign(spin_.size(), -1);
    for (std::size_t x = 0; x < spin_.size(); ++x) {
        double h = spin_.h(x);
        if (h < 0.0) throw std::invalid_argument("random-cluster fields must be nonnegative");
        if (h != 0.0) {
            ghost_index_[x] = static_cast<std::int64_t>(internal_edges() + boundary_edges() + ghosts_.size());
            ghosts_.push_back(static_cast<std::uint32_t>(x));
        }
    }
}

Clusters cluster_labels(const RCModel& m, const std::vector<std::uint8_t>& omega, GhostMode mode,
                        const std::vector<int>* sides)
{
    if (omega.size() != m.edge_count()) throw std::invalid_argument("omega is indexed by a different edge set");
    const auto& r = m.region();
    const std::size_t nv = m.vertex_count(mode);
    UnionFind uf(nv);
    const auto& E = r.edges();
    const auto& B = r.boundary_edges();
    std::size_t e = 0;
    for (; e < E.size(); ++e)
        if (omega[e]) uf.unite(E[e].u, E[e].v);
    for (std::size_t k = 0; k < B.size(); ++k, ++e)
        if (omega[e]) uf.unite(B[k].u, B[k].v);
    const auto g = m.ghost();
    for (std::size_t k = 0; k < m.ghost_edges(); ++k, ++e) {
        if (!omega[e]) continue;
        auto x = m.ghost_vertex(k);
        std::uint32_t target = g;
        if (mode == GhostMode::two) {
            int s = sides ? (*sides)[x] : 0;
            if (s == 0) throw std::invalid_argument("ghost edge outside the two-ghost attachment sets");
            target = s > 0 ? g : g + 1;
        }
        uf.unite(x, target);
    }
    // Identify partition classes.
    const auto& xi = m.bc().xi;
    std::vector<std::int64_t> first(xi.size() + 1, -1);
    for (std::size_t j = 0; j < xi.size(); ++j) {
        auto cls = static_cast<std::size_t>(xi[j]);
        if (cls >= first.size()) first.resize(cls + 1, -1);
        auto v = static_cast<std::uint32_t>(r.size() + j);
        if (first[cls] < 0) first[cls] = v;
        else uf.unite(static_cast<std::uint32_t>(first[cls]), v);
    }
    Clusters c;
    c.label.resize(nv);
    for (std::uint32_t v = 0; v < nv; ++v) {
        c.label[v] = uf.find(v);
        if (c.label[v] == v) ++c.k;
    }
    if (mode == GhostMode::two && c.label[g] != c.label[g + 1]) --c.k;
    return c;
}

namespace {

void require_free(const RCModel& m)
{
    if (!m.bc().is_free()) throw std::invalid_argument("Markov chain supports free boundary conditions only");
}

void spin_to_rc(const RCModel& m, const SpinConfig& phi, RCState& s, Rng& rng)
{
    const auto& r = m.region();
    const double beta = m.beta();
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    s.a.resize(r.closed_size());
    for (std::size_t x = 0; x < r.size(); ++x) s.a[x] = std::abs(phi[x]);
    for (std::size_t j = 0; j < r.exterior_size(); ++j) s.a[r.size() + j] = m.bc().b[j];
    s.omega.assign(m.edge_count(), 0);
    const auto& E = r.edges();
    std::size_t e = 0;
    for (; e < E.size(); ++e) {
        auto u = E[e].u, v = E[e].v;
        if ((phi[u] >= 0.0) != (phi[v] >= 0.0)) continue;
        double p = edge_prob(beta * m.spin().J(e), s.a[u], s.a[v]);
        if (p > 0.0 && unif(rng) < p) s.omega[e] = 1;
    }
    e += r.boundary_edges().size();
    for (std::size_t k = 0; k < m.ghost_edges(); ++k, ++e) {
        auto x = m.ghost_vertex(k);
        if (phi[x] < 0.0) continue;
        double p = ghost_prob(beta, m.spin().h(x), s.a[x]);
        if (p > 0.0 && unif(rng) < p) s.omega[e] = 1;
    }
}

void rc_to_spin(const RCModel& m, const RCState& s, SpinConfig& phi, Rng& rng)
{
    const auto& r = m.region();
    const std::size_t n = r.size();
    const auto g = static_cast<std::uint32_t>(n);  // local ghost index
    UnionFind uf(n + 1);
    const auto& E = r.edges();
    std::size_t e = 0;
    for (; e < E.size(); ++e)
        if (s.omega[e]) uf.unite(E[e].u, E[e].v);
    e += r.boundary_edges().size();
    for (std::size_t k = 0; k < m.ghost_edges(); ++k, ++e)
        if (s.omega[e]) uf.unite(m.ghost_vertex(k), g);
    std::vector<signed char> sign(n + 1, 0);
    sign[uf.find(g)] = 1;
    phi.resize(n);
    for (std::uint32_t x = 0; x < n; ++x) {
        auto root = uf.find(x);
        if (sign[root] == 0) sign[root] = (rng() >> 63) ? 1 : -1;
        phi[x] = sign[root] * s.a[x];
    }
}

}  // namespace

RCState es_spin_to_rc(const RCModel& m, const SpinConfig& phi, Rng& rng)
{
    require_free(m);
    RCState s;
    spin_to_rc(m, phi, s, rng);
    return s;
}

SpinConfig es_rc_to_spin(const RCModel& m, const RCState& s, Rng& rng)
{
    require_free(m);
    SpinConfig phi;
    rc_to_spin(m, s, phi, rng);
    return phi;
}

void rc_sweep(const RCModel& m, RCState& s, SpinConfig& phi, TiltedSampler& sampler, Rng& rng, Schedule schedule)
{
    require_free(m);
    rc_to_spin(m, s, phi, rng);
    heatbath_sweep(m.spin(), phi, sampler, rng, schedule);
    spin_to_rc(m, phi, s, rng);
}

void rc_sweep(const RCModel& m, RCState& s, TiltedSampler& sampler, Rng& rng, Schedule schedule)
{
    SpinConfig phi;
    rc_sweep(m, s, phi, sampler, rng, schedule);
}

void rc_sweep(const RCModel& m, RCState& s, Rng& rng, Schedule schedule)
{
    TiltedSampler sampler(m.spin().site());
    rc_sweep(m, s, sampler, rng, schedule);
}

void bernoulli_sprinkle(const RCModel& m, std::vector<std::uint8_t>& omega, double eps, Rng& rng)
{
    std::bernoulli_distribution coin(std::clamp(eps, 0.0, 1.0));
    for (std::size_t e = 0; e < m.internal_edges(); ++e)
        if (!omega[e] && coin(rng)) omega[e] = 1;
}

void bernoulli_sprinkle(const RCModel& m, std::vector<std::uint8_t>& omega, const std::vector<double>& a,
                        double beta_lo, double beta_hi, Rng& rng)
{
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const auto& E = m.region().edges();
    const double db = std::max(0.0, beta_hi - beta_lo);
    for (std::size_t e = 0; e < E.size(); ++e) {
        if (omega[e]) continue;
        double r = sprinkle_prob(db * m.spin().J(e), a[E[e].u], a[E[e].v]);
        if (r > 0.0 && unif(rng) < r) omega[e] = 1;
    }
}

}  // namespace phi4
