#include "phi4/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <boost/math/quadrature/gauss.hpp>

#include "phi4/union_find.hpp"

namespace phi4::oracle {

Graph Graph::make(std::size_t n, std::vector<Edge> edges, std::vector<double> h)
{
    Graph g;
    g.n = n;
    g.J.assign(edges.size(), 1.0);
    g.edges = std::move(edges);
    g.h = h.empty() ? std::vector<double>(n, 0.0) : std::move(h);
    g.validate();
    return g;
}

Graph Graph::from_region(const Region& r, const ModelParams& p, const BoundaryCondition& bc)
{
    SpinModel m(std::make_shared<Region>(r), p);
    bc.validate(r);
    Graph g;
    g.n = r.size();
    g.edges = r.edges();
    for (std::size_t e = 0; e < g.edges.size(); ++e) g.J.push_back(m.J(e));
    g.h = m.field();
    g.b = bc.b;
    g.xi = bc.xi;
    for (const auto& e : r.boundary_edges()) {
        g.bedges.push_back({e.u, static_cast<std::uint32_t>(e.v - r.size())});
        g.bJ.push_back(1.0);
    }
    g.validate();
    return g;
}

void Graph::validate() const
{
    if (h.size() != n) throw std::invalid_argument("oracle graph: field has wrong length");
    if (J.size() != edges.size()) throw std::invalid_argument("oracle graph: couplings have wrong length");
    if (xi.size() != b.size()) throw std::invalid_argument("oracle graph: partition has wrong length");
    if (bJ.size() != bedges.size()) throw std::invalid_argument("oracle graph: boundary couplings have wrong length");
    for (const auto& e : edges)
        if (e.u >= n || e.v >= n || e.u == e.v) throw std::invalid_argument("oracle graph: bad edge");
    for (const auto& e : bedges)
        if (e.u >= n || e.v >= b.size()) throw std::invalid_argument("oracle graph: bad boundary edge");
}

std::vector<LiveEdge> live_edges(const Graph& g)
{
    std::vector<LiveEdge> out;
    const auto ne = static_cast<std::uint32_t>(g.n);
    const auto ghost = static_cast<std::uint32_t>(g.n + g.exterior());
    for (std::size_t e = 0; e < g.edges.size(); ++e) out.push_back({g.edges[e].u, g.edges[e].v, LiveEdge::internal, e});
    for (std::size_t e = 0; e < g.bedges.size(); ++e)
        if (g.b[g.bedges[e].v] > 0.0) out.push_back({g.bedges[e].u, ne + g.bedges[e].v, LiveEdge::boundary, e});
    for (std::size_t x = 0; x < g.n; ++x)
        if (g.h[x] != 0.0) out.push_back({static_cast<std::uint32_t>(x), ghost, LiveEdge::ghost, x});
    return out;
}

void check_spin_size(const Graph& g, const Limits& lim)
{
    if (g.n > lim.max_vertices)
        throw SizeError("oracle size cap: " + std::to_string(g.n) + " vertices exceeds " +
                        std::to_string(lim.max_vertices));
}

void check_rc_size(const Graph& g, const Limits& lim)
{
    check_spin_size(g, lim);
    auto L = live_edges(g).size();
    if (L > lim.max_live_edges)
        throw SizeError("oracle size cap: " + std::to_string(L) + " live edges exceeds " +
                        std::to_string(lim.max_live_edges));
}

namespace {

struct Axis {
    std::vector<double> x, w;  // w includes the normalised single-site density
};

Axis panels(double lo, double hi, int P)
{
    using rule = boost::math::quadrature::gauss<double, 20>;
    const auto& ab = rule::abscissa();
    const auto& wt = rule::weights();
    Axis ax;
    const double width = (hi - lo) / P;
    for (int k = 0; k < P; ++k) {
        double l = lo + k * width, mid = l + 0.5 * width, hw = 0.5 * width;
        for (std::size_t i = 0; i < ab.size(); ++i) {
            ax.x.push_back(mid - hw * ab[i]);
            ax.w.push_back(hw * wt[i]);
            ax.x.push_back(mid + hw * ab[i]);
            ax.w.push_back(hw * wt[i]);
        }
    }
    return ax;
}

Axis raw_axis(double T, int P, bool half)
{
    if (half) return panels(0.0, T, P);
    Axis neg = panels(-T, 0.0, P), pos = panels(0.0, T, P);
    neg.x.insert(neg.x.end(), pos.x.begin(), pos.x.end());
    neg.w.insert(neg.w.end(), pos.w.begin(), pos.w.end());
    return neg;
}

// Gauss-Legendre panels on [-T,T] (or [0,T]), split at 0, doubled until the
// tilted test integrals are stable to 1e-14.
Axis build_axis(const SingleSite& s, double T, double tau, bool half)
{
    std::vector<double> taus{0.0, 0.5 * tau, tau};
    if (!half) { taus.push_back(-0.5 * tau); taus.push_back(-tau); }
    auto tests = [&](const Axis& ax) {
        std::vector<double> v;
        for (double t : taus) {
            double base = log_density(mode(s, t), s, t);
            for (int k : {0, 2}) {
                double acc = 0.0;
                for (std::size_t i = 0; i < ax.x.size(); ++i)
                    acc += ax.w[i] * std::pow(ax.x[i], k) * std::exp(log_density(ax.x[i], s, t) - base);
                v.push_back(acc);
            }
        }
        return v;
    };
    int P = 1;
    Axis cur = raw_axis(T, P, half);
    auto tc = tests(cur);
    while (P < 256) {
        Axis nxt = raw_axis(T, 2 * P, half);
        auto tn = tests(nxt);
        bool ok = true;
        for (std::size_t i = 0; i < tc.size(); ++i)
            if (std::abs(tc[i] - tn[i]) > 1e-14 * std::abs(tn[i]) + 1e-300) ok = false;
        if (ok) break;
        P *= 2;
        cur = std::move(nxt);
        tc = std::move(tn);
    }
    double z = 0.0;
    for (std::size_t i = 0; i < cur.x.size(); ++i) {
        cur.w[i] *= std::exp(log_density(cur.x[i], s));
        z += cur.w[i];
    }
    for (auto& w : cur.w) w /= z;
    return cur;
}

double window(const Graph& g, const Params& p)
{
    std::vector<double> deg(g.n, 0.0), fixed(g.n, 0.0);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        deg[g.edges[e].u] += g.J[e];
        deg[g.edges[e].v] += g.J[e];
    }
    for (std::size_t e = 0; e < g.bedges.size(); ++e) fixed[g.bedges[e].u] += g.bJ[e] * g.b[g.bedges[e].v];
    double D = 0.0, F = 0.0;
    for (std::size_t x = 0; x < g.n; ++x) {
        D = std::max(D, deg[x]);
        F = std::max(F, fixed[x] + std::abs(g.h[x]));
    }
    double T = cutoff(p.site, 0.0);
    for (int it = 0; it < 2; ++it) T = cutoff(p.site, p.beta * (D * T + F));
    return T;
}

double tau_max(const Graph& g, const Params& p, double T)
{
    std::vector<double> t(g.n, 0.0);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        t[g.edges[e].u] += g.J[e] * T;
        t[g.edges[e].v] += g.J[e] * T;
    }
    for (std::size_t e = 0; e < g.bedges.size(); ++e) t[g.bedges[e].u] += g.bJ[e] * g.b[g.bedges[e].v];
    double m = 0.0;
    for (std::size_t x = 0; x < g.n; ++x) m = std::max(m, p.beta * (t[x] + std::abs(g.h[x])));
    return m;
}

// Visit every node of the tensor grid: f(point, weight).
template <class F>
void for_grid(const Axis& ax, std::size_t n, F&& f)
{
    const std::size_t K = ax.x.size();
    std::vector<std::size_t> idx(n, 0);
    std::vector<double> pt(n);
    if (n == 0) {
        f(std::span<const double>(pt), 1.0);
        return;
    }
    for (;;) {
        double w = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            pt[i] = ax.x[idx[i]];
            w *= ax.w[idx[i]];
        }
        f(std::span<const double>(pt), w);
        std::size_t i = n;
        while (i > 0) {
            --i;
            if (++idx[i] < K) break;
            idx[i] = 0;
            if (i == 0) return;
        }
    }
}

// Partition classes of the exterior that carry a live boundary value.
struct ClassInfo {
    std::vector<int> live;      // class ids with some b > 0
    std::size_t dead = 0;       // number of classes with b = 0 throughout
    std::map<int, std::size_t> slot;
};

ClassInfo classes(const Graph& g)
{
    std::map<int, bool> any;
    for (std::size_t j = 0; j < g.b.size(); ++j) any[g.xi[j]] = any[g.xi[j]] || g.b[j] > 0.0;
    ClassInfo ci;
    for (auto [c, l] : any) {
        if (l) {
            ci.slot[c] = ci.live.size();
            ci.live.push_back(c);
        } else {
            ++ci.dead;
        }
    }
    return ci;
}

// Sum over admissible exterior signs (live classes) and tensor grid of
// F(phi) * exp(beta(sum J phi phi + sum h phi + sum bJ phi sigma b)) dρ(phi).
std::vector<double> spin_integrals(const Graph& g, const Params& p, const std::vector<Observable>& fs)
{
    const double T = window(g, p);
    Axis ax = build_axis(p.site, T, tau_max(g, p, T), false);
    ClassInfo ci = classes(g);
    if (ci.live.size() > 16) throw SizeError("oracle: too many wired boundary classes");
    std::vector<double> out(fs.size() + 1, 0.0);
    std::vector<double> bfield(g.n);
    for (std::uint32_t sm = 0; sm < (1u << ci.live.size()); ++sm) {
        std::fill(bfield.begin(), bfield.end(), 0.0);
        for (std::size_t e = 0; e < g.bedges.size(); ++e) {
            auto y = g.bedges[e].v;
            if (g.b[y] <= 0.0) continue;
            double sigma = ((sm >> ci.slot[g.xi[y]]) & 1u) ? -1.0 : 1.0;
            bfield[g.bedges[e].u] += g.bJ[e] * sigma * g.b[y];
        }
        for_grid(ax, g.n, [&](std::span<const double> phi, double w) {
            double ex = 0.0;
            for (std::size_t e = 0; e < g.edges.size(); ++e) ex += g.J[e] * phi[g.edges[e].u] * phi[g.edges[e].v];
            for (std::size_t x = 0; x < g.n; ++x) ex += (g.h[x] + bfield[x]) * phi[x];
            double W = w * std::exp(p.beta * ex);
            out[0] += W;
            for (std::size_t k = 0; k < fs.size(); ++k) out[k + 1] += W * fs[k](phi);
        });
    }
    return out;
}

struct MaskTable {
    std::vector<LiveEdge> live;
    std::vector<int> k;                           // clusters per mask
    std::vector<std::vector<std::uint32_t>> lab;  // labels per mask
    std::uint32_t ghost = 0;
};

MaskTable mask_table(const Graph& g)
{
    MaskTable t;
    t.live = live_edges(g);
    const std::size_t L = t.live.size();
    const std::size_t nv = g.n + g.exterior() + 1;
    t.ghost = static_cast<std::uint32_t>(nv - 1);
    t.k.resize(std::size_t{1} << L);
    t.lab.resize(std::size_t{1} << L);
    for (std::uint32_t m = 0; m < (1u << L); ++m) {
        UnionFind uf(nv);
        for (std::size_t e = 0; e < L; ++e)
            if ((m >> e) & 1u) uf.unite(t.live[e].u, t.live[e].v);
        std::map<int, std::uint32_t> first;
        for (std::size_t j = 0; j < g.exterior(); ++j) {
            auto v = static_cast<std::uint32_t>(g.n + j);
            auto it = first.find(g.xi[j]);
            if (it == first.end()) first[g.xi[j]] = v;
            else uf.unite(it->second, v);
        }
        t.lab[m].resize(nv);
        int k = 0;
        for (std::uint32_t v = 0; v < nv; ++v) {
            t.lab[m][v] = uf.find(v);
            if (t.lab[m][v] == v) ++k;
        }
        t.k[m] = k;
    }
    return t;
}

double edge_t(const Graph& g, const Params& p, const LiveEdge& e, std::span<const double> a)
{
    switch (e.kind) {
    case LiveEdge::internal: return p.beta * g.J[e.source] * a[e.u] * a[e.v];
    case LiveEdge::boundary: return p.beta * g.bJ[e.source] * a[e.u] * g.b[g.bedges[e.source].v];
    case LiveEdge::ghost: return p.beta * g.h[e.source] * a[e.u];
    }
    return 0.0;
}

// prod over live edges of (omega ? 2 sinh t : e^{-t}) for every mask.
void mask_weights(const Graph& g, const Params& p, const MaskTable& t, std::span<const double> a,
                  std::vector<double>& W)
{
    const std::size_t L = t.live.size();
    W.assign(std::size_t{1} << L, 0.0);
    W[0] = 1.0;
    for (std::size_t e = 0; e < L; ++e) {
        double te = edge_t(g, p, t.live[e], a);
        double w0 = std::exp(-te), w1 = 2.0 * std::sinh(te);
        std::size_t half = std::size_t{1} << e;
        for (std::size_t m = 0; m < half; ++m) {
            W[m | half] = W[m] * w1;
            W[m] *= w0;
        }
    }
}

struct RCSums {
    double total = 0.0;
    std::vector<double> per_mask;
    std::vector<double> events;
};

RCSums rc_sums(const Graph& g, const Params& p, const std::vector<Event>& evs, bool want_masks)
{
    check_rc_size(g);
    const double T = window(g, p);
    Axis ax = build_axis(p.site, T, tau_max(g, p, T), true);
    MaskTable t = mask_table(g);
    const std::size_t M = t.k.size();
    std::vector<double> pow2(M);
    for (std::size_t m = 0; m < M; ++m) pow2[m] = std::ldexp(1.0, t.k[m]);

    // Predicate tables.
    struct TermTab {
        std::vector<double> pred;
        const Term* term;
        std::size_t ev;
    };
    std::vector<TermTab> tabs;
    for (std::size_t i = 0; i < evs.size(); ++i)
        for (const auto& term : evs[i]) {
            TermTab tt{std::vector<double>(M, 0.0), &term, i};
            for (std::uint32_t m = 0; m < M; ++m) {
                OmegaView v{m, t.lab[m], t.ghost};
                tt.pred[m] = (!term.pred || term.pred(v)) ? 1.0 : 0.0;
            }
            tabs.push_back(std::move(tt));
        }

    RCSums s;
    s.events.assign(evs.size(), 0.0);
    if (want_masks) s.per_mask.assign(M, 0.0);
    std::vector<double> W;
    for_grid(ax, g.n, [&](std::span<const double> a, double w) {
        mask_weights(g, p, t, a, W);
        double tot = 0.0;
        for (std::size_t m = 0; m < M; ++m) {
            W[m] *= pow2[m];
            tot += W[m];
        }
        s.total += w * tot;
        if (want_masks)
            for (std::size_t m = 0; m < M; ++m) s.per_mask[m] += w * W[m];
        for (const auto& tt : tabs) {
            double acc = 0.0;
            for (std::size_t m = 0; m < M; ++m) acc += tt.pred[m] * W[m];
            double wt = tt.term->weight ? tt.term->weight(a) : 1.0;
            s.events[tt.ev] += w * tt.term->coef * wt * acc;
        }
    });
    return s;
}

}  // namespace

double exact_spin_expectation(const Graph& g, const Params& p, const Observable& f)
{
    return exact_spin_expectations(g, p, {f})[0];
}

std::vector<double> exact_spin_expectations(const Graph& g, const Params& p, const std::vector<Observable>& fs)
{
    g.validate();
    check_spin_size(g);
    auto s = spin_integrals(g, p, fs);
    std::vector<double> out(fs.size());
    for (std::size_t k = 0; k < fs.size(); ++k) out[k] = s[k + 1] / s[0];
    return out;
}

double exact_rc_probability(const Graph& g, const Params& p, const Event& ev)
{
    return exact_rc_expectations(g, p, {ev})[0];
}

std::vector<double> exact_rc_expectations(const Graph& g, const Params& p, const std::vector<Event>& evs)
{
    g.validate();
    auto s = rc_sums(g, p, evs, false);
    for (auto& v : s.events) v /= s.total;
    return s.events;
}

std::vector<double> exact_edge_law(const Graph& g, const Params& p)
{
    g.validate();
    auto s = rc_sums(g, p, {}, true);
    for (auto& v : s.per_mask) v /= s.total;
    return s.per_mask;
}

double rc_partition(const Graph& g, const Params& p)
{
    g.validate();
    return rc_sums(g, p, {}, false).total;
}

double phi4_partition(const Graph& g, const Params& p)
{
    g.validate();
    check_spin_size(g);
    auto s = spin_integrals(g, p, {});
    return std::ldexp(s[0], static_cast<int>(g.n + classes(g).dead));
}

double ising_partition(const Graph& g, const Params& p, std::span<const double> a)
{
    g.validate();
    if (a.size() != g.n) throw std::invalid_argument("fixed a has wrong length");
    ClassInfo ci = classes(g);
    if (g.n + ci.live.size() > 24) throw SizeError("oracle: Ising enumeration too large");
    double Z = 0.0;
    const std::size_t S = g.n + ci.live.size();
    for (std::uint32_t s = 0; s < (1u << S); ++s) {
        auto sig = [&](std::size_t x) { return ((s >> x) & 1u) ? -1.0 : 1.0; };
        double ex = 0.0;
        for (std::size_t e = 0; e < g.edges.size(); ++e)
            ex += g.J[e] * a[g.edges[e].u] * a[g.edges[e].v] * sig(g.edges[e].u) * sig(g.edges[e].v);
        for (std::size_t e = 0; e < g.bedges.size(); ++e) {
            auto y = g.bedges[e].v;
            if (g.b[y] <= 0.0) continue;
            ex += g.bJ[e] * a[g.bedges[e].u] * g.b[y] * sig(g.bedges[e].u) * sig(g.n + ci.slot[g.xi[y]]);
        }
        for (std::size_t x = 0; x < g.n; ++x) ex += g.h[x] * a[x] * sig(x);
        Z += std::exp(p.beta * ex);
    }
    return std::ldexp(Z, static_cast<int>(ci.dead));
}

double fk_partition_side(const Graph& g, const Params& p, std::span<const double> a)
{
    g.validate();
    check_rc_size(g);
    if (a.size() != g.n) throw std::invalid_argument("fixed a has wrong length");
    MaskTable t = mask_table(g);
    const std::size_t L = t.live.size();
    double bold = 0.0;
    for (std::uint32_t m = 0; m < t.k.size(); ++m) {
        double w = std::ldexp(1.0, t.k[m]);
        for (std::size_t e = 0; e < L; ++e)
            if ((m >> e) & 1u) w *= std::expm1(2.0 * edge_t(g, p, t.live[e], a));
        bold += w;
    }
    double damp = 0.0;
    for (const auto& e : t.live) damp -= edge_t(g, p, e, a);
    return 0.5 * bold * std::exp(damp);
}

PartitionReport partition_identities(const Graph& g, const Params& p, std::span<const double> a_fixed)
{
    PartitionReport r;
    r.z_rc = rc_partition(g, p);
    r.z_phi4 = phi4_partition(g, p);
    r.ratio = r.z_rc / r.z_phi4;
    r.ratio_gap = std::abs(r.ratio - 2.0) / 2.0;
    if (!a_fixed.empty()) {
        r.z_ising = ising_partition(g, p, a_fixed);
        r.z_fk = fk_partition_side(g, p, a_fixed);
        r.fk_gap = std::abs(r.z_ising - r.z_fk) / std::abs(r.z_ising);
    }
    return r;
}

namespace {

struct CurrentEdges {
    std::vector<std::uint32_t> u, v;  // v == n for ghost
    std::vector<double> c;
};

CurrentEdges current_edges(const Graph& g, const Params& p)
{
    for (double b : g.b)
        if (b > 0.0) throw std::invalid_argument("current expansion needs free exterior");
    CurrentEdges ce;
    const auto ghost = static_cast<std::uint32_t>(g.n);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        ce.u.push_back(g.edges[e].u);
        ce.v.push_back(g.edges[e].v);
        ce.c.push_back(p.beta * g.J[e]);
    }
    for (std::size_t x = 0; x < g.n; ++x)
        if (g.h[x] != 0.0) {
            ce.u.push_back(static_cast<std::uint32_t>(x));
            ce.v.push_back(ghost);
            ce.c.push_back(p.beta * g.h[x]);
        }
    return ce;
}

// Sum over currents with all n_e <= nmax of w^A(n) * prod_{e in S} 2^{n_e},
// for the requested (A, S) pairs.
struct CurrentSum {
    std::vector<int> A;
    std::vector<std::uint8_t> S;
    double value = 0.0;
};

std::size_t enumerate_currents(const Graph& g, const Params& p, const CurrentEdges& ce, int nmax,
                               std::vector<CurrentSum>& sums)
{
    const std::size_t E = ce.c.size();
    double count = std::pow(nmax + 1.0, static_cast<double>(E));
    if (count > 1e7) throw SizeError("current enumeration exceeds 1e7 terms");
    // Maximal vertex degree and source exponent.
    std::vector<int> maxdeg(g.n, 0);
    for (std::size_t e = 0; e < E; ++e) {
        maxdeg[ce.u[e]] += nmax;
        if (ce.v[e] < g.n) maxdeg[ce.v[e]] += nmax;
    }
    int K = 0;
    for (std::size_t x = 0; x < g.n; ++x) {
        int amax = 0;
        for (const auto& s : sums) amax = std::max(amax, s.A[x]);
        K = std::max(K, maxdeg[x] + amax);
    }
    std::vector<double> mom(K + 1);
    for (int k = 0; k <= K; ++k) mom[k] = moment(k, p.site);
    std::vector<std::vector<double>> pw(E, std::vector<double>(nmax + 1));
    for (std::size_t e = 0; e < E; ++e) {
        pw[e][0] = 1.0;
        for (int k = 1; k <= nmax; ++k) pw[e][k] = pw[e][k - 1] * ce.c[e] / k;
    }
    std::vector<int> n(E, 0), deg(g.n, 0);
    std::size_t visited = 0;
    for (;;) {
        ++visited;
        std::fill(deg.begin(), deg.end(), 0);
        double w = 1.0;
        for (std::size_t e = 0; e < E; ++e) {
            w *= pw[e][n[e]];
            deg[ce.u[e]] += n[e];
            if (ce.v[e] < g.n) deg[ce.v[e]] += n[e];
        }
        if (w != 0.0)
            for (auto& s : sums) {
                double t = w;
                for (std::size_t x = 0; x < g.n && t != 0.0; ++x) t *= mom[s.A[x] + deg[x]];
                if (t == 0.0) continue;
                for (std::size_t e = 0; e < E; ++e)
                    if (s.S[e]) t = std::ldexp(t, n[e]);
                s.value += t;
            }
        std::size_t i = E;
        bool done = true;
        while (i > 0) {
            --i;
            if (++n[i] <= nmax) { done = false; break; }
            n[i] = 0;
        }
        if (done || E == 0) break;
    }
    return visited;
}

double tail_estimate(const CurrentEdges& ce, const Params& p, int nmax)
{
    const double T = cutoff(p.site);
    double tail = 0.0;
    for (std::size_t e = 0; e < ce.c.size(); ++e) {
        double B = ce.c[e] * T * T;
        double term = 1.0;
        for (int k = 1; k <= nmax + 1; ++k) term *= B / k;
        for (int k = nmax + 1; k < nmax + 200 && term > 1e-300; ++k) {
            tail += term;
            term *= B / (k + 1);
        }
    }
    return tail;
}

}  // namespace

CurrentReport current_expansion_check(const Graph& g, const Params& p, const std::vector<int>& A, int nmax)
{
    g.validate();
    check_spin_size(g);
    if (A.size() != g.n) throw std::invalid_argument("source function has wrong length");
    for (int v : A)
        if (v < 0) throw std::invalid_argument("source exponents must be nonnegative");
    auto ce = current_edges(g, p);
    std::vector<CurrentSum> sums(2);
    sums[0].A = A;
    sums[1].A.assign(g.n, 0);
    for (auto& s : sums) s.S.assign(ce.c.size(), 0);
    CurrentReport r;
    r.currents = enumerate_currents(g, p, ce, nmax, sums);
    r.value = sums[0].value / sums[1].value;
    r.reference = exact_spin_expectation(g, p, [&](std::span<const double> phi) {
        double v = 1.0;
        for (std::size_t x = 0; x < g.n; ++x) v *= std::pow(phi[x], A[x]);
        return v;
    });
    r.gap = std::abs(r.value - r.reference);
    r.tail_bound = tail_estimate(ce, p, nmax);
    return r;
}

CurrentReport current_moment_check(const Graph& g, const Params& p, const std::vector<std::size_t>& subset, int nmax)
{
    g.validate();
    check_spin_size(g);
    auto ce = current_edges(g, p);
    std::vector<CurrentSum> sums(2);
    for (auto& s : sums) {
        s.A.assign(g.n, 0);
        s.S.assign(ce.c.size(), 0);
    }
    for (auto e : subset) {
        if (e >= ce.c.size()) throw std::invalid_argument("edge subset index out of range");
        sums[0].S[e] = 1;
    }
    CurrentReport r;
    r.currents = enumerate_currents(g, p, ce, nmax, sums);
    r.value = sums[0].value / sums[1].value;
    r.reference = exact_spin_expectation(g, p, [&](std::span<const double> phi) {
        double ex = 0.0;
        for (std::size_t e = 0; e < ce.c.size(); ++e) {
            if (!sums[0].S[e]) continue;
            double pe = ce.v[e] < g.n ? phi[ce.u[e]] * phi[ce.v[e]] : phi[ce.u[e]];
            ex += ce.c[e] * pe;
        }
        return std::exp(ex);
    });
    r.gap = std::abs(r.value - r.reference);
    r.tail_bound = tail_estimate(ce, p, nmax);
    return r;
}

Domination stochastic_domination_check(const std::vector<double>& hi, const std::vector<double>& lo)
{
    if (hi.size() != lo.size()) throw std::invalid_argument("laws live on different spaces");
    std::size_t S = hi.size();
    std::size_t E = 0;
    while ((std::size_t{1} << E) < S) ++E;
    if ((std::size_t{1} << E) != S) throw std::invalid_argument("law size is not a power of two");
    if (E > 4) throw std::invalid_argument("domination check supports at most 4 edges");
    Domination d;
    d.margin = std::numeric_limits<double>::infinity();
    const std::uint32_t sets = 1u << S;
    for (std::uint32_t U = 1; U < sets || (S == 32 && U != 0); ++U) {
        bool up = true;
        for (std::uint32_t w = 0; w < S && up; ++w) {
            if (!((U >> w) & 1u)) continue;
            for (std::size_t e = 0; e < E; ++e)
                if (!((U >> (w | (1u << e))) & 1u)) { up = false; break; }
        }
        if (!up) continue;
        double ph = 0.0, pl = 0.0;
        for (std::uint32_t w = 0; w < S; ++w)
            if ((U >> w) & 1u) { ph += hi[w]; pl += lo[w]; }
        double diff = ph - pl;
        if (diff < d.margin) d.margin = diff;
        if (diff < -1e-12 && d.holds) {
            d.holds = false;
            for (std::uint32_t w = 0; w < S; ++w)
                if ((U >> w) & 1u) d.witness.push_back(w);
        }
    }
    return d;
}

std::vector<double> sprinkled_law(const std::vector<double>& law, double eps)
{
    std::size_t S = law.size();
    std::size_t E = 0;
    while ((std::size_t{1} << E) < S) ++E;
    std::vector<double> out(S, 0.0);
    for (std::uint32_t w = 0; w < S; ++w)
        for (std::uint32_t v = 0; v < S; ++v) {
            if ((w & v) != w) continue;
            int added = std::popcount(v & ~w);
            int closed = static_cast<int>(E) - std::popcount(v);
            out[v] += law[w] * std::pow(eps, added) * std::pow(1.0 - eps, closed);
        }
    return out;
}

}  // namespace phi4::oracle
