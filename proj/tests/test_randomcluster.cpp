#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "phi4/oracle.hpp"
#include "phi4/randomcluster.hpp"
#include "stats.hpp"

using namespace phi4;
using phi4::testing::batch_means;
using phi4::testing::within;

namespace {

std::shared_ptr<const Region> region(ShapeSpec s) { return std::make_shared<Region>(s); }
std::shared_ptr<const Region> block(int n, int m) { return region({Shape::block, 2, n, m, {}}); }
std::shared_ptr<const Region> box(int n) { return region({Shape::box, 2, n, 0, {}}); }

RCModel free_model(std::shared_ptr<const Region> r, double beta, SingleSite s, std::vector<double> h = {})
{
    auto bc = BoundaryCondition::free(*r);
    return RCModel(r, {beta, s, {}, std::move(h)}, bc);
}

// Oracle values, single edge, g = 1, a = 0, beta = 0.7.
constexpr double edge_open = 0.16695114374971742;
constexpr double edge_agree = 0.58347557187485966;

// Oracle values on the 2x2 block, g = 1, a = -1, beta = 0.5, free bc.
constexpr double block_conn01 = 0.21450221898704069;
constexpr double block_conn03 = 0.10496739374755137;
constexpr double block_phi0_phi1 = 0.1543697777732175;

}  // namespace

TEST(EdgeProb, Examples)
{
    EXPECT_EQ(edge_prob(0.5, 0.0, 1.0), 0.0);
    EXPECT_EQ(edge_prob(0.0, 1.0, 1.0), 0.0);
    EXPECT_NEAR(edge_prob(0.5, 1.0, 1.0), 1.0 - std::exp(-1.0), 1e-15);
    EXPECT_NEAR(edge_prob(0.5, 1.0, 1.0), 0.632121, 1e-6);
    EXPECT_EQ(ghost_prob(1.0, 0.0, 1.0), 0.0);
    EXPECT_EQ(ghost_prob(1.0, 1.0, 0.0), 0.0);
    EXPECT_NEAR(ghost_prob(1.0, 1.0, 0.5), 1.0 - std::exp(-1.0), 1e-15);
    EXPECT_EQ(sprinkle_prob(1.0, 0.0, 2.0), 0.0);
    EXPECT_NEAR(sprinkle_prob(1e3, 1.0, 1.0), 1.0, 1e-12);
    Rng rng = make_stream(1, 0);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        double b = u(rng), x = u(rng), y = u(rng);
        double p = edge_prob(b, x, y), r = sprinkle_prob(b, x, y);
        EXPECT_LE(r, p);
        EXPECT_GE(r, 0.0);
        EXPECT_LT(p, 1.0 + 1e-15);
    }
}

TEST(ClusterLabels, Examples)
{
    auto r = box(0);
    auto m = free_model(r, 0.5, {1, 0});
    auto c = cluster_labels(m, std::vector<std::uint8_t>(m.edge_count(), 0));
    EXPECT_EQ(c.k, 6u);
    auto all = cluster_labels(m, std::vector<std::uint8_t>(m.edge_count(), 1));
    EXPECT_EQ(all.k, 2u);  // box, exterior vertices and an isolated ghost (no field)

    RCModel w(r, {0.5, {1, 0}, {}, {}}, BoundaryCondition::wired_plus(*r));
    EXPECT_EQ(cluster_labels(w, std::vector<std::uint8_t>(w.edge_count(), 0)).k, 3u);

    auto mh = free_model(r, 0.5, {1, 0}, {0.3});
    EXPECT_EQ(cluster_labels(mh, std::vector<std::uint8_t>(mh.edge_count(), 1)).k, 1u);
    EXPECT_THROW(cluster_labels(m, std::vector<std::uint8_t>(3, 0)), std::invalid_argument);
}

TEST(ClusterLabels, SmallestMemberLabels)
{
    auto r = box(1);
    auto m = free_model(r, 0.5, {1, 0});
    Rng rng = make_stream(2, 0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::uint8_t> omega(m.edge_count());
        for (auto& o : omega) o = rng() & 1u;
        auto c = cluster_labels(m, omega);
        for (std::uint32_t v = 0; v < c.label.size(); ++v) {
            EXPECT_LE(c.label[v], v);
            EXPECT_EQ(c.label[c.label[v]], c.label[v]);
        }
    }
}

TEST(ClusterLabels, OpeningAnEdgeDropsKByAtMostOne)
{
    auto r = block(2, 2);
    auto m = free_model(r, 0.5, {1, 0}, {0.2, 0.0, 0.0, 0.4});
    const std::size_t E = m.edge_count();
    ASSERT_LE(E, 20u);
    for (std::uint32_t mask = 0; mask < (1u << E); ++mask) {
        std::vector<std::uint8_t> omega(E);
        for (std::size_t e = 0; e < E; ++e) omega[e] = (mask >> e) & 1u;
        auto k0 = cluster_labels(m, omega).k;
        for (std::size_t e = 0; e < E; ++e) {
            if (omega[e]) continue;
            auto w = omega;
            w[e] = 1;
            auto k1 = cluster_labels(m, w).k;
            EXPECT_TRUE(k1 == k0 || k1 + 1 == k0);
        }
    }
}

TEST(ClusterLabels, TwoGhostCountIdentifiesGhosts)
{
    auto r = region({Shape::rectangle, 2, 3, 2, {}});
    auto h = make_boundary_field(FieldKind::dobrushin_pp, *r).h;
    auto sides = dobrushin_sides(*r);
    auto m = free_model(r, 0.5, {1, 0}, h);
    std::vector<std::uint8_t> omega(m.edge_count(), 0);
    for (std::size_t k = 0; k < m.ghost_edges(); ++k) omega[m.internal_edges() + m.boundary_edges() + k] = 1;
    auto one = cluster_labels(m, omega, GhostMode::single);
    auto two = cluster_labels(m, omega, GhostMode::two, &sides);
    EXPECT_EQ(one.k, two.k);
    EXPECT_NE(two.label[m.ghost()], two.label[m.ghost() + 1]);
}

TEST(EdwardsSokal, ZeroBetaClosesEverything)
{
    auto r = box(2);
    auto m = free_model(r, 0.0, {1, -1});
    Rng rng = make_stream(3, 0);
    SpinConfig phi(r->size());
    for (auto& v : phi) v = std::normal_distribution<double>()(rng);
    auto s = es_spin_to_rc(m, phi, rng);
    for (auto o : s.omega) EXPECT_EQ(o, 0);
}

TEST(EdwardsSokal, OppositeSignsStayClosed)
{
    auto r = block(1, 2);
    auto m = free_model(r, 5.0, {1, 0});
    Rng rng = make_stream(4, 0);
    for (int i = 0; i < 10000; ++i) {
        auto s = es_spin_to_rc(m, {1.3, -0.8}, rng);
        ASSERT_EQ(s.omega[0], 0);
    }
}

TEST(EdwardsSokal, RoundTripPreservesAbsoluteValues)
{
    auto r = box(2);
    auto m = free_model(r, 0.6, {1, -1}, std::vector<double>(25, 0.1));
    Rng rng = make_stream(5, 0);
    for (int trial = 0; trial < 20; ++trial) {
        SpinConfig phi(r->size());
        for (auto& v : phi) v = std::normal_distribution<double>()(rng);
        auto s = es_spin_to_rc(m, phi, rng);
        auto back = es_rc_to_spin(m, s, rng);
        for (std::size_t x = 0; x < phi.size(); ++x) EXPECT_EQ(std::abs(back[x]), std::abs(phi[x]));
    }
}

TEST(EdwardsSokal, GhostClusterIsPlus)
{
    auto r = box(2);
    auto m = free_model(r, 0.6, {1, -1}, std::vector<double>(25, 0.5));
    Rng rng = make_stream(6, 0);
    for (int trial = 0; trial < 200; ++trial) {
        RCState s;
        s.a.assign(r->closed_size(), 0.0);
        for (std::size_t x = 0; x < r->size(); ++x) s.a[x] = 0.5 + (x % 3);
        s.omega.resize(m.edge_count());
        for (auto& o : s.omega) o = rng() & 1u;
        auto phi = es_rc_to_spin(m, s, rng);
        auto c = cluster_labels(m, s.omega);
        for (std::size_t x = 0; x < r->size(); ++x)
            if (c.label[x] == c.label[m.ghost()]) EXPECT_GT(phi[x], 0.0);
    }
}

TEST(EdwardsSokal, IndependentSignsWithoutEdges)
{
    auto r = block(2, 1);
    auto m = free_model(r, 0.6, {1, 0});
    RCState s{std::vector<std::uint8_t>(m.edge_count(), 0), std::vector<double>(r->closed_size(), 0.0)};
    s.a[0] = 1.0;
    s.a[1] = 2.0;
    Rng rng = make_stream(7, 0);
    const int N = 100000;
    int plus0 = 0, plus1 = 0, both = 0;
    for (int i = 0; i < N; ++i) {
        auto phi = es_rc_to_spin(m, s, rng);
        ASSERT_EQ(std::abs(phi[0]), 1.0);
        ASSERT_EQ(std::abs(phi[1]), 2.0);
        plus0 += phi[0] > 0;
        plus1 += phi[1] > 0;
        both += phi[0] > 0 && phi[1] > 0;
    }
    const double se = 0.5 / std::sqrt(N);
    EXPECT_LT(std::abs(plus0 / double(N) - 0.5), 5 * se);
    EXPECT_LT(std::abs(plus1 / double(N) - 0.5), 5 * se);
    EXPECT_LT(std::abs(both / double(N) - 0.25), 5 * std::sqrt(0.25 * 0.75 / N));
}

TEST(EdwardsSokal, SingleEdgeJointLaw)
{
    auto r = block(1, 2);
    auto m = free_model(r, 0.7, {1, 0});
    Rng rng = make_stream(8, 0);
    TiltedSampler sampler(m.spin().site());
    SpinConfig phi{0.0, 0.0};
    for (int i = 0; i < 100; ++i) heatbath_sweep(m.spin(), phi, sampler, rng, Schedule::sequential);
    const int N = 1000000;
    std::vector<double> open_agree(N), closed_agree(N), disagree(N);
    for (int t = 0; t < N; ++t) {
        heatbath_sweep(m.spin(), phi, sampler, rng, Schedule::sequential);
        auto s = es_spin_to_rc(m, phi, rng);
        bool agree = (phi[0] >= 0) == (phi[1] >= 0);
        open_agree[t] = s.omega[0] && agree;
        closed_agree[t] = !s.omega[0] && agree;
        disagree[t] = !agree;
        ASSERT_FALSE(s.omega[0] && !agree);
    }
    auto a = batch_means(open_agree), b = batch_means(closed_agree), c = batch_means(disagree);
    EXPECT_LT(std::abs(a.mean - edge_open), 3 * a.error);
    EXPECT_LT(std::abs(b.mean - (edge_agree - edge_open)), 3 * b.error);
    EXPECT_LT(std::abs(c.mean - (1 - edge_agree)), 3 * c.error);
}

TEST(RcSweep, ZeroBeta)
{
    auto r = box(1);
    auto m = free_model(r, 0.0, {1, -1});
    Rng rng = make_stream(9, 0);
    RCState s{std::vector<std::uint8_t>(m.edge_count(), 1), std::vector<double>(r->closed_size(), 1.0)};
    rc_sweep(m, s, rng);
    for (auto o : s.omega) EXPECT_EQ(o, 0);
    for (std::size_t x = 0; x < r->size(); ++x) EXPECT_NE(s.a[x], 1.0);
}

TEST(RcSweep, RejectsGeneralBoundaryConditions)
{
    auto r = box(1);
    RCModel w(r, {0.5, {1, 0}, {}, {}}, BoundaryCondition::wired_plus(*r));
    Rng rng = make_stream(10, 0);
    RCState s{std::vector<std::uint8_t>(w.edge_count(), 0), std::vector<double>(r->closed_size(), 0.0)};
    EXPECT_THROW(rc_sweep(w, s, rng), std::invalid_argument);
}

TEST(RcSweep, BlockStationarity)
{
    auto r = block(2, 2);
    auto m = free_model(r, 0.5, {1, -1});
    Rng rng = make_stream(11, 0);
    TiltedSampler sampler(m.spin().site());
    RCState s{std::vector<std::uint8_t>(m.edge_count(), 0), std::vector<double>(r->closed_size(), 0.0)};
    SpinConfig phi;
    for (int i = 0; i < 1000; ++i) rc_sweep(m, s, phi, sampler, rng);
    std::size_t e01 = 0;
    while (!(r->edges()[e01].u == 0 && r->edges()[e01].v == 1)) ++e01;
    const int N = 300000;
    std::vector<double> c01(N), c03(N), w01(N), p01(N), marg(N);
    for (int t = 0; t < N; ++t) {
        rc_sweep(m, s, phi, sampler, rng);
        auto c = cluster_labels(m, s.omega);
        bool j01 = c.label[0] == c.label[1];
        c01[t] = j01;
        c03[t] = c.label[0] == c.label[3];
        w01[t] = j01 ? s.a[0] * s.a[1] : 0.0;
        p01[t] = phi[0] * phi[1];
        marg[t] = s.omega[e01] - 0.5 * edge_prob(0.5, s.a[0], s.a[1]) * (1.0 + j01);
    }
    auto a = batch_means(c01), b = batch_means(c03), w = batch_means(w01), p = batch_means(p01), e = batch_means(marg);
    EXPECT_LT(std::abs(a.mean - block_conn01), 3 * a.error);
    EXPECT_LT(std::abs(b.mean - block_conn03), 3 * b.error);
    EXPECT_TRUE(within(w.mean, p.mean, w.error, p.error, 3));
    EXPECT_LT(std::abs(w.mean - block_phi0_phi1), 3 * w.error);
    EXPECT_LT(std::abs(e.mean), 3 * e.error);
}

TEST(Sprinkle, Examples)
{
    auto r = box(2);
    auto m = free_model(r, 0.5, {1, 0});
    Rng rng = make_stream(12, 0);
    std::vector<std::uint8_t> omega(m.edge_count(), 0);
    for (std::size_t e = 0; e < omega.size(); e += 3) omega[e] = 1;
    auto w = omega;
    bernoulli_sprinkle(m, w, 0.0, rng);
    EXPECT_EQ(w, omega);
    bernoulli_sprinkle(m, w, 1.0, rng);
    for (std::size_t e = 0; e < m.internal_edges(); ++e) EXPECT_EQ(w[e], 1);
    for (std::size_t e = m.internal_edges(); e < w.size(); ++e) EXPECT_EQ(w[e], omega[e]);
    auto z = omega;
    bernoulli_sprinkle(m, z, std::vector<double>(r->closed_size(), 0.0), 0.5, 0.9, rng);
    EXPECT_EQ(z, omega);
    auto y = omega;
    bernoulli_sprinkle(m, y, 0.3, rng);
    for (std::size_t e = 0; e < y.size(); ++e) EXPECT_GE(y[e], omega[e]);
}

TEST(Oracle, EdgeMarginalIdentitySingleEdge)
{
    using namespace phi4::oracle;
    auto g = Graph::make(2, {{0, 1}});
    Params p{0.7, {1.0, 0.0}};
    Term open{[](const OmegaView& v) { return v.open(0); }, {}, 1.0};
    auto pe = [](auto a) { return edge_prob(0.7, a[0], a[1]); };
    Term t1{[](const OmegaView& v) { return v.connected(0, 1); }, pe, 0.5};
    Term t2{[](const OmegaView&) { return true; }, pe, 0.5};
    double lhs = exact_rc_probability(g, p, {open});
    double rhs = exact_rc_probability(g, p, {t1, t2});
    EXPECT_NEAR(lhs / rhs, 1.0, 1e-8);
    EXPECT_NEAR(lhs, edge_open, 1e-12);
}

TEST(Oracle, WiredDominatesFreeForGhostConnection)
{
    using namespace phi4::oracle;
    std::vector<std::vector<Edge>> graphs = {{}, {{0, 1}}, {{0, 1}, {1, 2}}};
    std::vector<std::size_t> sizes = {1, 2, 3};
    Params p{0.6, {1.0, -0.5}};
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        const std::size_t n = sizes[i];
        auto free_g = Graph::make(n, graphs[i], std::vector<double>(n, 0.3));
        auto wired = free_g;
        wired.b = {1.2};
        wired.xi = {0};
        wired.bedges = {{0, 0}};
        wired.bJ = {1.0};
        auto wired_ghost = [](const OmegaView& v) { return v.to_ghost(0); };
        double pf = exact_rc_probability(free_g, p, {{wired_ghost, {}, 1.0}});
        double pw = exact_rc_probability(wired, p, {{wired_ghost, {}, 1.0}});
        EXPECT_GE(pw, pf - 1e-12) << "n=" << n;
    }
}
