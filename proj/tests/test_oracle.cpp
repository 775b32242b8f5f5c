#include <gtest/gtest.h>

#include <cmath>

#include "phi4/oracle.hpp"

using namespace phi4;
using namespace phi4::oracle;

namespace {

// Independent quadrature reference for the single-edge graph with J = 1, h = 0,
// g = 1, a = 0, beta = 0.7: <phi_x phi_y>.
constexpr double edge_two_point = 0.0813029783796977;

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

Term on(std::function<bool(const OmegaView&)> f, std::function<double(std::span<const double>)> w = {})
{
    return Term{std::move(f), std::move(w), 1.0};
}

struct Instance {
    Graph g;
    std::string name;
};

std::vector<Instance> small_graphs(double h)
{
    std::vector<Instance> out;
    auto add = [&](std::size_t n, std::vector<Edge> e, std::string name) {
        out.push_back({Graph::make(n, std::move(e), std::vector<double>(n, h)), name});
    };
    add(1, {}, "vertex");
    add(2, {}, "two vertices");
    add(2, {{0, 1}}, "edge");
    add(3, {{0, 1}}, "edge plus vertex");
    add(3, {{0, 1}, {1, 2}}, "path");
    add(3, {{0, 1}, {1, 2}, {0, 2}}, "triangle");
    return out;
}

std::vector<double> product_law(const std::vector<double>& p)
{
    std::vector<double> law(std::size_t{1} << p.size(), 1.0);
    for (std::size_t w = 0; w < law.size(); ++w)
        for (std::size_t e = 0; e < p.size(); ++e) law[w] *= ((w >> e) & 1u) ? p[e] : 1.0 - p[e];
    return law;
}

}  // namespace

TEST(SpinOracle, Examples)
{
    auto v = Graph::make(1, {});
    EXPECT_NEAR(exact_spin_expectation(v, {0.4, {1, 0}}, [](auto phi) { return phi[0]; }), 0.0, 1e-14);
    EXPECT_NEAR(exact_spin_expectation(v, {0.4, {1, 0}}, [](auto phi) { return phi[0] * phi[0]; }),
                std::tgamma(0.75) / std::tgamma(0.25), 1e-10);
    auto e = Graph::make(2, {{0, 1}});
    EXPECT_NEAR(exact_spin_expectation(e, {0.0, {1, 0}}, [](auto phi) { return phi[0] * phi[1]; }), 0.0, 1e-14);
    EXPECT_NEAR(exact_spin_expectation(e, {0.7, {1, 0}}, [](auto phi) { return phi[0] * phi[1]; }),
                edge_two_point, 1e-12);
}

TEST(SpinOracle, RejectsLargeGraphs)
{
    auto g = Graph::make(5, {});
    EXPECT_THROW(exact_spin_expectation(g, {0.1, {1, 0}}, [](auto) { return 1.0; }), SizeError);
    Region r({Shape::box, 2, 1, 0, {}});
    auto big = Graph::from_region(r, {0.1, {1, 0}, {}, {}}, BoundaryCondition::free(r));
    EXPECT_THROW(check_spin_size(big), SizeError);
}

TEST(RcOracle, Examples)
{
    auto e = Graph::make(2, {{0, 1}});
    Params p{0.7, {1, 0}};
    EXPECT_NEAR(exact_rc_probability(e, p, {on([](const OmegaView&) { return true; })}), 1.0, 1e-14);
    EXPECT_NEAR(exact_rc_probability(e, {0.0, {1, 0}}, {on([](const OmegaView& v) { return v.open(0); })}), 0.0,
                1e-15);
    double rc = exact_rc_probability(
        e, p, {on([](const OmegaView& v) { return v.connected(0, 1); }, [](auto a) { return a[0] * a[1]; })});
    EXPECT_LT(rel(rc, edge_two_point), 1e-8);
    auto law = exact_edge_law(e, p);
    ASSERT_EQ(law.size(), 2u);
    EXPECT_NEAR(law[0] + law[1], 1.0, 1e-14);
}

TEST(RcOracle, RejectsTooManyLiveEdges)
{
    // four vertices, complete graph: 6 internal + 4 ghost edges
    auto g = Graph::make(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}, {1, 1, 1, 1});
    EXPECT_THROW(exact_rc_probability(g, {0.1, {1, 0}}, {on([](const OmegaView&) { return true; })}), SizeError);
}

TEST(RcOracle, EdwardsSokalIdentitiesOnSmallGraphs)
{
    for (double h : {0.0, 0.3}) {
        for (const auto& inst : small_graphs(h)) {
            if (inst.g.edges.size() > 2) continue;
            for (double beta : {0.3, 0.7}) {
                Params p{beta, {1.0, -0.5}};
                const auto& g = inst.g;
                std::vector<Observable> fs;
                std::vector<Event> evs;
                for (std::uint32_t x = 0; x < g.n; ++x) {
                    fs.push_back([x](auto phi) { return phi[x]; });
                    evs.push_back({on([x](const OmegaView& v) { return v.to_ghost(x); }, [x](auto a) { return a[x]; })});
                    fs.push_back([x](auto phi) { return phi[x] >= 0 ? 1.0 : -1.0; });
                    evs.push_back({on([x](const OmegaView& v) { return v.to_ghost(x); })});
                    for (std::uint32_t y = x + 1; y < g.n; ++y) {
                        fs.push_back([x, y](auto phi) { return phi[x] * phi[y]; });
                        evs.push_back({on([x, y](const OmegaView& v) { return v.connected(x, y); },
                                          [x, y](auto a) { return a[x] * a[y]; })});
                        fs.push_back([x, y](auto phi) { return (phi[x] >= 0) == (phi[y] >= 0) ? 1.0 : -1.0; });
                        evs.push_back({on([x, y](const OmegaView& v) { return v.connected(x, y); })});
                    }
                }
                auto spin = exact_spin_expectations(g, p, fs);
                auto rc = exact_rc_expectations(g, p, evs);
                for (std::size_t i = 0; i < fs.size(); ++i) {
                    if (std::abs(spin[i]) < 1e-12) EXPECT_NEAR(rc[i], 0.0, 1e-10) << inst.name << " " << i;
                    else EXPECT_LT(rel(rc[i], spin[i]), 1e-8) << inst.name << " h=" << h << " i=" << i;
                }
            }
        }
    }
}

TEST(Partition, IdentitiesOnSmallGraphs)
{
    Rng rng = make_stream(1, 0);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (double h : {0.0, 0.3}) {
        for (const auto& inst : small_graphs(h)) {
            for (double beta : {0.2, 0.7}) {
                std::vector<double> a(inst.g.n);
                for (auto& v : a) v = u(rng);
                auto rep = partition_identities(inst.g, {beta, {1.0, -1.0}}, a);
                EXPECT_NEAR(rep.ratio, 2.0, 2e-8) << inst.name << " h=" << h << " beta=" << beta;
                EXPECT_LT(rep.fk_gap, 1e-10) << inst.name;
            }
        }
    }
}

TEST(Partition, Examples)
{
    auto v = Graph::make(1, {});
    for (double beta : {0.0, 0.5, 3.0}) EXPECT_NEAR(partition_identities(v, {beta, {1, 0}}, std::vector<double>{1.0}).ratio, 2.0, 2e-8);
    auto e = Graph::make(2, {{0, 1}});
    auto rep = partition_identities(e, {0.7, {1, 0}}, std::vector<double>{1.0, 1.0});
    EXPECT_NEAR(rep.ratio, 2.0, 2e-8);
    EXPECT_LT(rep.fk_gap, 1e-10);
    EXPECT_LT(rel(rep.z_ising, rep.z_fk), 1e-10);
}

TEST(Partition, WiredBoundary)
{
    auto g = Graph::make(2, {{0, 1}}, {0.2, 0.0});
    g.b = {0.8, 0.8};
    g.xi = {0, 0};
    g.bedges = {{0, 0}, {1, 1}};
    g.bJ = {1.0, 1.0};
    auto rep = partition_identities(g, {0.5, {1, -0.5}}, std::vector<double>{0.7, 1.3});
    EXPECT_NEAR(rep.ratio, 2.0, 2e-8);
    EXPECT_LT(rep.fk_gap, 1e-10);
}

TEST(Currents, Examples)
{
    auto vg = Graph::make(1, {}, {1.0});
    Params p{1.0, {1, 0}};
    auto empty = current_expansion_check(vg, p, {0}, 40);
    EXPECT_EQ(empty.value, 1.0);
    auto r = current_expansion_check(vg, p, {1}, 40);
    EXPECT_LT(r.gap, 1e-6);
    EXPECT_GT(r.reference, 0.0);

    auto e = Graph::make(2, {{0, 1}});
    EXPECT_EQ(current_expansion_check(e, {0.0, {1, 0}}, {1, 1}, 20).value, 0.0);
}

TEST(Currents, GapNonincreasingInTruncation)
{
    struct Case {
        Graph g;
        Params p;
        std::vector<int> A;
    };
    std::vector<Case> cases = {
        {Graph::make(1, {}, {1.0}), {1.0, {1, 0}}, {1}},
        {Graph::make(2, {{0, 1}}), {0.5, {1, -0.5}}, {1, 1}},
        {Graph::make(2, {{0, 1}}, {0.4, 0.0}), {0.6, {1, 0}}, {1, 0}},
    };
    for (const auto& c : cases) {
        double prev = 1e300;
        for (int nmax : {10, 20, 40}) {
            auto r = current_expansion_check(c.g, c.p, c.A, nmax);
            EXPECT_LE(r.gap, prev + 1e-15) << nmax;
            prev = r.gap;
        }
        EXPECT_LT(prev, 1e-6);
    }
}

TEST(Currents, MomentIdentity)
{
    auto e = Graph::make(2, {{0, 1}});
    auto none = current_moment_check(e, {0.3, {1, 0}}, {}, 40);
    EXPECT_NEAR(none.value, 1.0, 1e-15);
    EXPECT_NEAR(none.reference, 1.0, 1e-12);
    auto zero = current_moment_check(e, {0.0, {1, 0}}, {0}, 40);
    EXPECT_NEAR(zero.value, 1.0, 1e-15);
    EXPECT_NEAR(zero.reference, 1.0, 1e-12);
    auto r = current_moment_check(e, {0.3, {1, 0}}, {0}, 40);
    EXPECT_LT(r.gap, 1e-6);
    auto gh = current_moment_check(Graph::make(2, {{0, 1}}, {0.5, 0.5}), {0.3, {1, 0}}, {0, 1}, 30);
    EXPECT_LT(gh.gap, 1e-6);
}

TEST(Domination, Examples)
{
    auto l = product_law({0.3, 0.8});
    EXPECT_TRUE(stochastic_domination_check(l, l).holds);
    EXPECT_TRUE(stochastic_domination_check(product_law({0.6, 0.6}), product_law({0.5, 0.5})).holds);
    auto bad = stochastic_domination_check(product_law({0.5, 0.5}), product_law({0.6, 0.6}));
    EXPECT_FALSE(bad.holds);
    EXPECT_FALSE(bad.witness.empty());
    EXPECT_THROW(stochastic_domination_check(std::vector<double>(32, 1.0 / 32), std::vector<double>(32, 1.0 / 32)),
                 std::invalid_argument);
}

TEST(Domination, AgreesWithCoordinatewiseCriterionOnProducts)
{
    Rng rng = make_stream(2, 0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t E = 1 + trial % 4;
        std::vector<double> p(E), q(E);
        bool coord = true;
        for (std::size_t e = 0; e < E; ++e) {
            p[e] = u(rng);
            q[e] = trial % 2 ? std::max(0.0, p[e] - 0.1 * u(rng)) : u(rng);
            coord = coord && p[e] >= q[e];
        }
        EXPECT_EQ(stochastic_domination_check(product_law(p), product_law(q)).holds, coord) << trial;
    }
}

TEST(Domination, SprinklingOnSingleEdge)
{
    auto e = Graph::make(2, {{0, 1}});
    auto hi = exact_edge_law(e, {0.6, {1, 0}});
    auto lo = sprinkled_law(exact_edge_law(e, {0.5, {1, 0}}), 1e-3);
    EXPECT_TRUE(stochastic_domination_check(hi, lo).holds);
    auto control = sprinkled_law(exact_edge_law(e, {0.59, {1, 0}}), 0.99);
    EXPECT_FALSE(stochastic_domination_check(hi, control).holds);
}

TEST(Domination, SprinkledLawIsNormalised)
{
    auto law = product_law({0.2, 0.7, 0.4});
    auto s = sprinkled_law(law, 0.3);
    double total = 0.0;
    for (double v : s) total += v;
    EXPECT_NEAR(total, 1.0, 1e-14);
    auto same = product_law({1 - 0.8 * 0.7, 1 - 0.3 * 0.7, 1 - 0.6 * 0.7});
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(s[i], same[i], 1e-14);
}
