#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "phi4/singlesite.hpp"

using namespace phi4;

namespace {

// Reference density on a uniform grid, cumulative by the trapezoid rule.
struct GridLaw {
    double lo, step;
    std::vector<double> cdf;
    double mean = 0.0, second = 0.0;

    GridLaw(const SingleSite& p, double tilt, double lo_, double hi, std::size_t n = 400000) : lo(lo_)
    {
        step = (hi - lo) / static_cast<double>(n);
        std::vector<double> x(n + 1), w(n + 1);
        double peak = -1e300;
        for (std::size_t i = 0; i <= n; ++i) {
            x[i] = lo + step * static_cast<double>(i);
            w[i] = -p.g * std::pow(x[i], 4) - p.a * x[i] * x[i] + tilt * x[i];
            peak = std::max(peak, w[i]);
        }
        for (auto& v : w) v = std::exp(v - peak);
        cdf.assign(n + 1, 0.0);
        double z = 0.0, m1 = 0.0, m2 = 0.0;
        for (std::size_t i = 1; i <= n; ++i) {
            double seg = 0.5 * step * (w[i] + w[i - 1]);
            z += seg;
            m1 += 0.5 * step * (w[i] * x[i] + w[i - 1] * x[i - 1]);
            m2 += 0.5 * step * (w[i] * x[i] * x[i] + w[i - 1] * x[i - 1] * x[i - 1]);
            cdf[i] = z;
        }
        for (auto& c : cdf) c /= z;
        mean = m1 / z;
        second = m2 / z;
    }

    double operator()(double t) const
    {
        double u = (t - lo) / step;
        if (u <= 0) return 0.0;
        auto i = static_cast<std::size_t>(u);
        if (i + 1 >= cdf.size()) return 1.0;
        double f = u - static_cast<double>(i);
        return cdf[i] * (1 - f) + cdf[i + 1] * f;
    }
};

double ks_statistic(std::vector<double> xs, const GridLaw& F)
{
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double D = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double c = F(xs[i]);
        D = std::max({D, c - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - c});
    }
    return D;
}

const double gamma_ratio = std::tgamma(0.75) / std::tgamma(0.25);

}  // namespace

TEST(LogDensity, Values)
{
    SingleSite p{1.0, 0.0};
    EXPECT_EQ(log_density(0.0, p), 0.0);
    EXPECT_EQ(log_density(1.0, p), -1.0);
    SingleSite q{0.7, -1.3};
    for (double t : {-2.0, -0.3, 0.0, 0.9, 1.7})
        for (double tilt : {-4.0, 0.0, 2.5}) EXPECT_DOUBLE_EQ(log_density(-t, q, tilt), log_density(t, q, -tilt));
}

TEST(SingleSite, Validate)
{
    EXPECT_THROW(validate({0.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(validate({-1.0, 1.0}), std::invalid_argument);
    EXPECT_NO_THROW(validate({1.0, -5.0}));
}

TEST(Cubic, RootsAreRoots)
{
    std::array<double, 3> r{};
    int n = cubic_roots(1.0, -6.0, 11.0, -6.0, r);
    ASSERT_EQ(n, 3);
    EXPECT_NEAR(r[0], 1.0, 1e-12);
    EXPECT_NEAR(r[1], 2.0, 1e-12);
    EXPECT_NEAR(r[2], 3.0, 1e-12);
    n = cubic_roots(4.0, 0.0, 0.0, -10.0, r);
    ASSERT_EQ(n, 1);
    EXPECT_NEAR(r[0], std::cbrt(2.5), 1e-12);
}

TEST(Mode, MaximisesDensity)
{
    for (SingleSite p : {SingleSite{1, 0}, SingleSite{1, -2}, SingleSite{0.5, 1.5}}) {
        for (double tilt : {-3.0, -0.1, 0.0, 0.7, 10.0}) {
            double m = mode(p, tilt);
            for (double dt = -3; dt <= 3; dt += 0.01)
                EXPECT_GE(log_density(m, p, tilt) + 1e-12, log_density(m + dt, p, tilt));
        }
    }
}

TEST(Moment, Basics)
{
    SingleSite p{1.0, 0.0};
    EXPECT_EQ(moment(0, p), 1.0);
    EXPECT_EQ(moment(3, p), 0.0);
    EXPECT_EQ(moment(7, SingleSite{1.0, -1.0}), 0.0);
    EXPECT_NEAR(moment(2, p), gamma_ratio, 1e-9);
    EXPECT_THROW(moment(-2, p), std::invalid_argument);
}

TEST(Moment, ClosedFormsForPureQuartic)
{
    // <t^{2j}> = Gamma((2j+1)/4) / Gamma(1/4) for g = 1, a = 0.
    SingleSite p{1.0, 0.0};
    for (int j = 1; j <= 6; ++j)
        EXPECT_NEAR(moment(2 * j, p) / (std::tgamma((2 * j + 1) / 4.0) / std::tgamma(0.25)), 1.0, 1e-10) << j;
}

TEST(Moment, AgainstGrid)
{
    SingleSite p{1.0, -1.0};
    GridLaw F(p, 0.0, -5.0, 5.0);
    EXPECT_NEAR(moment(2, p), F.second, 1e-8);
}

TEST(Moment, CauchySchwarz)
{
    for (SingleSite p : {SingleSite{1, 0}, SingleSite{1, -1}, SingleSite{2, 1.5}})
        for (int k = 1; k <= 3; ++k)
            EXPECT_LE(std::pow(moment(2 * k, p), 2), moment(2 * k - 2, p) * moment(2 * k + 2, p) * (1 + 1e-12));
}

TEST(Cutoff, TailMassNegligible)
{
    for (SingleSite p : {SingleSite{1, 0}, SingleSite{1, -3}, SingleSite{0.2, 1}})
        for (double tilt : {0.0, 5.0, -20.0}) {
            double T = cutoff(p, tilt);
            double m = mode(p, tilt);
            EXPECT_GE(T, 3.0);
            EXPECT_LT(log_density(T, p, tilt) - log_density(m, p, tilt), -36.0);
            EXPECT_LT(log_density(-T, p, tilt) - log_density(m, p, tilt), -36.0);
        }
}

TEST(Sampler, SymmetricMean)
{
    SingleSite p{1.0, 0.0};
    Rng rng = make_stream(11, 0);
    TiltedSampler s(p);
    const int N = 1000000;
    double m1 = 0, m2 = 0;
    for (int i = 0; i < N; ++i) {
        double x = s(0.0, rng);
        m1 += x;
        m2 += x * x;
    }
    m1 /= N;
    m2 /= N;
    EXPECT_LT(std::abs(m1), 5 * std::sqrt(m2 / N));
}

TEST(Sampler, SecondMoment)
{
    SingleSite p{1.0, 0.0};
    Rng rng = make_stream(12, 0);
    const int N = 1000000;
    double m2 = 0, m4 = 0;
    for (int i = 0; i < N; ++i) {
        double x = sample_tilted(p, 0.0, rng);
        m2 += x * x;
        m4 += x * x * x * x;
    }
    m2 /= N;
    m4 /= N;
    EXPECT_LT(std::abs(m2 - gamma_ratio), 5 * std::sqrt((m4 - m2 * m2) / N));
}

TEST(Sampler, LargeTiltMean)
{
    SingleSite p{1.0, 0.0};
    GridLaw F(p, 10.0, -4.0, 6.0);
    EXPECT_NEAR(F.mean, 1.357, 0.05);
    Rng rng = make_stream(13, 0);
    TiltedSampler s(p);
    const int N = 1000000;
    double m1 = 0, m2 = 0;
    for (int i = 0; i < N; ++i) {
        double x = s(10.0, rng);
        m1 += x;
        m2 += x * x;
    }
    m1 /= N;
    m2 /= N;
    EXPECT_LT(std::abs(m1 - F.mean), 5 * std::sqrt((m2 - m1 * m1) / N));
}

TEST(Sampler, KolmogorovSmirnovGrid)
{
    const int N = 20000;
    const double critical = 1.9495 / std::sqrt(N);  // asymptotic 1e-3 level
    std::uint64_t stream = 0;
    for (SingleSite p : {SingleSite{1, 0}, SingleSite{1, -2}, SingleSite{0.3, -1}, SingleSite{2, 1}}) {
        for (double tilt : {-20.0, -3.0, 0.0, 0.5, 8.0, 20.0}) {
            double m = mode(p, tilt), T = cutoff(p, tilt);
            GridLaw F(p, tilt, std::min(-T, m - T), std::max(T, m + T), 200000);
            Rng rng = make_stream(99, stream++);
            TiltedSampler s(p);
            std::vector<double> xs(N);
            for (auto& x : xs) x = s(tilt, rng);
            EXPECT_LT(ks_statistic(xs, F), critical) << "g=" << p.g << " a=" << p.a << " tilt=" << tilt;
        }
    }
}

TEST(Sampler, AcceptanceBoundedBelow)
{
    for (SingleSite p : {SingleSite{1, 0}, SingleSite{1, -4}, SingleSite{0.1, -1}, SingleSite{1, 5}})
        for (double tilt : {0.0, 1.0, 20.0}) {
            double acc = acceptance_rate(p, tilt);
            EXPECT_GT(acc, 0.05);
            EXPECT_LE(acc, 1.0 + 1e-9);
        }
}

TEST(Sampler, EmpiricalAcceptanceMatchesQuadrature)
{
    SingleSite p{1.0, -1.0};
    Rng rng = make_stream(5, 0);
    TiltedSampler s(p);
    for (int i = 0; i < 200000; ++i) s(1.5, rng);
    double emp = static_cast<double>(s.draws()) / static_cast<double>(s.proposals());
    EXPECT_NEAR(emp, acceptance_rate(p, 1.5), 0.01);
}

TEST(Streams, DistinctAndReproducible)
{
    auto a = make_stream(1, 0), b = make_stream(1, 0), c = make_stream(1, 1);
    EXPECT_EQ(a(), b());
    EXPECT_NE(make_stream(1, 0)(), c());
}
