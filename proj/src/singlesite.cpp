#include "phi4/singlesite.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace phi4 {

Rng make_stream(std::uint64_t master, std::uint64_t index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                      0x5eedu};
    return Rng(seq);
}

void validate(const SingleSite& p)
{
    if (!(p.g > 0.0) || !std::isfinite(p.g)) throw std::invalid_argument("single-site g must be positive");
    if (!std::isfinite(p.a)) throw std::invalid_argument("single-site a must be finite");
}

int cubic_roots(double c3, double c2, double c1, double c0, std::array<double, 3>& out)
{
    const double b = c2 / c3, c = c1 / c3, d = c0 / c3;
    // x = y - b/3: y^3 + p y + q = 0
    const double p = c - b * b / 3.0;
    const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    const double shift = -b / 3.0;
    const double disc = q * q / 4.0 + p * p * p / 27.0;
    int n = 0;
    if (disc > 0.0) {
        double s = std::sqrt(disc);
        double u = std::cbrt(-q / 2.0 + s);
        double v = std::cbrt(-q / 2.0 - s);
        out[n++] = u + v + shift;
    } else if (p == 0.0) {
        out[n++] = shift;
    } else {
        double r = std::sqrt(-p / 3.0);
        double arg = std::clamp(3.0 * q / (2.0 * p * r), -1.0, 1.0);
        double phi = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k)
            out[n++] = 2.0 * r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0) + shift;
    }
    for (int i = 0; i < n; ++i) {
        double x = out[i];
        for (int it = 0; it < 3; ++it) {
            double f = ((c3 * x + c2) * x + c1) * x + c0;
            double df = (3.0 * c3 * x + 2.0 * c2) * x + c1;
            if (df == 0.0) break;
            double nx = x - f / df;
            if (!std::isfinite(nx)) break;
            x = nx;
        }
        out[i] = x;
    }
    std::sort(out.begin(), out.begin() + n);
    return n;
}

double mode(const SingleSite& p, double tilt)
{
    std::array<double, 3> r{};
    int n = cubic_roots(4.0 * p.g, 0.0, 2.0 * p.a, -tilt, r);
    double best = r[0];
    for (int i = 1; i < n; ++i)
        if (log_density(r[i], p, tilt) > log_density(best, p, tilt)) best = r[i];
    return best;
}

double cutoff(const SingleSite& p, double tilt, int k)
{
    double T = 3.0;
    for (int it = 0; it < 2; ++it) {
        double rhs = 40.0 + std::abs(p.a) * T * T + std::abs(tilt) * T + k * std::log(std::max(T, 1.0));
        T = std::max(3.0, std::pow(rhs / p.g, 0.25));
    }
    // The mode must sit well inside the window.
    double m = std::abs(mode(p, tilt));
    return std::max(T, m + 3.0);
}

namespace {

template <class F>
double integrate(F f, double lo, double hi)
{
    using boost::math::quadrature::gauss_kronrod;
    double err = 0.0;
    return gauss_kronrod<double, 61>::integrate(f, lo, hi, 20, 1e-15, &err);
}

}  // namespace

double moment(int k, const SingleSite& p)
{
    if (k < 0) throw std::invalid_argument("moment order must be nonnegative");
    if (k % 2 == 1) return 0.0;
    if (k == 0) return 1.0;
    validate(p);
    double T = cutoff(p, 0.0, k);
    // Rescale by the peak of t^k e^{-g t^4 - a t^2} to keep both integrals O(1).
    auto logw = [&](double t) { return k * std::log(t) + log_density(t, p); };
    double peak = 0.0;
    {
        double lo = 1e-6, hi = T;
        for (int it = 0; it < 200; ++it) {
            double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
            if (logw(m1) < logw(m2)) lo = m1; else hi = m2;
        }
        peak = logw(0.5 * (lo + hi));
    }
    double base = log_density(mode(p, 0.0), p);
    double num = integrate([&](double t) { return t > 0.0 ? std::exp(logw(t) - peak) : 0.0; }, 0.0, T);
    double den = integrate([&](double t) { return std::exp(log_density(t, p) - base); }, 0.0, T);
    return std::exp(peak - base) * num / den;
}

double proposal_precision(const SingleSite& p, double tilt)
{
    std::array<double, 3> r{};
    int n = cubic_roots(2.0, -2.0 * p.a, -2.0 * p.g, -p.g * tilt * tilt, r);
    double A = r[n - 1];
    double floor = std::max(p.a, 0.0);
    if (!(A > floor)) A = floor + 1e-12 + 1e-9 * std::abs(floor);
    return A;
}

double acceptance_rate(const SingleSite& p, double tilt)
{
    double A = proposal_precision(p, tilt);
    double T = cutoff(p, tilt);
    double m = mode(p, tilt);
    double base = log_density(m, p, tilt);
    double zf = integrate([&](double t) { return std::exp(log_density(t, p, tilt) - base); }, -T, T);
    double C = (A - p.a) * (A - p.a) / (4.0 * p.g);
    double logzq = 0.5 * std::log(std::numbers::pi / A) + tilt * tilt / (4.0 * A);
    return std::exp(std::log(zf) + base - logzq - C);
}

TiltedSampler::TiltedSampler(const SingleSite& p) : p_(p), normal_(0.0, 1.0), unif_(0.0, 1.0)
{
    validate(p);
}

double TiltedSampler::operator()(double tilt, Rng& rng)
{
    const double A = proposal_precision(p_, tilt);
    const double mu = tilt / (2.0 * A);
    const double sigma = 1.0 / std::sqrt(2.0 * A);
    const double t0 = (A - p_.a) / (2.0 * p_.g);
    ++draws_;
    for (;;) {
        ++proposals_;
        double t = mu + sigma * normal_(rng);
        double dev = t * t - t0;
        double u = unif_(rng);
        if (u <= std::exp(-p_.g * dev * dev)) return t;
    }
}

double sample_tilted(const SingleSite& p, double tilt, Rng& rng)
{
    TiltedSampler s(p);
    return s(tilt, rng);
}

}  // namespace phi4
