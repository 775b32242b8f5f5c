#pragma once

#include <array>
#include <cstdint>
#include <random>

namespace phi4 {

using Rng = std::mt19937_64;

// Independent stream for chain `index` of a run seeded with `master`.
Rng make_stream(std::uint64_t master, std::uint64_t index);

struct SingleSite {
    double g = 1.0;
    double a = 0.0;
};

void validate(const SingleSite& p);

// -g t^4 - a t^2 + tilt t
inline double log_density(double t, const SingleSite& p, double tilt = 0.0)
{
    double t2 = t * t;
    return -p.g * t2 * t2 - p.a * t2 + tilt * t;
}

// Real roots of c3 x^3 + c2 x^2 + c1 x + c0 (c3 != 0), ascending; returns count.
int cubic_roots(double c3, double c2, double c1, double c0, std::array<double, 3>& out);

// Global maximiser of log_density.
double mode(const SingleSite& p, double tilt);

// Truncation point: T = max(3, ((40 + |a| T^2 + |tilt| T + k ln T) / g)^{1/4}),
// two fixed-point iterations (k is an extra polynomial weight t^k).
double cutoff(const SingleSite& p, double tilt = 0.0, int k = 0);

// <t^k> under the normalised single-site measure.
double moment(int k, const SingleSite& p);

// Gaussian proposal precision A for the tilted sampler: the largest root of
// 2A^3 - 2aA^2 - 2gA - g tilt^2 = 0.
double proposal_precision(const SingleSite& p, double tilt);

// Expected acceptance probability of the tilted sampler (by quadrature).
double acceptance_rate(const SingleSite& p, double tilt);

// Exact sampler for the density proportional to exp(log_density(t, p, tilt)).
// Proposal N(tilt/(2A), 1/(2A)), accepted with probability
// exp(-g (t^2 - (A-a)/(2g))^2) <= 1.
class TiltedSampler {
public:
    explicit TiltedSampler(const SingleSite& p);
    double operator()(double tilt, Rng& rng);
    const SingleSite& params() const { return p_; }
    std::uint64_t proposals() const { return proposals_; }
    std::uint64_t draws() const { return draws_; }

private:
    SingleSite p_;
    std::normal_distribution<double> normal_;
    std::uniform_real_distribution<double> unif_;
    std::uint64_t proposals_ = 0, draws_ = 0;
};

double sample_tilted(const SingleSite& p, double tilt, Rng& rng);

}  // namespace phi4
