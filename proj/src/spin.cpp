#include "phi4/spin.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace phi4 {

SpinModel::SpinModel(std::shared_ptr<const Region> region, ModelParams params)
    : region_(std::move(region)), params_(std::move(params))
{
    validate(params_.site);
    if (!(params_.beta >= 0.0)) throw std::invalid_argument("beta must be nonnegative");
    const auto& r = *region_;
    J_ = params_.J.empty() ? std::vector<double>(r.edges().size(), 1.0) : params_.J;
    h_ = params_.h.empty() ? std::vector<double>(r.size(), 0.0) : params_.h;
    if (J_.size() != r.edges().size()) throw std::invalid_argument("coupling vector has wrong length");
    if (h_.size() != r.size()) throw std::invalid_argument("field vector has wrong length");
    for (double j : J_)
        if (!(j >= 0.0)) throw std::invalid_argument("couplings must be nonnegative");
}

double SpinModel::tilt(const std::vector<double>& phi, std::size_t x) const
{
    double s = h_[x];
    for (const auto& nb : region_->neighbours(x)) s += J_[nb.edge] * phi[nb.vertex];
    return params_.beta * s;
}

std::string to_string(Schedule s)
{
    switch (s) {
    case Schedule::sequential: return "sequential";
    case Schedule::random: return "random";
    case Schedule::checkerboard: return "checkerboard";
    }
    return "?";
}

Schedule schedule_from_string(const std::string& s)
{
    for (Schedule k : {Schedule::sequential, Schedule::random, Schedule::checkerboard})
        if (to_string(k) == s) return k;
    throw std::invalid_argument("unknown schedule '" + s + "'");
}

double hamiltonian(const SpinModel& m, const SpinConfig& phi)
{
    const auto& r = m.region();
    double e = 0.0;
    for (std::size_t k = 0; k < r.edges().size(); ++k) {
        const auto& ed = r.edges()[k];
        e -= m.J(k) * phi[ed.u] * phi[ed.v];
    }
    for (std::size_t x = 0; x < r.size(); ++x) e -= m.h(x) * phi[x];
    return e;
}

double log_weight(const SpinModel& m, const SpinConfig& phi)
{
    double w = -m.beta() * hamiltonian(m, phi);
    for (double t : phi) w += log_density(t, m.site());
    return w;
}

double log_heatbath_kernel(const SpinModel& m, const SpinConfig& phi, std::size_t x, double s)
{
    return log_density(s, m.site(), m.tilt(phi, x));
}

void heatbath_update(const SpinModel& m, SpinConfig& phi, std::size_t x, TiltedSampler& sampler, Rng& rng)
{
    phi[x] = sampler(m.tilt(phi, x), rng);
}

void heatbath_sweep(const SpinModel& m, SpinConfig& phi, TiltedSampler& sampler, Rng& rng, Schedule schedule)
{
    const std::size_t n = m.size();
    switch (schedule) {
    case Schedule::sequential:
        for (std::size_t x = 0; x < n; ++x) heatbath_update(m, phi, x, sampler, rng);
        break;
    case Schedule::random: {
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (std::size_t k = 0; k < n; ++k) heatbath_update(m, phi, pick(rng), sampler, rng);
        break;
    }
    case Schedule::checkerboard: {
        const auto& r = m.region();
        for (int colour = 0; colour < 2; ++colour)
            for (std::size_t x = 0; x < n; ++x) {
                int s = 0;
                for (int c : r.coord(x)) s += c;
                if (((s % 2) + 2) % 2 == colour) heatbath_update(m, phi, x, sampler, rng);
            }
        break;
    }
    }
}

void heatbath_sweep(const SpinModel& m, SpinConfig& phi, Rng& rng, Schedule schedule)
{
    TiltedSampler sampler(m.site());
    heatbath_sweep(m, phi, sampler, rng, schedule);
}

std::vector<double> langevin_drift(const SpinModel& m, const SpinConfig& phi)
{
    const auto& r = m.region();
    const double beta = m.beta();
    const double g = m.site().g, a = m.site().a;
    std::vector<double> out(r.size());
    for (std::size_t x = 0; x < r.size(); ++x) {
        double lap = 0.0, deg = 0.0;
        for (const auto& nb : r.neighbours(x)) {
            lap += m.J(nb.edge) * (phi[nb.vertex] - phi[x]);
            deg += m.J(nb.edge);
        }
        double t = phi[x];
        double gradU = 4.0 * g * t * t * t + 2.0 * (a - beta * deg / 2.0) * t;
        out[x] = beta * lap - gradU + beta * m.h(x);
    }
    return out;
}

void langevin_step(const SpinModel& m, SpinConfig& phi, double dt, const std::vector<double>& noise)
{
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    auto drift = langevin_drift(m, phi);
    const double s = std::sqrt(2.0 * dt);
    for (std::size_t x = 0; x < phi.size(); ++x) phi[x] += dt * drift[x] + s * noise[x];
}

void langevin_step(const SpinModel& m, SpinConfig& phi, double dt, Rng& rng)
{
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> noise(phi.size());
    for (auto& z : noise) z = normal(rng);
    langevin_step(m, phi, dt, noise);
}

double magnetization(const SpinConfig& phi)
{
    if (phi.empty()) return 0.0;
    return std::accumulate(phi.begin(), phi.end(), 0.0) / static_cast<double>(phi.size());
}

}  // namespace phi4
