#pragma once

#include <memory>
#include <string>
#include <vector>

#include "phi4/lattice.hpp"
#include "phi4/singlesite.hpp"

namespace phi4 {

struct ModelParams {
    double beta = 0.0;
    SingleSite site;
    std::vector<double> J;  // per internal edge; empty means J = 1
    std::vector<double> h;  // per vertex of Lambda; empty means h = 0
};

// A phi^4 measure on a region, with flattened coupling tables.
class SpinModel {
public:
    SpinModel(std::shared_ptr<const Region> region, ModelParams params);

    const Region& region() const { return *region_; }
    std::shared_ptr<const Region> region_ptr() const { return region_; }
    const ModelParams& params() const { return params_; }
    double beta() const { return params_.beta; }
    const SingleSite& site() const { return params_.site; }
    double J(std::size_t e) const { return J_[e]; }
    double h(std::size_t v) const { return h_[v]; }
    const std::vector<double>& field() const { return h_; }
    std::size_t size() const { return region_->size(); }

    // beta (sum_{y ~ x, y in Lambda} J_xy phi_y + h_x)
    double tilt(const std::vector<double>& phi, std::size_t x) const;

private:
    std::shared_ptr<const Region> region_;
    ModelParams params_;
    std::vector<double> J_, h_;
};

using SpinConfig = std::vector<double>;

enum class Schedule { sequential, random, checkerboard };

std::string to_string(Schedule s);
Schedule schedule_from_string(const std::string& s);

double hamiltonian(const SpinModel& m, const SpinConfig& phi);

// log of the unnormalised density: -beta H - sum (g phi^4 + a phi^2)
double log_weight(const SpinModel& m, const SpinConfig& phi);

// Unnormalised log of the heat-bath kernel p(phi, x; s).
double log_heatbath_kernel(const SpinModel& m, const SpinConfig& phi, std::size_t x, double s);

void heatbath_update(const SpinModel& m, SpinConfig& phi, std::size_t x, TiltedSampler& sampler, Rng& rng);
void heatbath_sweep(const SpinModel& m, SpinConfig& phi, Rng& rng, Schedule schedule = Schedule::sequential);
void heatbath_sweep(const SpinModel& m, SpinConfig& phi, TiltedSampler& sampler, Rng& rng, Schedule schedule);

// beta Delta phi - grad U, with U = sum (g phi^4 + (a - beta deg(x)/2) phi^2)
std::vector<double> langevin_drift(const SpinModel& m, const SpinConfig& phi);

// Euler-Maruyama step with the given standard-normal noise.
void langevin_step(const SpinModel& m, SpinConfig& phi, double dt, const std::vector<double>& noise);
void langevin_step(const SpinModel& m, SpinConfig& phi, double dt, Rng& rng);

double magnetization(const SpinConfig& phi);

}  // namespace phi4
