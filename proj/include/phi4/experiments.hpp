#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "phi4/analysis.hpp"
#include "phi4/events.hpp"
#include "phi4/randomcluster.hpp"

namespace phi4 {

inline constexpr const char* version = "0.1.0";

enum class SamplerType { heatbath, langevin, rc };
std::string to_string(SamplerType s);
SamplerType sampler_from_string(const std::string& s);

struct McmcSpec {
    SamplerType sampler = SamplerType::rc;
    std::size_t burn_in = 1000;
    std::size_t sweeps = 10000;  // recorded sweeps per chain, before thinning
    std::size_t thin = 1;
    double dt = 1e-3;  // Langevin step; one step per sweep
    Schedule schedule = Schedule::sequential;
    std::uint64_t seed = 1;
    std::size_t chains = 1;
    std::size_t threads = 1;
};

// Target measure: region, model (h encodes boundary fields); free bc.
struct SamplerSpec {
    std::shared_ptr<const Region> region;
    ModelParams model;
};

struct RunMeta {
    std::uint64_t seed = 0;
    std::map<std::string, std::string> params;
    double wall_seconds = 0.0;
};

struct EstimateResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t samples = 0;
    double tau_int = 0.5;
    bool converged = true;
    std::string flag;  // empty when nothing to report
    RunMeta meta;
};

// One recorded state. rc and model are set for the rc sampler only.
struct Sample {
    const SpinConfig& phi;
    const RCState* rc = nullptr;
    const RCModel* model = nullptr;
};
using SampleObservable = std::function<double(const Sample&)>;

// Raw series: [chain][observable][recorded sample].
using Series = std::vector<std::vector<std::vector<double>>>;
Series sample_series(const SamplerSpec& spec, const std::vector<SampleObservable>& obs, const McmcSpec& mc);

// Mean, error (larger of binning and tau_int errors) and tau_int of one
// observable pooled over chains.
EstimateResult summarize(const Series& s, std::size_t observable, const McmcSpec& mc);

std::vector<EstimateResult> estimate_observables(const SamplerSpec& spec, const std::vector<SampleObservable>& obs,
                                                 const McmcSpec& mc);
EstimateResult estimate_observable(const SamplerSpec& spec, const SampleObservable& obs, const McmcSpec& mc);

// Observables.
SampleObservable magnetization_observable();
SampleObservable spin_observable(std::size_t x);
SampleObservable spin_product_observable(std::size_t x, std::size_t y);

std::size_t origin_index(const Region& r);
std::shared_ptr<const Region> make_box(int d, int n);

// <phi_0> on Lambda_L under a plus-approximating field.
EstimateResult estimate_m_star(double beta, int L, FieldKind kind, const SingleSite& site, const McmcSpec& mc,
                               int d = 2, double c0 = 1.0);

// Binder cumulant 1 - <m^4> / (3 <m^2>^2) on the free box Lambda_n.
EstimateResult binder_cumulant(double beta, int n, const SingleSite& site, const McmcSpec& mc, int d = 2);

struct BetaCResult {
    double beta_c = 0.0;
    std::vector<std::pair<int, int>> pairs;
    std::vector<double> crossings;  // per consecutive pair
    double spread = 0.0;
    bool crossed = true;
    std::string flag;
};

BetaCResult estimate_beta_c(const SingleSite& site, const std::vector<int>& sizes, const McmcSpec& mc,
                            double lo, double hi, double resolution = 1e-2, int d = 2);

struct ModelFit {
    int power = 0;  // exponent k in log P = alpha - c n^k
    double c = 0.0;
    double alpha = 0.0;
    double residual = 0.0;
};

struct ScalingFit {
    std::vector<int> sizes;
    std::vector<double> logp;
    std::vector<double> logp_err;
    std::vector<EstimateResult> prob;
    ModelFit surface, volume;  // powers d-1 and d
    int preferred = 0;
    std::string flag;
};

struct LdpScan {
    double beta = 0.0, m_star = 0.0, delta = 0.0;
    ScalingFit lower, upper;
};

// P[|m| <= m* - delta] and P[m >= m* + delta] on free boxes Lambda_n.
LdpScan scan_ldp(double beta, double m_star, double delta_fraction, const std::vector<int>& sizes,
                 const SingleSite& site, const McmcSpec& mc, int d = 2);

// Weighted fits of log P against n^{d-1} and n^d.
void fit_scaling(ScalingFit& f, int d);

// -log P[ghosts disconnected] / L^{d-1} on R(L,M) with the thick ++ field.
EstimateResult estimate_surface_tension(double beta, int L, int M, const SingleSite& site, const McmcSpec& mc,
                                        int d = 2);

struct UniquenessRow {
    int L = 0;
    std::string bc;
    EstimateResult estimate;
    double ess = 0.0;  // samples / (2 max tau_int over companion observables)
};

struct UniquenessScan {
    std::vector<UniquenessRow> rows;
    std::vector<int> Ls;
    std::vector<double> min_value, min_error, min_ess;
};

// U(L) frequency on Lambda_10L for bc in {free, thick_plus, plus_max}.
UniquenessScan scan_local_uniqueness(double beta, const std::vector<int>& Ls, const std::vector<std::string>& bcs,
                                     const SingleSite& site, const McmcSpec& mc, int d = 2);

// Cubic smoothstep ramp from -1 to 1 on [-m, m].
double chi(double u, double m);

struct GapSeries {
    std::vector<double> dirichlet;  // per sample: (1/2) sum_x int p (f - f')^2 ds
    std::vector<double> f;
};

struct GapResult {
    EstimateResult ratio;
    double dirichlet = 0.0, dirichlet_error = 0.0;
    double variance = 0.0, variance_error = 0.0;
    double m = 0.0;
    double chi_slope = 0.0;  // sup |chi'|
    GapSeries series;
};

// Per-configuration Dirichlet integrand for f = scale * chi_m(m_Lambda).
double dirichlet_integrand(const SpinModel& model, const SpinConfig& phi, double m, double scale = 1.0);

// Ratio of mean Dirichlet integrand to variance of f, with jackknife error.
Jackknife dirichlet_ratio(const GapSeries& s, double scale = 1.0);

// Upper bound on the heat-bath spectral gap on the free box Lambda_n.
GapResult spectral_gap_upper(double beta, int n, double m_fraction, double m_star, const SingleSite& site,
                             const McmcSpec& mc, int d = 2);

struct TruncationRecord {
    EstimateResult large_a;        // (1/|L|) sum a_x 1{a_x >= M}
    EstimateResult large_cluster;  // (1/|L|) sum a_x 1{|C_x| >= K}
    EstimateResult restricted;     // (1/|L|) sum over non-maximal clusters with |C| >= N
};

TruncationRecord truncation_diagnostics(const SamplerSpec& spec, double M, std::size_t K, std::size_t N,
                                        const McmcSpec& mc);

}  // namespace phi4
