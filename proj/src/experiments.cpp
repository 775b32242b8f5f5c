#include "phi4/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <boost/math/quadrature/gauss.hpp>

namespace phi4 {

std::string to_string(SamplerType s)
{
    switch (s) {
    case SamplerType::heatbath: return "heatbath";
    case SamplerType::langevin: return "langevin";
    case SamplerType::rc: return "rc";
    }
    return "?";
}

SamplerType sampler_from_string(const std::string& s)
{
    for (auto t : {SamplerType::heatbath, SamplerType::langevin, SamplerType::rc})
        if (to_string(t) == s) return t;
    throw std::invalid_argument("unknown sampler '" + s + "'");
}

namespace {

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void validate(const McmcSpec& mc)
{
    if (mc.sweeps == 0) throw std::invalid_argument("mcmc: sweeps must be positive");
    if (mc.thin == 0) throw std::invalid_argument("mcmc: thinning must be positive");
    if (mc.chains == 0) throw std::invalid_argument("mcmc: need at least one chain");
    if (mc.sampler == SamplerType::langevin && !(mc.dt > 0.0)) throw std::invalid_argument("mcmc: dt must be positive");
}

void run_chain(const SamplerSpec& spec, const std::vector<SampleObservable>& obs, const McmcSpec& mc,
               std::size_t chain, std::vector<std::vector<double>>& out)
{
    Rng rng = make_stream(mc.seed, chain);
    out.assign(obs.size(), {});
    for (auto& o : out) o.reserve(mc.sweeps / mc.thin);
    SpinConfig phi(spec.region->size(), 0.0);
    TiltedSampler sampler(spec.model.site);
    auto record = [&](const Sample& s) {
        for (std::size_t k = 0; k < obs.size(); ++k) out[k].push_back(obs[k](s));
    };
    if (mc.sampler == SamplerType::rc) {
        RCModel m(spec.region, spec.model, BoundaryCondition::free(*spec.region));
        RCState s = es_spin_to_rc(m, phi, rng);
        for (std::size_t t = 0; t < mc.burn_in; ++t) rc_sweep(m, s, phi, sampler, rng, mc.schedule);
        for (std::size_t t = 0; t < mc.sweeps; ++t) {
            rc_sweep(m, s, phi, sampler, rng, mc.schedule);
            if ((t + 1) % mc.thin == 0) record(Sample{phi, &s, &m});
        }
        return;
    }
    SpinModel m(spec.region, spec.model);
    auto step = [&]() {
        if (mc.sampler == SamplerType::heatbath) heatbath_sweep(m, phi, sampler, rng, mc.schedule);
        else langevin_step(m, phi, mc.dt, rng);
    };
    for (std::size_t t = 0; t < mc.burn_in; ++t) step();
    for (std::size_t t = 0; t < mc.sweeps; ++t) {
        step();
        if ((t + 1) % mc.thin == 0) record(Sample{phi});
    }
}

std::vector<double> pooled(const Series& s, std::size_t k)
{
    std::vector<double> v;
    for (const auto& c : s) v.insert(v.end(), c[k].begin(), c[k].end());
    return v;
}

double max_tau(const Series& s, std::initializer_list<std::size_t> ks)
{
    double tau = 0.5;
    for (auto k : ks)
        for (const auto& c : s) {
            auto a = autocorrelation(c[k]);
            if (!a.degenerate && std::isfinite(a.tau_int)) tau = std::max(tau, a.tau_int);
        }
    return tau;
}

class Timer {
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

RunMeta meta(const McmcSpec& mc, const Timer& t, std::map<std::string, std::string> params)
{
    params["sampler"] = to_string(mc.sampler);
    params["burn_in"] = std::to_string(mc.burn_in);
    params["sweeps"] = std::to_string(mc.sweeps);
    params["thin"] = std::to_string(mc.thin);
    params["chains"] = std::to_string(mc.chains);
    params["schedule"] = to_string(mc.schedule);
    if (mc.sampler == SamplerType::langevin) params["dt"] = fmt(mc.dt);
    return RunMeta{mc.seed, std::move(params), t.seconds()};
}

std::map<std::string, std::string> site_params(double beta, const SingleSite& site, int d)
{
    return {{"beta", fmt(beta)}, {"g", fmt(site.g)}, {"a", fmt(site.a)}, {"d", std::to_string(d)}};
}

}  // namespace

Series sample_series(const SamplerSpec& spec, const std::vector<SampleObservable>& obs, const McmcSpec& mc)
{
    validate(mc);
    if (!spec.region) throw std::invalid_argument("sampler spec has no region");
    Series out(mc.chains);
    const std::size_t threads = std::max<std::size_t>(1, std::min(mc.threads, mc.chains));
    if (threads == 1) {
        for (std::size_t c = 0; c < mc.chains; ++c) run_chain(spec, obs, mc, c, out[c]);
        return out;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (std::size_t w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t c = w; c < mc.chains; c += threads) run_chain(spec, obs, mc, c, out[c]);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

EstimateResult summarize(const Series& s, std::size_t k, const McmcSpec& mc)
{
    EstimateResult r;
    double sum = 0.0, var = 0.0, tau = 0.0;
    bool degenerate = true, windowed = true;
    for (const auto& c : s) {
        const auto& x = c[k];
        const double n = static_cast<double>(x.size());
        auto a = autocorrelation(x);
        double m = mean(x);
        double err = 0.0, t = 0.5;
        if (!a.degenerate) {
            degenerate = false;
            t = a.tau_int;
            windowed = windowed && a.window > 0;
            err = std::max(binned_error(x), std::sqrt(2.0 * t * variance(x) / n));
        }
        sum += m;
        var += err * err;
        tau += t;
        r.samples += x.size();
    }
    const double C = static_cast<double>(s.size());
    r.value = sum / C;
    r.error = std::sqrt(var) / C;
    r.tau_int = tau / C;
    const double per_chain = static_cast<double>(r.samples) / C;
    if (degenerate) {
        r.flag = "constant series";
    } else if (!windowed || r.tau_int > per_chain / 50.0) {
        r.converged = false;
        r.flag = "not converged: tau_int " + fmt(r.tau_int) + " exceeds sweeps/50";
    }
    r.meta.seed = mc.seed;
    return r;
}

std::vector<EstimateResult> estimate_observables(const SamplerSpec& spec, const std::vector<SampleObservable>& obs,
                                                 const McmcSpec& mc)
{
    Timer t;
    auto s = sample_series(spec, obs, mc);
    std::vector<EstimateResult> out;
    for (std::size_t k = 0; k < obs.size(); ++k) {
        out.push_back(summarize(s, k, mc));
        out.back().meta = meta(mc, t, site_params(spec.model.beta, spec.model.site, spec.region->dim()));
    }
    return out;
}

EstimateResult estimate_observable(const SamplerSpec& spec, const SampleObservable& obs, const McmcSpec& mc)
{
    return estimate_observables(spec, {obs}, mc)[0];
}

SampleObservable magnetization_observable()
{
    return [](const Sample& s) { return magnetization(s.phi); };
}

SampleObservable spin_observable(std::size_t x)
{
    return [x](const Sample& s) { return s.phi[x]; };
}

SampleObservable spin_product_observable(std::size_t x, std::size_t y)
{
    return [x, y](const Sample& s) { return s.phi[x] * s.phi[y]; };
}

std::size_t origin_index(const Region& r)
{
    std::vector<int> o(r.dim(), 0);
    auto v = r.index(o);
    if (!v || *v >= r.size()) throw std::invalid_argument("region does not contain the origin");
    return *v;
}

std::shared_ptr<const Region> make_box(int d, int n)
{
    return std::make_shared<Region>(ShapeSpec{Shape::box, d, n, 0, {}});
}

EstimateResult estimate_m_star(double beta, int L, FieldKind kind, const SingleSite& site, const McmcSpec& mc, int d,
                               double c0)
{
    Timer t;
    auto region = make_box(d, L);
    FieldParams fp;
    fp.c0 = c0;
    auto field = make_boundary_field(kind, *region, fp);
    SamplerSpec spec{region, ModelParams{beta, site, {}, field.h}};
    auto r = estimate_observable(spec, spin_observable(origin_index(*region)), mc);
    auto p = site_params(beta, site, d);
    p["L"] = std::to_string(L);
    p["field"] = to_string(kind);
    p["c0"] = fmt(c0);
    r.meta = meta(mc, t, p);
    return r;
}

EstimateResult binder_cumulant(double beta, int n, const SingleSite& site, const McmcSpec& mc, int d)
{
    Timer t;
    auto region = make_box(d, n);
    SamplerSpec spec{region, ModelParams{beta, site, {}, {}}};
    auto s = sample_series(spec,
                           {[](const Sample& x) { double m = magnetization(x.phi); return m * m; },
                            [](const Sample& x) { double m = magnetization(x.phi); return m * m * m * m; }},
                           mc);
    auto m2 = pooled(s, 0), m4 = pooled(s, 1);
    auto j = jackknife({m2, m4}, [](std::span<const double> v) { return 1.0 - v[1] / (3.0 * v[0] * v[0]); });
    EstimateResult r;
    r.value = j.value;
    r.error = j.error;
    r.samples = m2.size();
    r.tau_int = max_tau(s, {0, 1});
    auto p = site_params(beta, site, d);
    p["n"] = std::to_string(n);
    r.meta = meta(mc, t, p);
    return r;
}

BetaCResult estimate_beta_c(const SingleSite& site, const std::vector<int>& sizes, const McmcSpec& mc, double lo,
                            double hi, double resolution, int d)
{
    if (sizes.size() < 3) throw std::invalid_argument("Binder crossing needs at least three sizes");
    if (!(lo < hi) || lo < 0.0) throw std::invalid_argument("Binder crossing needs 0 <= lo < hi");
    auto ns = sizes;
    std::sort(ns.begin(), ns.end());
    BetaCResult res;
    auto diff = [&](double beta, int a, int b) {
        return binder_cumulant(beta, a, site, mc, d).value - binder_cumulant(beta, b, site, mc, d).value;
    };
    for (std::size_t i = 0; i + 1 < ns.size(); ++i) {
        int a = ns[i], b = ns[i + 1];
        res.pairs.emplace_back(a, b);
        double l = lo, h = hi;
        double fl = diff(l, a, b), fh = diff(h, a, b);
        if (!(fl > 0.0 && fh < 0.0)) {
            res.crossed = false;
            res.flag = "Binder curves for sizes " + std::to_string(a) + "," + std::to_string(b) +
                       " do not cross in [" + fmt(lo) + ", " + fmt(hi) + "]";
            res.crossings.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        while (h - l > resolution) {
            double mid = 0.5 * (l + h);
            if (diff(mid, a, b) > 0.0) l = mid;
            else h = mid;
        }
        res.crossings.push_back(0.5 * (l + h));
    }
    double sum = 0.0, mn = 1e300, mx = -1e300;
    std::size_t cnt = 0;
    for (double c : res.crossings)
        if (std::isfinite(c)) {
            sum += c;
            mn = std::min(mn, c);
            mx = std::max(mx, c);
            ++cnt;
        }
    res.beta_c = cnt ? sum / static_cast<double>(cnt) : std::numeric_limits<double>::quiet_NaN();
    res.spread = cnt ? mx - mn : std::numeric_limits<double>::quiet_NaN();
    return res;
}

void fit_scaling(ScalingFit& f, int d)
{
    f.surface = ModelFit{d - 1};
    f.volume = ModelFit{d};
    f.preferred = 0;
    if (f.sizes.size() < 3) {
        f.flag = "need at least three sizes to compare models";
        return;
    }
    for (std::size_t i = 0; i < f.logp.size(); ++i)
        if (!std::isfinite(f.logp[i]) || !(f.logp_err[i] > 0.0)) {
            f.flag = "no usable probability at n = " + std::to_string(f.sizes[i]);
            return;
        }
    std::vector<double> w;
    for (double e : f.logp_err) w.push_back(1.0 / (e * e));
    for (ModelFit* m : {&f.surface, &f.volume}) {
        std::vector<double> x;
        for (int n : f.sizes) x.push_back(std::pow(static_cast<double>(n), m->power));
        auto lf = linear_fit(x, f.logp, w);
        m->alpha = lf.intercept;
        m->c = -lf.slope;
        m->residual = lf.residual;
    }
    f.preferred = f.surface.residual < f.volume.residual ? f.surface.power : f.volume.power;
}

LdpScan scan_ldp(double beta, double m_star, double delta_fraction, const std::vector<int>& sizes,
                 const SingleSite& site, const McmcSpec& mc, int d)
{
    if (!(m_star > 0.0))
        throw std::invalid_argument("scan_ldp: m* estimate is not positive; the scan needs a supercritical beta");
    if (!(delta_fraction > 0.0 && delta_fraction < 1.0))
        throw std::invalid_argument("scan_ldp: delta fraction must lie in (0, 1)");
    LdpScan out;
    out.beta = beta;
    out.m_star = m_star;
    out.delta = delta_fraction * m_star;
    const double lo = m_star - out.delta, hi = m_star + out.delta;
    for (int n : sizes) {
        Timer t;
        SamplerSpec spec{make_box(d, n), ModelParams{beta, site, {}, {}}};
        auto s = sample_series(spec,
                               {[lo](const Sample& x) { return std::abs(magnetization(x.phi)) <= lo ? 1.0 : 0.0; },
                                [hi](const Sample& x) { return magnetization(x.phi) >= hi ? 1.0 : 0.0; }},
                               mc);
        auto p = site_params(beta, site, d);
        p["n"] = std::to_string(n);
        p["m_star"] = fmt(m_star);
        p["delta"] = fmt(out.delta);
        for (auto [k, fit] : {std::pair{std::size_t{0}, &out.lower}, std::pair{std::size_t{1}, &out.upper}}) {
            auto r = summarize(s, k, mc);
            r.meta = meta(mc, t, p);
            double hits = r.value * static_cast<double>(r.samples);
            if (hits < 30.0) r.flag = "only " + fmt(std::round(hits)) + " hits (< 30)";
            fit->sizes.push_back(n);
            fit->prob.push_back(r);
            fit->logp.push_back(r.value > 0.0 ? std::log(r.value) : -std::numeric_limits<double>::infinity());
            fit->logp_err.push_back(r.value > 0.0 ? r.error / r.value : std::numeric_limits<double>::infinity());
        }
    }
    fit_scaling(out.lower, d);
    fit_scaling(out.upper, d);
    return out;
}

EstimateResult estimate_surface_tension(double beta, int L, int M, const SingleSite& site, const McmcSpec& mc, int d)
{
    Timer t;
    auto region = std::make_shared<Region>(ShapeSpec{Shape::rectangle, d, L, M, {}});
    auto sides = dobrushin_sides(*region);
    auto field = make_boundary_field(FieldKind::dobrushin_pp, *region);
    SamplerSpec spec{region, ModelParams{beta, site, {}, field.h}};
    McmcSpec rc = mc;
    rc.sampler = SamplerType::rc;
    auto obs = [&sides](const Sample& s) { return disconnection(*s.model, s.rc->omega, sides) ? 1.0 : 0.0; };
    auto p = estimate_observable(spec, obs, rc);
    const double area = std::pow(static_cast<double>(L), d - 1);
    EstimateResult r = p;
    if (p.value > 0.0) {
        r.value = -std::log(p.value) / area;
        r.error = p.error / (p.value * area);
    } else {
        r.value = std::numeric_limits<double>::infinity();
        r.error = std::numeric_limits<double>::infinity();
        r.flag = "no disconnection observed";
    }
    auto mp = site_params(beta, site, d);
    mp["L"] = std::to_string(L);
    mp["M"] = std::to_string(M);
    mp["p_disconnect"] = fmt(p.value);
    r.meta = meta(rc, t, mp);
    return r;
}

UniquenessScan scan_local_uniqueness(double beta, const std::vector<int>& Ls, const std::vector<std::string>& bcs,
                                     const SingleSite& site, const McmcSpec& mc, int d)
{
    McmcSpec rc = mc;
    rc.sampler = SamplerType::rc;
    UniquenessScan out;
    for (int L : Ls) {
        double mv = 2.0, me = 0.0, mess = 0.0;
        for (const auto& bc : bcs) {
            Timer t;
            auto region = make_box(d, 10 * L);
            FieldKind kind;
            if (bc == "free") kind = FieldKind::zero;
            else if (bc == "thick_plus") kind = FieldKind::thick_plus;
            else if (bc == "plus_max") kind = FieldKind::plus_max;
            else throw std::invalid_argument("local uniqueness: unsupported bc '" + bc + "'");
            auto field = make_boundary_field(kind, *region);
            SamplerSpec spec{region, ModelParams{beta, site, {}, field.h}};
            const std::size_t E = region->edges().size();
            auto s = sample_series(
                spec,
                {[L](const Sample& x) { return local_uniqueness(x.model->region(), x.rc->omega, L) ? 1.0 : 0.0; },
                 [E](const Sample& x) {
                     return static_cast<double>(std::count(x.rc->omega.begin(), x.rc->omega.begin() + E, 1)) /
                            static_cast<double>(E);
                 },
                 [](const Sample& x) { return std::abs(magnetization(x.phi)); }},
                rc);
            UniquenessRow row;
            row.L = L;
            row.bc = bc;
            row.estimate = summarize(s, 0, rc);
            double tau = max_tau(s, {0, 1, 2});
            row.ess = static_cast<double>(row.estimate.samples) / (2.0 * tau);
            row.estimate.tau_int = std::max(row.estimate.tau_int, tau);
            auto p = site_params(beta, site, d);
            p["L"] = std::to_string(L);
            p["bc"] = bc;
            row.estimate.meta = meta(rc, t, p);
            if (row.estimate.value < mv) {
                mv = row.estimate.value;
                me = row.estimate.error;
                mess = row.ess;
            }
            out.rows.push_back(row);
        }
        out.Ls.push_back(L);
        out.min_value.push_back(mv);
        out.min_error.push_back(me);
        out.min_ess.push_back(mess);
    }
    return out;
}

double chi(double u, double m)
{
    if (u >= m) return 1.0;
    if (u <= -m) return -1.0;
    double t = (u + m) / (2.0 * m);
    return 2.0 * t * t * (3.0 - 2.0 * t) - 1.0;
}

double dirichlet_integrand(const SpinModel& model, const SpinConfig& phi, double m, double scale)
{
    using rule = boost::math::quadrature::gauss<double, 20>;
    const auto& ab = rule::abscissa();
    const auto& wt = rule::weights();
    const std::size_t n = phi.size();
    const double N = static_cast<double>(n);
    const double m0 = magnetization(phi);
    const double f0 = chi(m0, m);
    const auto& site = model.site();
    double total = 0.0;
    std::vector<double> cuts;
    for (std::size_t x = 0; x < n; ++x) {
        const double tau = model.tilt(phi, x);
        const double T = cutoff(site, tau);
        auto at = [&](double s) { return m0 + (s - phi[x]) / N; };
        if (f0 == 1.0 && at(-T) >= m) continue;
        if (f0 == -1.0 && at(T) <= -m) continue;
        cuts.assign({-T, T});
        for (double b : {phi[x] + N * (-m - m0), phi[x] + N * (m - m0)})
            if (b > -T && b < T) cuts.push_back(b);
        std::sort(cuts.begin(), cuts.end());
        const double peak = log_density(mode(site, tau), site, tau);
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            const int panels = 4;
            const double w = (cuts[k + 1] - cuts[k]) / panels;
            for (int p = 0; p < panels; ++p) {
                const double mid = cuts[k] + (p + 0.5) * w, hw = 0.5 * w;
                for (std::size_t i = 0; i < ab.size(); ++i)
                    for (double s : {mid - hw * ab[i], mid + hw * ab[i]}) {
                        double dens = hw * wt[i] * std::exp(log_density(s, site, tau) - peak);
                        double diff = f0 - chi(at(s), m);
                        num += dens * diff * diff;
                        den += dens;
                    }
            }
        }
        total += num / den;
    }
    return 0.5 * scale * scale * total;
}

Jackknife dirichlet_ratio(const GapSeries& s, double scale)
{
    std::vector<double> e(s.dirichlet.size()), f(s.f.size()), f2(s.f.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = scale * scale * s.dirichlet[i];
    for (std::size_t i = 0; i < f.size(); ++i) {
        f[i] = scale * s.f[i];
        f2[i] = f[i] * f[i];
    }
    return jackknife({e, f, f2}, [](std::span<const double> v) { return v[0] / (v[2] - v[1] * v[1]); });
}

GapResult spectral_gap_upper(double beta, int n, double m_fraction, double m_star, const SingleSite& site,
                             const McmcSpec& mc, int d)
{
    if (!(m_fraction > 0.0 && m_fraction < 1.0) || !(m_star > 0.0))
        throw std::invalid_argument("spectral gap: test function saturated (need 0 < m-fraction < 1 and m* > 0)");
    Timer t;
    GapResult g;
    g.m = m_fraction * m_star;
    g.chi_slope = 1.5 / g.m;
    auto region = make_box(d, n);
    SamplerSpec spec{region, ModelParams{beta, site, {}, {}}};
    auto model = std::make_shared<SpinModel>(region, spec.model);
    const double m = g.m;
    auto s = sample_series(spec,
                           {[model, m](const Sample& x) { return dirichlet_integrand(*model, x.phi, m); },
                            [m](const Sample& x) { return chi(magnetization(x.phi), m); }},
                           mc);
    g.series.dirichlet = pooled(s, 0);
    g.series.f = pooled(s, 1);
    auto j = dirichlet_ratio(g.series);
    auto je = jackknife({g.series.dirichlet}, [](std::span<const double> v) { return v[0]; });
    std::vector<double> f2(g.series.f.size());
    for (std::size_t i = 0; i < f2.size(); ++i) f2[i] = g.series.f[i] * g.series.f[i];
    auto jv = jackknife({g.series.f, f2}, [](std::span<const double> v) { return v[1] - v[0] * v[0]; });
    g.dirichlet = je.value;
    g.dirichlet_error = je.error;
    g.variance = jv.value;
    g.variance_error = jv.error;
    g.ratio.value = j.value;
    g.ratio.error = j.error;
    g.ratio.samples = g.series.f.size();
    g.ratio.tau_int = max_tau(s, {0, 1});
    if (g.variance <= 3.0 * g.variance_error) g.ratio.flag = "test function saturated: Var(f) within 3 stderr of 0";
    if (g.ratio.tau_int > static_cast<double>(g.ratio.samples) / (50.0 * static_cast<double>(mc.chains))) {
        g.ratio.converged = false;
        if (g.ratio.flag.empty()) g.ratio.flag = "not converged";
    }
    auto p = site_params(beta, site, d);
    p["n"] = std::to_string(n);
    p["m"] = fmt(g.m);
    p["m_fraction"] = fmt(m_fraction);
    g.ratio.meta = meta(mc, t, p);
    return g;
}

TruncationRecord truncation_diagnostics(const SamplerSpec& spec, double M, std::size_t K, std::size_t N,
                                        const McmcSpec& mc)
{
    McmcSpec rc = mc;
    rc.sampler = SamplerType::rc;
    const std::size_t n = spec.region->size();
    auto stats = [K, N, n](const Sample& s) {
        auto c = cluster_labels(*s.model, s.rc->omega);
        return cluster_stats(std::span<const std::uint32_t>(c.label.data(), n), N, K);
    };
    std::vector<SampleObservable> obs{
        [M, n](const Sample& s) {
            double acc = 0.0;
            for (std::size_t x = 0; x < n; ++x)
                if (s.rc->a[x] >= M) acc += s.rc->a[x];
            return acc / static_cast<double>(n);
        },
        [stats, n](const Sample& s) {
            auto st = stats(s);
            double acc = 0.0;
            for (std::size_t x = 0; x < n; ++x)
                if (st.large[x]) acc += s.rc->a[x];
            return acc / static_cast<double>(n);
        },
        [stats, n](const Sample& s) { return static_cast<double>(stats(s).restricted_sum) / static_cast<double>(n); }};
    auto r = estimate_observables(spec, obs, rc);
    return TruncationRecord{r[0], r[1], r[2]};
}

}  // namespace phi4
