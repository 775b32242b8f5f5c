#include "phi4/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "phi4/oracle.hpp"

namespace phi4 {

namespace {

std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

EstimateResult exact(double v)
{
    EstimateResult r;
    r.value = v;
    r.error = 0.0;
    r.samples = 0;
    return r;
}

SampleObservable named_observable(const RunConfig& cfg, const Region& r)
{
    auto name = param_string(cfg, "observable", "magnetization");
    if (name == "magnetization") return magnetization_observable();
    if (name == "abs_magnetization") return [](const Sample& s) { return std::abs(magnetization(s.phi)); };
    if (name == "phi0") return spin_observable(origin_index(r));
    if (name == "phi0_sq") return spin_product_observable(origin_index(r), origin_index(r));
    if (name == "two_point") {
        auto x = static_cast<std::size_t>(param_int(cfg, "x")), y = static_cast<std::size_t>(param_int(cfg, "y"));
        if (x >= r.size() || y >= r.size()) throw ConfigError("experiment.x", 0, "vertex index out of range");
        return spin_product_observable(x, y);
    }
    throw ConfigError("experiment.observable", 0, "unknown observable '" + name + "'");
}

std::vector<double> model_field(const RunConfig& cfg, const Region& r)
{
    auto h = make_boundary_field(cfg.field, r, cfg.field_params).h;
    if (cfg.bc == "wired_plus") {
        FieldParams p;
        p.c0 = cfg.bc_c0;
        auto w = make_boundary_field(FieldKind::plus_max, r, p).h;
        for (std::size_t x = 0; x < h.size(); ++x) h[x] += w[x];
    }
    return h;
}

PlotSeries fit_series(const std::string& name, const ScalingFit& f)
{
    PlotSeries s{name, {}, {}, {}, {}};
    for (std::size_t i = 0; i < f.sizes.size(); ++i) {
        s.x.push_back(f.sizes[i]);
        s.y.push_back(f.logp[i]);
        s.yerr.push_back(f.logp_err[i]);
    }
    for (const ModelFit* m : {&f.surface, &f.volume})
        s.meta.push_back("fit power=" + std::to_string(m->power) + " c=" + num(m->c) + " alpha=" + num(m->alpha) +
                         " residual=" + num(m->residual));
    s.meta.push_back("preferred power=" + std::to_string(f.preferred));
    return s;
}

void add_fit_rows(RunResults& out, const std::string& tag, const ScalingFit& f)
{
    for (std::size_t i = 0; i < f.sizes.size(); ++i) out.rows.push_back({"P_" + tag, double(f.sizes[i]), f.prob[i]});
    for (const ModelFit* m : {&f.surface, &f.volume}) {
        auto r = exact(m->residual);
        r.meta.params["c"] = num(m->c);
        r.meta.params["alpha"] = num(m->alpha);
        r.flag = f.flag;
        out.rows.push_back({"residual_" + tag, double(m->power), r});
    }
    out.rows.push_back({"preferred_power_" + tag, 0.0, exact(f.preferred)});
}

}  // namespace

std::map<std::string, std::string> flat_params(const RunConfig& cfg)
{
    std::map<std::string, std::string> p;
    std::istringstream in(serialize(cfg));
    std::string line, block;
    while (std::getline(in, line)) {
        auto s = line.find_first_not_of(' ');
        if (s == std::string::npos) continue;
        line = line.substr(s);
        if (line == "}") {
            block.clear();
            continue;
        }
        if (line.back() == '{') {
            block = line.substr(0, line.find(' '));
            continue;
        }
        auto eq = line.find(" = ");
        if (eq == std::string::npos || line.compare(0, eq, "output") == 0) continue;
        p[(block.empty() ? "" : block + ".") + line.substr(0, eq)] = line.substr(eq + 3);
    }
    return p;
}

RunResults execute(const RunConfig& cfg)
{
    RunResults out;
    const SingleSite site{cfg.g, cfg.a};
    validate(site);
    const int d = cfg.shape.d;
    const auto& mc = cfg.mcmc;
    const auto& name = cfg.experiment;

    if (name == "oracle") {
        Region r(cfg.shape);
        ModelParams mp{cfg.beta, site, {}, model_field(cfg, r)};
        auto bc = cfg.bc == "wired_plus" ? BoundaryCondition::wired_plus(r, cfg.bc_c0) : BoundaryCondition::free(r);
        auto g = oracle::Graph::from_region(r, mp, bc);
        oracle::check_spin_size(g);
        oracle::Params p{cfg.beta, site};
        auto q = param_string(cfg, "quantity", "two_point");
        if (q == "two_point") {
            auto x = static_cast<std::size_t>(param_int(cfg, "x", 0)), y = static_cast<std::size_t>(param_int(cfg, "y", 0));
            if (x >= g.n || y >= g.n) throw ConfigError("experiment.x", 0, "vertex index out of range");
            out.rows.push_back({"two_point", 0.0, exact(oracle::exact_spin_expectation(g, p, [x, y](auto phi) {
                                     return phi[x] * phi[y];
                                 }))});
        } else if (q == "partition") {
            oracle::check_rc_size(g);
            std::vector<double> ones(g.n, 1.0);
            auto rep = oracle::partition_identities(g, p, ones);
            out.rows.push_back({"z_rc", 0.0, exact(rep.z_rc)});
            out.rows.push_back({"z_phi4", 0.0, exact(rep.z_phi4)});
            out.rows.push_back({"z_ratio", 0.0, exact(rep.ratio)});
            out.rows.push_back({"fk_gap", 0.0, exact(rep.fk_gap)});
        } else if (q == "current") {
            std::vector<int> A(g.n, 0);
            A[static_cast<std::size_t>(param_int(cfg, "x", 0))] += 1;
            A[static_cast<std::size_t>(param_int(cfg, "y", 0))] += 1;
            auto rep = oracle::current_expansion_check(g, p, A, param_int(cfg, "nmax", 40));
            out.rows.push_back({"current_value", 0.0, exact(rep.value)});
            out.rows.push_back({"current_reference", 0.0, exact(rep.reference)});
            out.rows.push_back({"current_gap", 0.0, exact(rep.gap)});
        } else {
            throw ConfigError("experiment.quantity", 0, "unknown oracle quantity '" + q + "'");
        }
        return out;
    }

    if (name == "estimate_observable" || name == "autocorrelation" || name == "truncation") {
        auto region = std::make_shared<Region>(cfg.shape);
        SamplerSpec spec{region, ModelParams{cfg.beta, site, {}, model_field(cfg, *region)}};
        if (name == "truncation") {
            auto t = truncation_diagnostics(spec, param_double(cfg, "M"), static_cast<std::size_t>(param_int(cfg, "K")),
                                            static_cast<std::size_t>(param_int(cfg, "N")), mc);
            out.rows.push_back({"large_a", 0.0, t.large_a});
            out.rows.push_back({"large_cluster_a", 0.0, t.large_cluster});
            out.rows.push_back({"restricted_cluster_fraction", 0.0, t.restricted});
            return out;
        }
        auto obs = named_observable(cfg, *region);
        auto s = sample_series(spec, {obs}, mc);
        if (name == "estimate_observable") {
            auto r = summarize(s, 0, mc);
            r.meta.params = {};
            out.rows.push_back({param_string(cfg, "observable", "magnetization"), 0.0, r});
        } else {
            for (std::size_t c = 0; c < s.size(); ++c) {
                auto a = autocorrelation(s[c][0]);
                auto tr = exact(a.tau_int);
                if (a.degenerate) tr.flag = "constant series";
                else if (!a.converged) {
                    tr.converged = false;
                    tr.flag = "windowing did not converge";
                }
                out.rows.push_back({"tau_int", double(c), tr});
                out.rows.push_back({"tau_exp", double(c), exact(a.tau_exp)});
                out.rows.push_back({"window", double(c), exact(double(a.window))});
            }
        }
        if (cfg.log_samples) out.samples = {s[0][0]};
        return out;
    }

    if (name == "m_star") {
        int L = param_int(cfg, "L");
        auto kinds = param_list(cfg, "field_kind", std::vector<std::string>{"thick_plus", "plus_max"});
        for (const auto& k : kinds) {
            auto r = estimate_m_star(cfg.beta, L, field_kind_from_string(k), site, mc, d, param_double(cfg, "c0", 1.0));
            out.rows.push_back({"m_star_" + k, double(L), r});
        }
        return out;
    }

    if (name == "beta_c") {
        auto b = estimate_beta_c(site, param_ints(cfg, "sizes"), mc, param_double(cfg, "lo"), param_double(cfg, "hi"),
                                 param_double(cfg, "resolution", 1e-2), d);
        for (std::size_t i = 0; i < b.pairs.size(); ++i) {
            auto r = exact(b.crossings[i]);
            r.meta.params["pair"] = std::to_string(b.pairs[i].first) + "," + std::to_string(b.pairs[i].second);
            if (!std::isfinite(b.crossings[i])) r.flag = b.flag;
            out.rows.push_back({"crossing", double(b.pairs[i].first), r});
        }
        auto r = exact(b.beta_c);
        r.error = b.spread;
        r.flag = b.flag;
        out.rows.push_back({"beta_c", 0.0, r});
        return out;
    }

    if (name == "ldp") {
        auto s = scan_ldp(cfg.beta, param_double(cfg, "m_star"), param_double(cfg, "delta_fraction"),
                          param_ints(cfg, "sizes"), site, mc, d);
        add_fit_rows(out, "lower", s.lower);
        add_fit_rows(out, "upper", s.upper);
        out.series.push_back(fit_series("ldp_lower", s.lower));
        out.series.push_back(fit_series("ldp_upper", s.upper));
        return out;
    }

    if (name == "surface_tension") {
        auto r = estimate_surface_tension(cfg.beta, param_int(cfg, "L"), param_int(cfg, "M"), site, mc, d);
        out.rows.push_back({"surface_tension", double(param_int(cfg, "L")), r});
        return out;
    }

    if (name == "local_uniqueness") {
        auto s = scan_local_uniqueness(cfg.beta, param_ints(cfg, "Ls"),
                                       param_list(cfg, "bcs", std::vector<std::string>{"free", "thick_plus"}), site,
                                       mc, d);
        PlotSeries ps{"local_uniqueness_min", {}, {}, {}, {}};
        for (const auto& row : s.rows) {
            auto r = row.estimate;
            r.meta.params["ess"] = num(row.ess);
            out.rows.push_back({"U_" + row.bc, double(row.L), r});
        }
        for (std::size_t i = 0; i < s.Ls.size(); ++i) {
            auto r = exact(s.min_value[i]);
            r.error = s.min_error[i];
            out.rows.push_back({"U_min", double(s.Ls[i]), r});
            ps.x.push_back(s.Ls[i]);
            ps.y.push_back(s.min_value[i]);
            ps.yerr.push_back(s.min_error[i]);
        }
        out.series.push_back(ps);
        return out;
    }

    if (name == "spectral_gap") {
        PlotSeries ps{"spectral_gap", {}, {}, {}, {}};
        for (int n : param_ints(cfg, "sizes")) {
            auto g = spectral_gap_upper(cfg.beta, n, param_double(cfg, "m_fraction"), param_double(cfg, "m_star"),
                                        site, mc, d);
            out.rows.push_back({"gap_ratio", double(n), g.ratio});
            ps.x.push_back(n);
            ps.y.push_back(g.ratio.value);
            ps.yerr.push_back(g.ratio.error);
        }
        out.series.push_back(ps);
        return out;
    }

    if (name == "percolation") {
        auto trials = param_int(cfg, "trials", 1000);
        if (trials < 1) throw ConfigError("experiment.trials", 0, "must be positive");
        Rng rng = make_stream(mc.seed, 0);
        double hits = 0.0;
        for (int t = 0; t < trials; ++t)
            hits += site_percolation_surface_event(param_double(cfg, "p"), param_int(cfg, "m"), param_int(cfg, "M"),
                                                   param_double(cfg, "eps"), rng, d)
                        ? 1.0
                        : 0.0;
        double f = hits / trials;
        auto r = exact(f);
        r.error = std::sqrt(f * (1.0 - f) / trials);
        r.samples = static_cast<std::size_t>(trials);
        out.rows.push_back({"surface_event_frequency", param_double(cfg, "p"), r});
        return out;
    }

    throw ConfigError("experiment.name", 0, "unknown experiment '" + name + "'");
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

std::string results_csv(const RunConfig& cfg, const RunResults& r)
{
    std::ostringstream o;
    o << "experiment,quantity,x,value,error,samples,tau_int,converged,flag,seed,params\r\n";
    std::string params;
    for (const auto& [k, v] : flat_params(cfg)) params += (params.empty() ? "" : ";") + k + "=" + v;
    for (const auto& row : r.rows) {
        const auto& e = row.estimate;
        std::string extra = params;
        for (const auto& [k, v] : e.meta.params) extra += ";" + k + "=" + v;
        o << csv_field(cfg.experiment) << "," << csv_field(row.quantity) << "," << num(row.x) << "," << num(e.value)
          << "," << num(e.error) << "," << e.samples << "," << num(e.tau_int) << ","
          << (e.converged ? "true" : "false") << "," << csv_field(e.flag) << "," << cfg.mcmc.seed << ","
          << csv_field(extra) << "\r\n";
    }
    return o.str();
}

void emit_plot_data(const std::vector<PlotSeries>& series, const std::vector<std::string>& requested,
                    const std::string& dir, const std::string& header)
{
    std::vector<const PlotSeries*> todo;
    if (requested.empty()) {
        for (const auto& s : series) todo.push_back(&s);
    } else {
        for (const auto& name : requested) {
            const PlotSeries* hit = nullptr;
            for (const auto& s : series)
                if (s.name == name) hit = &s;
            if (!hit) throw std::invalid_argument("missing plot series '" + name + "'");
            todo.push_back(hit);
        }
    }
    std::filesystem::create_directories(dir);
    for (const auto* s : todo) {
        std::ofstream f(std::filesystem::path(dir) / (s->name + ".dat"));
        if (!f) throw std::runtime_error("cannot write plot data for '" + s->name + "'");
        f << "# " << header << "\n# x y yerr\n";
        for (std::size_t i = 0; i < s->x.size(); ++i)
            f << num(s->x[i]) << " " << num(s->y[i]) << " " << num(s->yerr[i]) << "\n";
        for (const auto& m : s->meta) f << "# " << m << "\n";
    }
}

int run(RunConfig cfg, const RunOptions& opt, std::ostream& log)
{
    if (opt.seed) cfg.mcmc.seed = *opt.seed;
    if (opt.threads) cfg.mcmc.threads = *opt.threads;
    if (opt.out) cfg.output = *opt.out;
    const auto t0 = std::chrono::steady_clock::now();
    RunResults res;
    try {
        res = execute(cfg);
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return 2;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output);
    {
        std::ofstream f(fs::path(cfg.output) / "results.csv", std::ios::binary);
        f << results_csv(cfg, res);
    }
    std::string header = "seed=" + std::to_string(cfg.mcmc.seed);
    for (const auto& [k, v] : flat_params(cfg)) header += " " + k + "=" + v;
    emit_plot_data(res.series, {}, cfg.output, header);
    if (!res.samples.empty()) {
        std::ofstream f(fs::path(cfg.output) / "samples.csv", std::ios::binary);
        f << "# " << header << "\r\nindex,value\r\n";
        for (std::size_t i = 0; i < res.samples[0].size(); ++i) f << i << "," << num(res.samples[0][i]) << "\r\n";
    }

    bool failed = false;
    nlohmann::json summary;
    summary["version"] = version;
    summary["seed"] = cfg.mcmc.seed;
    summary["experiment"] = cfg.experiment;
    summary["parameters"] = flat_params(cfg);
    summary["wall_seconds"] = wall;
    summary["strict"] = opt.strict;
    auto& rows = summary["results"] = nlohmann::json::array();
    for (const auto& r : res.rows) {
        const auto& e = r.estimate;
        rows.push_back({{"quantity", r.quantity},
                        {"x", r.x},
                        {"value", e.value},
                        {"error", e.error},
                        {"samples", e.samples},
                        {"tau_int", e.tau_int},
                        {"converged", e.converged},
                        {"flag", e.flag}});
        if (!e.converged || (!e.flag.empty() && e.flag != "constant series")) {
            failed = true;
            log << "flag: " << r.quantity << " (x=" << num(r.x) << "): " << e.flag << "\n";
        }
        log << r.quantity << " x=" << num(r.x) << " value=" << num(e.value) << " error=" << num(e.error) << "\n";
    }
    {
        std::ofstream f(fs::path(cfg.output) / "summary.json");
        f << summary.dump(2) << "\n";
    }
    if (failed && opt.strict) {
        log << "strict mode: flagged results, exiting with status 3\n";
        return 3;
    }
    return 0;
}

}  // namespace phi4
