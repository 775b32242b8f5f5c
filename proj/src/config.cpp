#include "phi4/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace phi4 {

ConfigError::ConfigError(const std::string& k, int l, const std::string& what)
    : std::runtime_error(l > 0 ? "line " + std::to_string(l) + ": key '" + k + "': " + what
                               : "key '" + k + "': " + what),
      key(k), line(l)
{
}

const std::map<std::string, std::vector<std::string>>& experiment_schema()
{
    static const std::map<std::string, std::vector<std::string>> s{
        {"estimate_observable", {"observable", "x", "y"}},
        {"autocorrelation", {"observable", "x", "y"}},
        {"m_star", {"L", "field_kind", "c0"}},
        {"beta_c", {"sizes", "lo", "hi", "resolution"}},
        {"ldp", {"sizes", "m_star", "delta_fraction"}},
        {"surface_tension", {"L", "M"}},
        {"local_uniqueness", {"Ls", "bcs"}},
        {"spectral_gap", {"sizes", "m_fraction", "m_star"}},
        {"truncation", {"M", "K", "N"}},
        {"oracle", {"quantity", "x", "y", "nmax"}},
        {"percolation", {"p", "m", "M", "eps", "trials"}},
    };
    return s;
}

namespace {

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, int line, const std::string& v)
{
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos == v.size()) return d;
    } catch (const std::exception&) {
    }
    throw ConfigError(key, line, "expected a number, got '" + v + "'");
}

long long to_int(const std::string& key, int line, const std::string& v)
{
    try {
        std::size_t pos = 0;
        long long d = std::stoll(v, &pos);
        if (pos == v.size()) return d;
    } catch (const std::exception&) {
    }
    throw ConfigError(key, line, "expected an integer, got '" + v + "'");
}

std::size_t to_count(const std::string& key, int line, const std::string& v)
{
    long long d = to_int(key, line, v);
    if (d < 0) throw ConfigError(key, line, "must be nonnegative");
    return static_cast<std::size_t>(d);
}

std::uint64_t to_seed(const std::string& key, int line, const std::string& v)
{
    try {
        std::size_t pos = 0;
        if (!v.empty() && v[0] != '-') {
            unsigned long long d = std::stoull(v, &pos, 0);
            if (pos == v.size()) return d;
        }
    } catch (const std::exception&) {
    }
    throw ConfigError(key, line, "expected a 64-bit unsigned seed, got '" + v + "'");
}

bool to_bool(const std::string& key, int line, const std::string& v)
{
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError(key, line, "expected true or false, got '" + v + "'");
}

std::vector<std::string> split(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class F>
auto wrap(const std::string& key, int line, F&& f)
{
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(key, line, e.what());
    }
}

}  // namespace

RunConfig parse_config(const std::string& text)
{
    RunConfig c;
    std::istringstream in(text);
    std::string raw, block;
    int line = 0, block_line = 0;
    std::set<std::string> seen;
    std::map<std::string, int> where;
    while (std::getline(in, raw)) {
        ++line;
        auto hash = raw.find('#');
        std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        if (s == "}") {
            if (block.empty()) throw ConfigError("}", line, "unmatched closing brace");
            block.clear();
            continue;
        }
        if (s.back() == '{') {
            std::string name = trim(s.substr(0, s.size() - 1));
            if (!block.empty()) throw ConfigError(name, line, "blocks cannot be nested inside '" + block + "'");
            static const std::set<std::string> blocks{"model", "field", "bc", "sampler", "experiment"};
            if (!blocks.count(name)) throw ConfigError(name, line, "unknown block");
            if (seen.count(name + "{")) throw ConfigError(name, line, "duplicate block");
            seen.insert(name + "{");
            block = name;
            block_line = line;
            continue;
        }
        auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError(s, line, "expected 'key = value'");
        std::string key = trim(s.substr(0, eq)), v = trim(s.substr(eq + 1));
        std::string full = block.empty() ? key : block + "." + key;
        if (v.empty()) throw ConfigError(full, line, "missing value");
        if (seen.count(full)) throw ConfigError(full, line, "duplicate key");
        seen.insert(full);
        where[full] = line;

        if (block.empty()) {
            if (key == "output") c.output = v;
            else if (key == "log_samples") c.log_samples = to_bool(full, line, v);
            else throw ConfigError(full, line, "unknown key");
        } else if (block == "model") {
            if (key == "g") c.g = to_double(full, line, v);
            else if (key == "a") c.a = to_double(full, line, v);
            else if (key == "beta") c.beta = to_double(full, line, v);
            else if (key == "shape") c.shape.shape = wrap(full, line, [&] { return shape_from_string(v); });
            else if (key == "d") c.shape.d = static_cast<int>(to_int(full, line, v));
            else if (key == "n") c.shape.n = static_cast<int>(to_int(full, line, v));
            else if (key == "m") c.shape.m = static_cast<int>(to_int(full, line, v));
            else if (key == "center") {
                c.shape.center.clear();
                for (auto& x : split(v)) c.shape.center.push_back(static_cast<int>(to_int(full, line, x)));
            } else throw ConfigError(full, line, "unknown key");
        } else if (block == "field") {
            if (key == "kind") c.field = wrap(full, line, [&] { return field_kind_from_string(v); });
            else if (key == "value") c.field_params.value = to_double(full, line, v);
            else if (key == "set") {
                if (v == "boundary") c.field_params.set = FieldSet::boundary;
                else if (v == "all") c.field_params.set = FieldSet::all;
                else throw ConfigError(full, line, "expected boundary or all");
            } else if (key == "c0") c.field_params.c0 = to_double(full, line, v);
            else throw ConfigError(full, line, "unknown key");
        } else if (block == "bc") {
            if (key == "type") {
                if (v != "free" && v != "wired_plus") throw ConfigError(full, line, "expected free or wired_plus");
                c.bc = v;
            } else if (key == "c0") c.bc_c0 = to_double(full, line, v);
            else throw ConfigError(full, line, "unknown key");
        } else if (block == "sampler") {
            auto& m = c.mcmc;
            if (key == "type") m.sampler = wrap(full, line, [&] { return sampler_from_string(v); });
            else if (key == "sweeps") m.sweeps = to_count(full, line, v);
            else if (key == "burn_in") m.burn_in = to_count(full, line, v);
            else if (key == "thin") m.thin = to_count(full, line, v);
            else if (key == "dt") m.dt = to_double(full, line, v);
            else if (key == "schedule") m.schedule = wrap(full, line, [&] { return schedule_from_string(v); });
            else if (key == "seed") m.seed = to_seed(full, line, v);
            else if (key == "chains") m.chains = to_count(full, line, v);
            else if (key == "threads") m.threads = to_count(full, line, v);
            else throw ConfigError(full, line, "unknown key");
        } else if (block == "experiment") {
            if (key == "name") {
                if (!experiment_schema().count(v)) throw ConfigError(full, line, "unknown experiment '" + v + "'");
                c.experiment = v;
            } else {
                c.params[key] = v;
            }
        }
    }
    if (!block.empty()) throw ConfigError(block, block_line, "block is not closed");
    for (const char* k : {"model.g", "model.a", "model.beta", "sampler.seed", "experiment.name"})
        if (!seen.count(k)) throw ConfigError(k, 0, "required key is missing");
    const auto& allowed = experiment_schema().at(c.experiment);
    for (const auto& [k, v] : c.params)
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
            throw ConfigError("experiment." + k, where["experiment." + k],
                              "unknown key for experiment '" + c.experiment + "'");
    if (!(c.g > 0.0)) throw ConfigError("model.g", where["model.g"], "must be positive");
    if (c.beta < 0.0) throw ConfigError("model.beta", where["model.beta"], "must be nonnegative");
    if (c.shape.d < 2) throw ConfigError("model.d", where["model.d"], "dimension must be at least 2");
    if (c.mcmc.sweeps == 0) throw ConfigError("sampler.sweeps", where["sampler.sweeps"], "must be positive");
    if (c.mcmc.thin == 0) throw ConfigError("sampler.thin", where["sampler.thin"], "must be positive");
    if (c.mcmc.chains == 0) throw ConfigError("sampler.chains", where["sampler.chains"], "must be positive");
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string serialize(const RunConfig& c)
{
    std::ostringstream o;
    o << "model {\n"
      << "  g = " << num(c.g) << "\n"
      << "  a = " << num(c.a) << "\n"
      << "  beta = " << num(c.beta) << "\n"
      << "  shape = " << to_string(c.shape.shape) << "\n"
      << "  d = " << c.shape.d << "\n"
      << "  n = " << c.shape.n << "\n"
      << "  m = " << c.shape.m << "\n";
    if (!c.shape.center.empty()) {
        o << "  center = ";
        for (std::size_t i = 0; i < c.shape.center.size(); ++i) o << (i ? "," : "") << c.shape.center[i];
        o << "\n";
    }
    o << "}\n"
      << "field {\n"
      << "  kind = " << to_string(c.field) << "\n"
      << "  value = " << num(c.field_params.value) << "\n"
      << "  set = " << (c.field_params.set == FieldSet::all ? "all" : "boundary") << "\n"
      << "  c0 = " << num(c.field_params.c0) << "\n"
      << "}\n"
      << "bc {\n"
      << "  type = " << c.bc << "\n"
      << "  c0 = " << num(c.bc_c0) << "\n"
      << "}\n"
      << "sampler {\n"
      << "  type = " << to_string(c.mcmc.sampler) << "\n"
      << "  sweeps = " << c.mcmc.sweeps << "\n"
      << "  burn_in = " << c.mcmc.burn_in << "\n"
      << "  thin = " << c.mcmc.thin << "\n"
      << "  dt = " << num(c.mcmc.dt) << "\n"
      << "  schedule = " << to_string(c.mcmc.schedule) << "\n"
      << "  seed = " << c.mcmc.seed << "\n"
      << "  chains = " << c.mcmc.chains << "\n"
      << "  threads = " << c.mcmc.threads << "\n"
      << "}\n"
      << "experiment {\n"
      << "  name = " << c.experiment << "\n";
    for (const auto& [k, v] : c.params) o << "  " << k << " = " << v << "\n";
    o << "}\n"
      << "output = " << c.output << "\n"
      << "log_samples = " << (c.log_samples ? "true" : "false") << "\n";
    return o.str();
}

namespace {

const std::string* find_param(const RunConfig& c, const std::string& key)
{
    auto it = c.params.find(key);
    return it == c.params.end() ? nullptr : &it->second;
}

}  // namespace

double param_double(const RunConfig& c, const std::string& key, std::optional<double> fallback)
{
    if (auto v = find_param(c, key)) return to_double("experiment." + key, 0, *v);
    if (fallback) return *fallback;
    throw ConfigError("experiment." + key, 0, "required by experiment '" + c.experiment + "'");
}

int param_int(const RunConfig& c, const std::string& key, std::optional<int> fallback)
{
    if (auto v = find_param(c, key)) return static_cast<int>(to_int("experiment." + key, 0, *v));
    if (fallback) return *fallback;
    throw ConfigError("experiment." + key, 0, "required by experiment '" + c.experiment + "'");
}

std::vector<int> param_ints(const RunConfig& c, const std::string& key)
{
    std::vector<int> out;
    for (const auto& s : param_list(c, key)) out.push_back(static_cast<int>(to_int("experiment." + key, 0, s)));
    return out;
}

std::vector<std::string> param_list(const RunConfig& c, const std::string& key,
                                    std::optional<std::vector<std::string>> fallback)
{
    if (auto v = find_param(c, key)) return split(*v);
    if (fallback) return *fallback;
    throw ConfigError("experiment." + key, 0, "required by experiment '" + c.experiment + "'");
}

std::string param_string(const RunConfig& c, const std::string& key, std::optional<std::string> fallback)
{
    if (auto v = find_param(c, key)) return *v;
    if (fallback) return *fallback;
    throw ConfigError("experiment." + key, 0, "required by experiment '" + c.experiment + "'");
}

}  // namespace phi4
