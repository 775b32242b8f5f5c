#include <iostream>

#include <CLI11.hpp>

#include "phi4/runner.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"phi4lab: Monte Carlo experiments for the lattice phi^4 model"};
    std::string path;
    phi4::RunOptions opt;
    std::uint64_t seed = 0;
    std::size_t threads = 0;
    std::string out;
    bool permissive = false;
    app.add_option("config", path, "experiment config file")->required();
    auto* seed_opt = app.add_option("--seed", seed, "override sampler.seed");
    auto* thr_opt = app.add_option("--threads", threads, "override sampler.threads")->check(CLI::PositiveNumber);
    auto* out_opt = app.add_option("--out", out, "output directory");
    auto* strict_flag = app.add_flag("--strict", "exit nonzero on flagged results (default)");
    app.add_flag("--permissive", permissive, "report flagged results but exit 0")->excludes(strict_flag);
    app.set_version_flag("--version", std::string(phi4::version));
    CLI11_PARSE(app, argc, argv);

    if (*seed_opt) opt.seed = seed;
    if (*thr_opt) opt.threads = threads;
    if (*out_opt) opt.out = out;
    opt.strict = !permissive;

    phi4::RunConfig cfg;
    try {
        cfg = phi4::load_config(path);
    } catch (const std::exception& e) {
        std::cerr << path << ": " << e.what() << "\n";
        return 2;
    }
    return phi4::run(cfg, opt, std::cerr);
}
