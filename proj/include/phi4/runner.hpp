#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "phi4/config.hpp"

namespace phi4 {

struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads;
    std::optional<std::string> out;
    bool strict = true;
};

struct ResultRow {
    std::string quantity;
    double x = 0.0;
    EstimateResult estimate;
};

// Plot-ready (x, y, yerr) series; meta lines are appended as '#' comments.
struct PlotSeries {
    std::string name;
    std::vector<double> x, y, yerr;
    std::vector<std::string> meta;
};

struct RunResults {
    std::vector<ResultRow> rows;
    std::vector<PlotSeries> series;
    std::vector<std::vector<double>> samples;  // per observable, chain 0, when logged
};

// Runs the configured experiment without touching the filesystem.
RunResults execute(const RunConfig& cfg);

// Parameters of a config as flat key/value pairs.
std::map<std::string, std::string> flat_params(const RunConfig& cfg);

// RFC 4180 quoting when needed.
std::string csv_field(const std::string& s);

// Column order: experiment, quantity, x, value, error, samples, tau_int,
// converged, flag, seed, params.
std::string results_csv(const RunConfig& cfg, const RunResults& r);

// One file <dir>/<name>.dat per series; requested names must exist (empty
// request means all series).
void emit_plot_data(const std::vector<PlotSeries>& series, const std::vector<std::string>& requested,
                    const std::string& dir, const std::string& header);

// Execute and write results.csv, summary.json and plot files under the
// output directory. Returns the process exit status.
int run(RunConfig cfg, const RunOptions& opt, std::ostream& log);

}  // namespace phi4
