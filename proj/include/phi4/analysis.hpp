#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace phi4 {

double mean(std::span<const double> x);
double variance(std::span<const double> x);  // unbiased

struct Autocorrelation {
    double tau_int = std::numeric_limits<double>::quiet_NaN();
    double tau_exp = std::numeric_limits<double>::quiet_NaN();
    std::size_t window = 0;
    bool converged = false;   // window found and N >= 100 tau_int
    bool degenerate = false;  // zero variance
};

// Automatic windowing: smallest W with W >= c tau_int(W). tau_exp from a
// log-linear fit of the normalised autocovariance over lags 1..W.
Autocorrelation autocorrelation(std::span<const double> x, double c = 5.0);

// Standard error of the mean from `bins` equal bins.
double binned_error(std::span<const double> x, std::size_t bins = 32);

struct Jackknife {
    double value = 0.0;
    double error = 0.0;
};

// Delete-one-block jackknife of f(means of the series).
Jackknife jackknife(const std::vector<std::span<const double>>& series,
                    const std::function<double(std::span<const double>)>& f, std::size_t blocks = 50);

struct LinearFit {
    double intercept = 0.0;
    double slope = 0.0;
    double residual = 0.0;  // weighted sum of squared residuals
};

// Least squares y = intercept + slope x with weights w (empty means 1).
LinearFit linear_fit(std::span<const double> x, std::span<const double> y, std::span<const double> w = {});

}  // namespace phi4
