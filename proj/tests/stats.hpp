#pragma once

#include <cmath>
#include <vector>

namespace phi4::testing {

struct MeanError {
    double mean = 0.0;
    double error = 0.0;
};

// Batch-means estimate with a fixed number of batches.
inline MeanError batch_means(const std::vector<double>& x, std::size_t batches = 50)
{
    const std::size_t size = x.size() / batches;
    std::vector<double> b(batches, 0.0);
    for (std::size_t i = 0; i < batches; ++i) {
        for (std::size_t j = 0; j < size; ++j) b[i] += x[i * size + j];
        b[i] /= static_cast<double>(size);
    }
    double m = 0.0;
    for (double v : b) m += v;
    m /= static_cast<double>(batches);
    double s = 0.0;
    for (double v : b) s += (v - m) * (v - m);
    return {m, std::sqrt(s / static_cast<double>(batches - 1) / static_cast<double>(batches))};
}

inline bool within(double a, double b, double ea, double eb, double k)
{
    return std::abs(a - b) <= k * std::sqrt(ea * ea + eb * eb);
}

}  // namespace phi4::testing
