#include "phi4/analysis.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace phi4 {

double mean(std::span<const double> x)
{
    if (x.empty()) return std::numeric_limits<double>::quiet_NaN();
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x)
{
    if (x.size() < 2) return 0.0;
    double m = mean(x), s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

Autocorrelation autocorrelation(std::span<const double> x, double c)
{
    Autocorrelation r;
    const std::size_t N = x.size();
    if (N < 2) return r;
    const double m = mean(x);
    double c0 = 0.0;
    for (double v : x) c0 += (v - m) * (v - m);
    c0 /= static_cast<double>(N);
    if (!(c0 > 1e-300 * (1.0 + m * m))) {
        r.degenerate = true;
        return r;
    }
    std::vector<double> rho{1.0};
    double tau = 0.5;
    for (std::size_t t = 1; t < N; ++t) {
        double s = 0.0;
        for (std::size_t i = 0; i + t < N; ++i) s += (x[i] - m) * (x[i + t] - m);
        rho.push_back(s / static_cast<double>(N) / c0);
        tau += rho.back();
        if (static_cast<double>(t) >= c * tau) {
            r.window = t;
            break;
        }
    }
    r.tau_int = std::max(tau, 0.5);
    r.converged = r.window > 0 && static_cast<double>(N) >= 100.0 * r.tau_int;
    // Exponential fit on the positive part of the window.
    std::vector<double> lx, ly;
    for (std::size_t t = 1; t < rho.size() && rho[t] > 0.0; ++t) {
        lx.push_back(static_cast<double>(t));
        ly.push_back(std::log(rho[t]));
    }
    if (lx.size() >= 2) {
        auto f = linear_fit(lx, ly);
        if (f.slope < 0.0) r.tau_exp = -1.0 / f.slope;
    } else if (lx.size() == 1) {
        r.tau_exp = -1.0 / ly[0];
    }
    return r;
}

double binned_error(std::span<const double> x, std::size_t bins)
{
    if (bins < 2 || x.size() < bins) bins = std::max<std::size_t>(std::min(x.size(), bins), 1);
    if (bins < 2) return 0.0;
    const std::size_t size = x.size() / bins;
    std::vector<double> means(bins);
    for (std::size_t b = 0; b < bins; ++b) means[b] = mean(x.subspan(b * size, size));
    return std::sqrt(variance(means) / static_cast<double>(bins));
}

Jackknife jackknife(const std::vector<std::span<const double>>& series,
                    const std::function<double(std::span<const double>)>& f, std::size_t blocks)
{
    if (series.empty()) throw std::invalid_argument("jackknife needs at least one series");
    const std::size_t N = series[0].size();
    for (const auto& s : series)
        if (s.size() != N) throw std::invalid_argument("jackknife series have different lengths");
    blocks = std::min(blocks, N);
    if (blocks < 2) throw std::invalid_argument("jackknife needs at least two samples");
    const std::size_t size = N / blocks, used = size * blocks;
    const std::size_t K = series.size();
    std::vector<double> total(K, 0.0);
    std::vector<std::vector<double>> block(blocks, std::vector<double>(K, 0.0));
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t b = 0; b < blocks; ++b) {
            for (std::size_t i = b * size; i < (b + 1) * size; ++i) block[b][k] += series[k][i];
            total[k] += block[b][k];
        }
    std::vector<double> m(K);
    for (std::size_t k = 0; k < K; ++k) m[k] = total[k] / static_cast<double>(used);
    Jackknife j;
    j.value = f(m);
    std::vector<double> est(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        for (std::size_t k = 0; k < K; ++k) m[k] = (total[k] - block[b][k]) / static_cast<double>(used - size);
        est[b] = f(m);
    }
    double em = mean(est), s = 0.0;
    for (double e : est) s += (e - em) * (e - em);
    j.error = std::sqrt(s * static_cast<double>(blocks - 1) / static_cast<double>(blocks));
    return j;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y, std::span<const double> w)
{
    if (x.size() != y.size() || (!w.empty() && w.size() != x.size()))
        throw std::invalid_argument("fit inputs have different lengths");
    if (x.size() < 2) throw std::invalid_argument("fit needs two points");
    double S = 0, Sx = 0, Sy = 0, Sxx = 0, Sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double wi = w.empty() ? 1.0 : w[i];
        S += wi;
        Sx += wi * x[i];
        Sy += wi * y[i];
        Sxx += wi * x[i] * x[i];
        Sxy += wi * x[i] * y[i];
    }
    double det = S * Sxx - Sx * Sx;
    if (det == 0.0) throw std::invalid_argument("degenerate fit abscissae");
    LinearFit f;
    f.slope = (S * Sxy - Sx * Sy) / det;
    f.intercept = (Sy - f.slope * Sx) / S;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double wi = w.empty() ? 1.0 : w[i];
        double d = y[i] - f.intercept - f.slope * x[i];
        f.residual += wi * d * d;
    }
    return f;
}

}  // namespace phi4
