#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qenergy::stats {

// Least-squares slope of ln y against ln x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("need matching samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("log-log fit needs positive data");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline constexpr double z99 = 2.3263478740408408;  // one-sided 99% normal quantile

// Wilson score bounds for a binomial proportion.
inline double wilson_lower(std::size_t successes, std::size_t trials, double z = z99) {
    if (trials == 0) return 0.0;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    return (p + z2 / (2 * n) - z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n))) / (1 + z2 / n);
}

inline double binomial_sigma(double p, std::size_t trials) {
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

}  // namespace qenergy::stats
