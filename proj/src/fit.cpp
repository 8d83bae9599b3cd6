#include "wavescat/fit.hpp"

#include <algorithm>
#include <cmath>

#include "wavescat/errors.hpp"

namespace wavescat {

FitResult decay_fit(const std::vector<std::pair<double, double>>& series) {
    if (series.size() < 8)
        throw ArgumentError("decay_fit: needs at least 8 points");
    double t_min = series.front().first, t_max = series.front().first;
    for (const auto& [t, v] : series) {
        if (!(t > 0.0) || !(v > 0.0))
            throw ArgumentError("decay_fit: times and values must be positive");
        t_min = std::min(t_min, t);
        t_max = std::max(t_max, t);
    }
    if (t_max < 100.0 * t_min)
        throw ArgumentError("decay_fit: series must span at least two decades");

    const double n = double(series.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& [t, v] : series) {
        sx += std::log(t);
        sy += std::log(v);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [t, v] : series) {
        const double dx = std::log(t) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(v) - my);
    }
    const double slope = sxy / sxx;
    double ss = 0.0;
    for (const auto& [t, v] : series) {
        const double r = (std::log(v) - my) - slope * (std::log(t) - mx);
        ss += r * r;
    }
    return FitResult{slope, std::sqrt(ss / n)};
}

double median(std::vector<double> values) {
    if (values.empty()) throw ArgumentError("median of empty set");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace wavescat
