#pragma once

#include <utility>
#include <vector>

namespace wavescat {

struct FitResult {
    double exponent = 0.0;      // least-squares slope of log value vs log t
    double fit_residual = 0.0;  // rms residual of the fit in log space
};

/// Power-law decay exponent of a positive series: needs >= 8 points spanning
/// at least two decades in t.
FitResult decay_fit(const std::vector<std::pair<double, double>>& series);

double median(std::vector<double> values);

}  // namespace wavescat
