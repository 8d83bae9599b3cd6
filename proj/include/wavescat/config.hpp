#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wavescat/coefficients.hpp"
#include "wavescat/spectral.hpp"

namespace wavescat {

struct CoefficientSpec {
    std::string kind = "zero";
    std::map<std::string, double> params;
    std::string csv_path;
};

struct SpectralSpec {
    std::string kind = "dirichlet_interval";
    std::map<std::string, double> params;
    std::string csv_path;
};

struct DataSpec {
    std::string kind = "gaussian_bump";
    std::map<std::string, double> params;
    std::string csv_path;
};

struct TimesSpec {
    double t_min = 1.0;
    double t_max = 1e3;
    int points = 25;
};

struct ToleranceSpec {
    double ode = 1e-10;
    double quadrature = 1e-10;
    double limit = 1e-8;
};

/// Schema-validated experiment description; see README for the file format.
struct ExperimentConfig {
    CoefficientSpec coefficient;
    SpectralSpec spectral;
    DataSpec data;
    // Regime declaration overrides (declared asymptotics are authoritative).
    std::optional<double> mu_upper, mu_lower, mu_upper_plus;
    double zone_n = 1.0;
    bool zone_auto = true;
    std::optional<double> gamma_override;
    TimesSpec times;
    ToleranceSpec tol;
    double horizon_cap = 1e6;
    std::uint64_t seed = 0;
    int threads = 0;  // 0 = auto
    bool dump_modes = false;
    double classify_horizon = 1e4;
    int classify_grid = 200;

    std::uint64_t hash = 0;  // FNV-1a of the raw config bytes
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text);

std::uint64_t fnv1a_hash(const std::string& bytes);

/// Instantiate the declared pieces.
CoefficientModel make_coefficient(const ExperimentConfig& cfg);
SpectralModel make_model(const ExperimentConfig& cfg);
DataVector make_data(const ExperimentConfig& cfg, const SpectralModel& model);
std::vector<double> make_times(const TimesSpec& spec);

}  // namespace wavescat
