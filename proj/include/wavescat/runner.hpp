#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wavescat/config.hpp"
#include "wavescat/scattering.hpp"

namespace wavescat {

/// Exit-code contract of the batch front end.
enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailure = 2,
    kExitConfigError = 3,
    kExitNumericalFailure = 4,
};

/// Everything a run needs, resolved from the config once.
struct Experiment {
    ExperimentConfig cfg;
    CoefficientModel coeff;
    SpectralModel model;
    DataVector data;
    Regime regime;
    double zone_n = 1.0;
    int threads = 1;

    double gamma() const {
        return cfg.gamma_override ? *cfg.gamma_override : regime.gamma_index;
    }
};

Experiment resolve_experiment(const ExperimentConfig& cfg);

/// One row of the verify pass/fail table.
struct CheckRow {
    std::string check;
    bool pass = false;
    double value = 0.0;
    std::string detail;
};

int run_simulate(const ExperimentConfig& cfg, const std::string& out);
int run_classify(const ExperimentConfig& cfg, const std::string& out);
int run_wave_op(const ExperimentConfig& cfg, const std::string& out, bool with_minus);
int run_scatter_residual(const ExperimentConfig& cfg, const std::string& waveop_path,
                         const std::string& out);
int run_two_sided(const ExperimentConfig& cfg, const std::string& out);
/// suite: "all", "zone-bounds", "hyperbolic-rep", "detn1", "q1-tail",
/// "energy-estimate".
int run_verify(const ExperimentConfig& cfg, const std::string& out_dir,
               const std::string& suite = "all", bool verbose = false);

/// Read back a wave-operator table emitted by run_wave_op.
WaveOperatorTable load_wave_operator_table(const std::string& path);

}  // namespace wavescat
