#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "wavescat/matrix.hpp"

namespace wavescat {

struct SpectralPoint {
    double lambda = 0.0;  // Lambda(xi) = sqrt(A(xi))
    double weight = 0.0;  // quadrature weight of the spectral measure
    bool is_kernel = false;
};

/// Weighted sample set of the spectral function Lambda(xi), sorted by
/// lambda; kernel modes (lambda = 0) are flagged. Immutable after
/// construction and safe for shared concurrent reads.
struct SpectralModel {
    std::string label;
    std::vector<SpectralPoint> points;

    std::size_t size() const { return points.size(); }
    /// Smallest positive lambda; throws if none exists.
    double min_positive_lambda() const;
    double max_lambda() const;
};

/// Validates invariants (weights > 0, lambda >= 0, kernel flag iff
/// lambda == 0) and sorts by lambda.
SpectralModel make_spectral_model(std::string label, std::vector<SpectralPoint> points);

/// Per-mode Cauchy data (u1, u2) aligned with a SpectralModel. Trajectories
/// reuse this container for the V-representation (Lambda*u, u').
struct DataVector {
    std::vector<Complex> u1, u2;

    std::size_t size() const { return u1.size(); }
    static DataVector zero(std::size_t n) {
        return DataVector{std::vector<Complex>(n, Complex(0.0)),
                          std::vector<Complex>(n, Complex(0.0))};
    }
};

/// ||(u1,u2)||_E = sqrt( sum_j w_j (lambda_j^2 |u1_j|^2 + |u2_j|^2) ).
double energy_norm(const SpectralModel& model, const DataVector& data);

/// Plain weighted l2 norm of a V-representation state (Lambda*u, u').
double v_norm(const SpectralModel& model, const DataVector& v_state);

/// Cauchy data -> V-representation (lambda_j u1_j, u2_j).
DataVector to_v_representation(const SpectralModel& model, const DataVector& data);

/// Modified energy norm with bracket [lambda] = min(lambda, zone_n):
/// sqrt( sum_j w_j ( |[l]^{-g-1} l u1|^2 + |[l]^{-g} u2|^2 ) ).
/// Kernel-mode data must vanish when gamma > 0.
double e_gamma_norm(const SpectralModel& model, const DataVector& data, double gamma,
                    double zone_n);

enum class ModelKind {
    DirichletInterval,
    NeumannInterval,
    KleinGordon,
    WaveRadial,
    PlateRadial,
};

struct ModelParams {
    int count = 64;        // number of modes / radial samples
    int dim = 1;           // spatial dimension for radial weights xi^(dim-1)
    double xi_min = 0.0;   // radial grid lower edge
    double xi_max = 8.0;   // radial grid upper edge
};

/// Built-in spectral models of the worked examples: Dirichlet/Neumann
/// interval sequences, Klein-Gordon Lambda = sqrt(1+xi^2), wave Lambda = xi,
/// plate Lambda = xi^2 with radial Fourier weights xi^(dim-1) dxi.
SpectralModel builtin_model(ModelKind kind, const ModelParams& params);

SpectralModel dirichlet_interval(int k);
SpectralModel neumann_interval(int k);
SpectralModel klein_gordon_radial(const ModelParams& params);
SpectralModel wave_radial(const ModelParams& params);
SpectralModel plate_radial(const ModelParams& params);

// Data generators (kernel modes always get zero data).
DataVector gaussian_bump_data(const SpectralModel& model, double center, double width);
/// Smooth compactly supported bump on lambda in [lo, hi].
DataVector compact_bump_data(const SpectralModel& model, double lo, double hi);
/// Data on kernel modes only (everything else zero).
DataVector kernel_only_data(const SpectralModel& model, Complex u1, Complex u2);
/// Deterministic pseudo-random data from a seed; optional support window.
DataVector seeded_random_data(const SpectralModel& model, std::uint64_t seed, double lambda_lo = 0.0,
                       double lambda_hi = std::numeric_limits<double>::infinity());

}  // namespace wavescat
