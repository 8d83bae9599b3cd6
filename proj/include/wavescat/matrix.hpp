#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>

namespace wavescat {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2d;
using Mat2C = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2d;
using Vec2C = Eigen::Vector2cd;

/// Largest singular value of a 2x2 matrix, closed form.
template <typename Derived>
double spectral_norm(const Eigen::MatrixBase<Derived>& m) {
    const double f = m.derived().cwiseAbs2().sum();
    const double d = std::abs(m.derived().determinant());
    const double disc = std::max(f * f - 4.0 * d * d, 0.0);
    return std::sqrt(0.5 * (f + std::sqrt(disc)));
}

/// Smallest singular value of a 2x2 matrix.
template <typename Derived>
double smallest_singular_value(const Eigen::MatrixBase<Derived>& m) {
    const double f = m.derived().cwiseAbs2().sum();
    const double d = std::abs(m.derived().determinant());
    const double disc = std::max(f * f - 4.0 * d * d, 0.0);
    return std::sqrt(std::max(0.5 * (f - std::sqrt(disc)), 0.0));
}

template <typename Derived>
double frobenius_norm(const Eigen::MatrixBase<Derived>& m) {
    return m.derived().norm();
}

/// Matrix of entry absolute values (the |A| of the zone estimates).
inline Mat2 entrywise_abs(const Mat2& m) { return m.cwiseAbs(); }
inline Mat2 entrywise_abs(const Mat2C& m) { return m.cwiseAbs(); }

/// Largest |imaginary part| over the entries.
inline double imag_residue(const Mat2C& m) {
    return m.imag().cwiseAbs().maxCoeff();
}

inline Mat2 real_part(const Mat2C& m) { return m.real(); }

inline Mat2C complexify(const Mat2& m) { return m.cast<Complex>(); }

}  // namespace wavescat
