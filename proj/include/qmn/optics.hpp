/**
 * Copyright 2026 The qmultinomial Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "qmn/errors.hpp"

namespace qmn {

template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using RealMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

struct UnitarityCheck {
    bool pass = false;
    double max_deviation = 0.0;
};

inline constexpr double kUnitarityTolerance = 1e-10;

/// kUnitarityTolerance, widened for scalar types too coarse to reach it.
template <typename Scalar>
constexpr double default_unitarity_tolerance() {
    return std::max(kUnitarityTolerance, 64.0 * static_cast<double>(std::numeric_limits<Scalar>::epsilon()));
}

namespace detail {
inline std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}
} // namespace detail

/// Max-entry deviation of M^dagger M from the identity.
template <typename Derived>
UnitarityCheck validate_unitary(const Eigen::MatrixBase<Derived>& m, double tol = kUnitarityTolerance) {
    if (m.rows() != m.cols()) return {false, std::numeric_limits<double>::infinity()};
    using Plain = typename Derived::PlainObject;
    const Plain gram = m.adjoint() * m;
    const double dev = static_cast<double>(
        (gram - Plain::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff());
    return {dev <= tol, dev};
}

/// k x k scattering matrix of a lossless interferometer; entry (i, j) is the
/// amplitude for a photon entering port i to leave through port j.
template <typename Scalar = double>
class InterferometerMatrix {
public:
    using Complex = std::complex<Scalar>;
    using Matrix = ComplexMatrix<Scalar>;

    /// Throws UnitarityError when U^dagger U deviates from I by more than `tol`.
    explicit InterferometerMatrix(Matrix entries, double tol = default_unitarity_tolerance<Scalar>())
        : u_(std::move(entries)) {
        check_shape();
        const UnitarityCheck check = validate_unitary(u_, tol);
        if (!check.pass) {
            throw UnitarityError("matrix is not unitary: max |U^dagger U - I| = " +
                                 detail::sci(check.max_deviation) + " exceeds " + detail::sci(tol));
        }
    }

    /// Skips the unitarity check. For deliberately broken test inputs only.
    static InterferometerMatrix unchecked(Matrix entries) {
        InterferometerMatrix out;
        out.u_ = std::move(entries);
        out.check_shape();
        return out;
    }

    int ports() const { return static_cast<int>(u_.rows()); }
    const Matrix& matrix() const { return u_; }
    Complex operator()(Eigen::Index i, Eigen::Index j) const { return u_(i, j); }

    InterferometerMatrix transpose() const { return unchecked(u_.transpose()); }

    /// p_ij = |U_ij|^2, a doubly stochastic matrix for unitary U.
    RealMatrix<Scalar> probabilities() const { return u_.cwiseAbs2(); }

    template <typename Other>
    InterferometerMatrix<Other> cast() const {
        return InterferometerMatrix<Other>::unchecked(u_.template cast<std::complex<Other>>());
    }

private:
    InterferometerMatrix() = default;

    void check_shape() const {
        if (u_.rows() != u_.cols()) throw DomainError("interferometer matrix must be square");
        if (u_.rows() < 2) throw DomainError("interferometer needs at least two ports");
    }

    Matrix u_;
};

template <typename Scalar>
UnitarityCheck validate_unitary(const InterferometerMatrix<Scalar>& u, double tol = kUnitarityTolerance) {
    return validate_unitary(u.matrix(), tol);
}

/// Lossless beam splitter [[t, i r], [i r, t]] with t = sqrt(T), r = sqrt(1 - T).
template <typename Scalar = double>
InterferometerMatrix<Scalar> beam_splitter(Scalar transmittance) {
    if (!(transmittance >= Scalar(0) && transmittance <= Scalar(1))) {
        throw DomainError("beam splitter transmittance must lie in [0, 1]");
    }
    using C = std::complex<Scalar>;
    const Scalar t = std::sqrt(transmittance);
    const Scalar r = std::sqrt(Scalar(1) - transmittance);
    ComplexMatrix<Scalar> u(2, 2);
    u << C(t, 0), C(0, r),
         C(0, r), C(t, 0);
    return InterferometerMatrix<Scalar>(std::move(u));
}

/// DFT interferometer U_ij = w^(ij) / sqrt(k), w = exp(2 pi i / k), with the
/// port labels i, j running over 1..k. Storage index a holds port a + 1.
template <typename Scalar = double>
InterferometerMatrix<Scalar> fourier(int k) {
    if (k < 2) throw DomainError("fourier interferometer needs k >= 2");
    ComplexMatrix<Scalar> u(k, k);
    const Scalar norm = Scalar(1) / std::sqrt(static_cast<Scalar>(k));
    for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
            // Reduce the exponent mod k before taking the angle.
            const int power = ((a + 1) * (b + 1)) % k;
            const Scalar angle = Scalar(2) * std::numbers::pi_v<Scalar> * power / k;
            u(a, b) = std::polar(norm, angle);
        }
    }
    return InterferometerMatrix<Scalar>(std::move(u));
}

/// Three-port interferometer in the standard CKM-style parametrization: three
/// mixing angles and one irreducible phase, all explicit.
template <typename Scalar = double>
InterferometerMatrix<Scalar> tritter(Scalar theta12, Scalar theta13, Scalar theta23, Scalar phase) {
    using C = std::complex<Scalar>;
    const Scalar c12 = std::cos(theta12), s12 = std::sin(theta12);
    const Scalar c13 = std::cos(theta13), s13 = std::sin(theta13);
    const Scalar c23 = std::cos(theta23), s23 = std::sin(theta23);
    const C e = std::polar(Scalar(1), phase);
    const C ec = std::conj(e);
    ComplexMatrix<Scalar> u(3, 3);
    u << C(c12 * c13), C(s12 * c13), s13 * ec,
         -s12 * c23 - c12 * s23 * s13 * e, c12 * c23 - s12 * s23 * s13 * e, C(s23 * c13),
         s12 * s23 - c12 * c23 * s13 * e, -c12 * s23 - s12 * c23 * s13 * e, C(c23 * c13);
    return InterferometerMatrix<Scalar>(std::move(u));
}

/// Haar-random unitary: QR of a seeded complex Gaussian matrix, with the
/// phases of R's diagonal moved into Q.
template <typename Scalar = double>
InterferometerMatrix<Scalar> random_unitary(int k, std::uint64_t seed) {
    if (k < 2) throw DomainError("random_unitary needs k >= 2");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix<Scalar> z(k, k);
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i < k; ++i) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            z(i, j) = std::complex<Scalar>(static_cast<Scalar>(re), static_cast<Scalar>(im));
        }
    }
    Eigen::HouseholderQR<ComplexMatrix<Scalar>> qr(z);
    ComplexMatrix<Scalar> q = qr.householderQ() * ComplexMatrix<Scalar>::Identity(k, k);
    const ComplexMatrix<Scalar> r = qr.matrixQR().template triangularView<Eigen::Upper>();
    for (int j = 0; j < k; ++j) {
        const std::complex<Scalar> d = r(j, j);
        const Scalar mod = std::abs(d);
        if (mod > Scalar(0)) q.col(j) *= d / mod;
    }
    return InterferometerMatrix<Scalar>(std::move(q));
}

/// True when `u` equals fourier(u.ports()) entrywise within `tol`.
template <typename Scalar>
bool is_fourier(const InterferometerMatrix<Scalar>& u, double tol = 1e-12) {
    const auto f = fourier<Scalar>(u.ports());
    return static_cast<double>((u.matrix() - f.matrix()).cwiseAbs().maxCoeff()) <= tol;
}

} // namespace qmn
