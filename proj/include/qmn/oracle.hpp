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

#include <bit>
#include <complex>
#include <vector>

#include <Eigen/LU>

#include "qmn/combinat.hpp"
#include "qmn/optics.hpp"

namespace qmn {

/// Largest matrix the Ryser permanent accepts; cost is O(2^m m).
inline constexpr int kPermanentSizeCap = 20;

/// m x m matrix with row i of U repeated n_i times and column j repeated c_j
/// times, ports in ascending order, repeats consecutive.
template <typename Scalar>
ComplexMatrix<Scalar> scattering_submatrix(const InterferometerMatrix<Scalar>& u, const Composition& input,
                                           const Composition& output) {
    require_compatible(input, output);
    if (input.ports() != u.ports()) throw DomainError("composition length does not match the interferometer");
    auto expand = [](const Composition& comp) {
        std::vector<Eigen::Index> idx;
        for (int port = 0; port < comp.ports(); ++port) idx.insert(idx.end(), static_cast<std::size_t>(comp[port]), static_cast<Eigen::Index>(port));
        return idx;
    };
    return u.matrix()(expand(input), expand(output));
}

/// Ryser's formula with Gray-code subset updates:
///   perm(A) = (-1)^m sum_{S} (-1)^|S| prod_i sum_{j in S} a_ij.
template <typename Derived>
typename Derived::Scalar permanent(const Eigen::MatrixBase<Derived>& a) {
    using T = typename Derived::Scalar;
    if (a.rows() != a.cols()) throw DomainError("permanent requires a square matrix");
    const int m = static_cast<int>(a.rows());
    if (m > kPermanentSizeCap) {
        throw DomainError("permanent: matrix size " + std::to_string(m) + " exceeds the cap of " +
                          std::to_string(kPermanentSizeCap));
    }
    if (m == 0) return T(1);

    Eigen::Matrix<T, Eigen::Dynamic, 1> row_sums = Eigen::Matrix<T, Eigen::Dynamic, 1>::Zero(m);
    std::vector<bool> in_set(static_cast<std::size_t>(m), false);
    T total(0);
    int set_size = 0;
    const std::uint64_t subsets = std::uint64_t{1} << m;
    for (std::uint64_t step = 1; step < subsets; ++step) {
        const int col = std::countr_zero(step);
        if (in_set[col]) {
            row_sums -= a.col(col);
            --set_size;
        } else {
            row_sums += a.col(col);
            ++set_size;
        }
        in_set[col] = !in_set[col];
        const T prod = row_sums.prod();
        if (set_size % 2) total -= prod;
        else total += prod;
    }
    return (m % 2) ? -total : total;
}

/// LU with partial pivoting.
template <typename Derived>
typename Derived::Scalar determinant(const Eigen::MatrixBase<Derived>& a) {
    using T = typename Derived::Scalar;
    if (a.rows() != a.cols()) throw DomainError("determinant requires a square matrix");
    if (a.rows() == 0) return T(1);
    return a.eval().partialPivLu().determinant();
}

/// |perm(U_S)|^2 / (prod n_i! prod c_j!), sharing no code with the routing sum.
template <typename Scalar>
Scalar p_via_permanent(const InterferometerMatrix<Scalar>& u, const Composition& input, const Composition& output) {
    const auto sub = scattering_submatrix(u, input, output);
    Scalar denom(1);
    for (const Composition* comp : {&input, &output}) {
        for (int port = 0; port < comp->ports(); ++port) {
            for (int f = 2; f <= (*comp)[port]; ++f) denom *= static_cast<Scalar>(f);
        }
    }
    return std::norm(permanent(sub)) / denom;
}

/// Fermionic counterpart |det(U_S)|^2 on collision-free configurations.
template <typename Scalar>
Scalar p_via_determinant(const InterferometerMatrix<Scalar>& u, const Composition& input, const Composition& output) {
    if (!input.collision_free() || !output.collision_free()) {
        throw CollisionError("determinant probability requires collision-free compositions");
    }
    return std::norm(determinant(scattering_submatrix(u, input, output)));
}

} // namespace qmn
