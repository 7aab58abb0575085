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
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "qmn/errors.hpp"

namespace qmn {

/// Exact non-negative integer with a 128-bit magnitude. Arithmetic that would
/// wrap throws CapacityError instead.
class BigCount {
public:
    using magnitude_type = unsigned __int128;

    constexpr BigCount() = default;
    constexpr explicit BigCount(std::uint64_t value) : value_(value) {}

    static constexpr BigCount from_magnitude(magnitude_type value) {
        BigCount out;
        out.value_ = value;
        return out;
    }

    constexpr magnitude_type magnitude() const { return value_; }

    BigCount operator*(BigCount other) const;
    BigCount operator+(BigCount other) const;
    /// Exact division; throws DomainError if `divisor` does not divide evenly.
    BigCount divide_exact(BigCount divisor) const;

    long double to_long_double() const { return static_cast<long double>(value_); }

    template <typename Scalar>
    Scalar as() const {
        return static_cast<Scalar>(to_long_double());
    }

    std::string to_string() const;

    friend constexpr bool operator==(BigCount a, BigCount b) { return a.value_ == b.value_; }
    friend constexpr std::strong_ordering operator<=>(BigCount a, BigCount b) {
        return a.value_ <=> b.value_;
    }

    static constexpr std::string_view kLimit = "2^128 - 1";

private:
    magnitude_type value_ = 0;
};

/// Ordered tuple of non-negative photon counts, one per port.
class Composition {
public:
    Composition() = default;
    explicit Composition(std::vector<int> counts);
    Composition(std::initializer_list<int> counts) : Composition(std::vector<int>(counts)) {}

    /// Parses "1,2,0". Whitespace around entries is ignored.
    static Composition parse(std::string_view text);

    int ports() const { return static_cast<int>(counts_.size()); }
    int total() const { return total_; }
    int operator[](int port) const { return counts_[static_cast<std::size_t>(port)]; }
    std::span<const int> counts() const { return counts_; }

    /// True when no port holds more than one photon.
    bool collision_free() const;

    std::string to_string() const;

    friend bool operator==(const Composition&, const Composition&) = default;
    friend auto operator<=>(const Composition&, const Composition&) = default;

private:
    std::vector<int> counts_;
    int total_ = 0;
};

/// J(i, j) = photons routed from input port i to output port j.
using RoutingMatrix = Eigen::MatrixXi;

BigCount binomial(int n, int k);

/// m! / prod(parts_i!). Throws DomainError if the parts do not sum to m.
BigCount multinomial(int m, const Composition& parts);
BigCount multinomial(int m, std::span<const int> parts);

/// prod_i multinomial(n_i; J_i1, ..., J_ik), the number of labelled photon
/// assignments realizing J.
BigCount multiplicity(const RoutingMatrix& routing);

bool satisfies_margins(const RoutingMatrix& routing, const Composition& rows, const Composition& cols);

/// Checks that n and c are compositions of the same total over the same port count.
void require_compatible(const Composition& input, const Composition& output);

/// Visits every integer point of the transportation polytope with row margins
/// `input` and column margins `output`, in lexicographic row-major order.
///
/// Each entry is bounded below by the row slack that the remaining columns
/// cannot absorb and above by min(row slack, column slack), so every partial
/// fill extends to at least one complete matrix.
template <typename Visitor>
void for_each_routing_matrix(const Composition& input, const Composition& output, Visitor&& visit) {
    require_compatible(input, output);
    const int k = input.ports();
    RoutingMatrix routing = RoutingMatrix::Zero(k, k);
    std::vector<int> row_left(input.counts().begin(), input.counts().end());
    std::vector<int> col_left(output.counts().begin(), output.counts().end());

    auto fill = [&](auto&& self, int cell) -> void {
        if (cell == k * k) {
            visit(static_cast<const RoutingMatrix&>(routing));
            return;
        }
        const int i = cell / k;
        const int j = cell % k;
        int later_cols = 0;
        for (int jj = j + 1; jj < k; ++jj) later_cols += col_left[jj];
        const int lo = std::max(0, row_left[i] - later_cols);
        const int hi = std::min(row_left[i], col_left[j]);
        for (int v = lo; v <= hi; ++v) {
            routing(i, j) = v;
            row_left[i] -= v;
            col_left[j] -= v;
            self(self, cell + 1);
            row_left[i] += v;
            col_left[j] += v;
        }
        routing(i, j) = 0;
    };
    if (k == 0) return;
    fill(fill, 0);
}

std::vector<RoutingMatrix> enumerate_routing_matrices(const Composition& input, const Composition& output);

struct WeightedRouting {
    RoutingMatrix routing;
    BigCount multiplicity;
    /// multiplicity / multinomial(m, output): the multivariate hypergeometric pmf.
    double weight = 0.0;
};

std::vector<WeightedRouting> hypergeometric_weights(const Composition& input, const Composition& output);

/// All compositions of m into k parts, in colex order (last entry slowest).
std::vector<Composition> enumerate_compositions(int m, int k);

} // namespace qmn
