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
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qmn/combinat.hpp"
#include "qmn/optics.hpp"

namespace qmn {

enum class Statistics { boson, distinguishable, fermion };

inline std::string_view to_string(Statistics kind) {
    switch (kind) {
    case Statistics::boson: return "boson";
    case Statistics::distinguishable: return "distinguishable";
    case Statistics::fermion: return "fermion";
    }
    return "?";
}

inline Statistics parse_statistics(std::string_view name) {
    if (name == "boson") return Statistics::boson;
    if (name == "distinguishable" || name == "classical") return Statistics::distinguishable;
    if (name == "fermion") return Statistics::fermion;
    throw DomainError("unknown statistics kind '" + std::string(name) + "'");
}

/// prod_ij U_ij^J_ij, multiplied out in row-major order. The empty product is 1.
template <typename Scalar>
std::complex<Scalar> amplitude(const InterferometerMatrix<Scalar>& u, const RoutingMatrix& routing) {
    if (routing.rows() != u.ports() || routing.cols() != u.ports()) {
        throw DomainError("routing matrix dimension does not match the interferometer");
    }
    std::complex<Scalar> a(1);
    for (Eigen::Index i = 0; i < routing.rows(); ++i) {
        for (Eigen::Index j = 0; j < routing.cols(); ++j) {
            const std::complex<Scalar> uij = u(i, j);
            for (int p = 0; p < routing(i, j); ++p) a *= uij;
        }
    }
    return a;
}

/// Signature of the bijection occupied-input -> occupied-output encoded by a
/// 0/1 routing matrix, both sides taken in ascending port order.
inline int permutation_sign(const RoutingMatrix& routing) {
    std::vector<int> targets;
    for (Eigen::Index i = 0; i < routing.rows(); ++i) {
        for (Eigen::Index j = 0; j < routing.cols(); ++j) {
            if (routing(i, j) > 1) throw CollisionError("routing matrix is not a partial permutation");
            if (routing(i, j) == 1) targets.push_back(static_cast<int>(j));
        }
    }
    int inversions = 0;
    for (std::size_t a = 0; a < targets.size(); ++a) {
        for (std::size_t b = a + 1; b < targets.size(); ++b) inversions += targets[a] > targets[b];
    }
    return inversions % 2 ? -1 : 1;
}

template <typename Scalar>
struct TransitionReport {
    Scalar probability = 0;
    /// sum_J w_J a_J (with sgn(J) folded in for fermions).
    std::complex<Scalar> coherent_sum{0};
    /// sum_J w_J |a_J|^2
    Scalar incoherent_sum = 0;
    int class_count = 0;
    BigCount input_prefactor;
    BigCount output_prefactor;
    /// |coherent|^2 / incoherent; absent when the classical probability is zero.
    std::optional<Scalar> interference_factor;
    /// P / P_cl = input_prefactor * interference_factor; absent when P_cl is zero.
    std::optional<Scalar> ratio;
};

namespace detail {

template <typename Scalar>
TransitionReport<Scalar> routing_sums(const InterferometerMatrix<Scalar>& u, const Composition& input,
                                      const Composition& output, bool signed_sum) {
    require_compatible(input, output);
    if (input.ports() != u.ports()) {
        throw DomainError("composition has " + std::to_string(input.ports()) + " ports but the interferometer has " +
                          std::to_string(u.ports()));
    }
    TransitionReport<Scalar> rep;
    const int m = input.total();
    rep.input_prefactor = multinomial(m, input);
    rep.output_prefactor = multinomial(m, output);
    const Scalar total = rep.output_prefactor.template as<Scalar>();
    for_each_routing_matrix(input, output, [&](const RoutingMatrix& routing) {
        const Scalar w = multiplicity(routing).template as<Scalar>() / total;
        std::complex<Scalar> a = amplitude(u, routing);
        rep.incoherent_sum += w * std::norm(a);
        if (signed_sum && permutation_sign(routing) < 0) a = -a;
        rep.coherent_sum += w * a;
        ++rep.class_count;
    });
    if (rep.incoherent_sum > Scalar(0)) {
        const Scalar factor = std::norm(rep.coherent_sum) / rep.incoherent_sum;
        rep.interference_factor = factor;
        rep.ratio = rep.input_prefactor.template as<Scalar>() * factor;
    }
    return rep;
}

} // namespace detail

/// Identical-boson transition probability
///   P(c | n) = multinomial(m, n) * multinomial(m, c) * |sum_J w_J a_J|^2.
template <typename Scalar>
TransitionReport<Scalar> p_quantum(const InterferometerMatrix<Scalar>& u, const Composition& input,
                                   const Composition& output) {
    auto rep = detail::routing_sums(u, input, output, false);
    rep.probability = rep.input_prefactor.template as<Scalar>() * rep.output_prefactor.template as<Scalar>() *
                      std::norm(rep.coherent_sum);
    return rep;
}

/// Distinguishable-particle probability multinomial(m, c) * sum_J w_J |a_J|^2.
template <typename Scalar>
TransitionReport<Scalar> p_classical(const InterferometerMatrix<Scalar>& u, const Composition& input,
                                     const Composition& output) {
    auto rep = detail::routing_sums(u, input, output, false);
    rep.probability = rep.output_prefactor.template as<Scalar>() * rep.incoherent_sum;
    return rep;
}

/// Identical-fermion probability; routing matrices are partial permutations
/// and enter the coherent sum with their signature.
template <typename Scalar>
TransitionReport<Scalar> p_fermionic(const InterferometerMatrix<Scalar>& u, const Composition& input,
                                     const Composition& output) {
    if (!input.collision_free() || !output.collision_free()) {
        throw CollisionError("fermionic transition requires occupations of at most one per port: n = (" +
                             input.to_string() + "), c = (" + output.to_string() + ")");
    }
    auto rep = detail::routing_sums(u, input, output, true);
    rep.probability = rep.input_prefactor.template as<Scalar>() * rep.output_prefactor.template as<Scalar>() *
                      std::norm(rep.coherent_sum);
    rep.interference_factor.reset();
    rep.ratio.reset();
    return rep;
}

template <typename Scalar>
struct QcRatio {
    BigCount prefactor;
    Scalar interference_factor = 0;
    Scalar ratio = 0;
};

/// Decomposes P / P_cl into multinomial(m, n) times the interference factor.
/// Returns nullopt where P_cl = 0 and the ratio is undefined.
template <typename Scalar>
std::optional<QcRatio<Scalar>> qc_ratio(const InterferometerMatrix<Scalar>& u, const Composition& input,
                                        const Composition& output) {
    const auto rep = detail::routing_sums(u, input, output, false);
    if (!rep.ratio) return std::nullopt;
    return QcRatio<Scalar>{rep.input_prefactor, *rep.interference_factor, *rep.ratio};
}

template <typename Scalar>
Scalar transition_probability(const InterferometerMatrix<Scalar>& u, const Composition& input,
                              const Composition& output, Statistics kind) {
    switch (kind) {
    case Statistics::boson: return p_quantum(u, input, output).probability;
    case Statistics::distinguishable: return p_classical(u, input, output).probability;
    case Statistics::fermion:
        if (!output.collision_free()) return Scalar(0);
        return p_fermionic(u, input, output).probability;
    }
    return Scalar(0);
}

/// Suppressed probabilities can come out as tiny negatives from rounding;
/// values within this distance below zero are reported as zero.
inline constexpr double kReportingClamp = 1e-14;

template <typename Scalar>
Scalar clamp_for_report(Scalar p) {
    return (p < Scalar(0) && p >= Scalar(-kReportingClamp)) ? Scalar(0) : p;
}

template <typename Scalar>
struct OutputDistribution {
    struct Entry {
        Composition output;
        Scalar probability;
    };

    Statistics kind = Statistics::boson;
    Composition input;
    /// One entry per composition of m into k parts, colex order.
    std::vector<Entry> entries;

    std::size_t size() const { return entries.size(); }

    Scalar total() const {
        Scalar s = 0;
        for (const auto& e : entries) s += e.probability;
        return s;
    }

    /// Throws DomainError if `output` is not in the support set.
    Scalar probability(const Composition& output) const {
        auto it = std::find_if(entries.begin(), entries.end(), [&](const Entry& e) { return e.output == output; });
        if (it == entries.end()) throw DomainError("composition (" + output.to_string() + ") not in distribution");
        return it->probability;
    }
};

template <typename Scalar>
OutputDistribution<Scalar> output_distribution(const InterferometerMatrix<Scalar>& u, const Composition& input,
                                               Statistics kind) {
    if (kind == Statistics::fermion && !input.collision_free()) {
        throw CollisionError("fermionic distribution requires a collision-free input (" + input.to_string() + ")");
    }
    if (input.ports() != u.ports()) throw DomainError("input composition length does not match the interferometer");
    OutputDistribution<Scalar> dist;
    dist.kind = kind;
    dist.input = input;
    for (auto& c : enumerate_compositions(input.total(), input.ports())) {
        const Scalar p = transition_probability(u, input, c, kind);
        dist.entries.push_back({std::move(c), p});
    }
    return dist;
}

} // namespace qmn
