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

#include <optional>
#include <string_view>
#include <vector>

#include "qmn/combinat.hpp"
#include "qmn/optics.hpp"
#include "qmn/transition.hpp"

namespace qmn {

inline constexpr double kSuppressionThreshold = 1e-12;

enum class SuppressionRule { z3_balanced };

inline std::string_view to_string(SuppressionRule rule) {
    switch (rule) {
    case SuppressionRule::z3_balanced: return "z3-balanced";
    }
    return "?";
}

template <typename Scalar = double>
struct SuppressionRecord {
    Composition input;
    Composition output;
    Scalar probability = 0;
    /// Set when a known selection rule predicts this zero.
    std::optional<SuppressionRule> predicted_by_rule;
};

enum class Z3Verdict { allowed, suppressed };

/// Cyclic selection rule of the Fourier tritter at balanced outputs (d, d, d):
/// the transition vanishes unless 2 n_1 + n_2 = 0 (mod 3), ports labelled 1..3.
inline Z3Verdict z3_balanced_rule(const Composition& input) {
    if (input.ports() != 3) throw DomainError("the Z3 rule applies to three ports only");
    if (input.total() % 3 != 0) throw DomainError("a balanced output needs a photon number divisible by 3");
    return (2 * input[0] + input[1]) % 3 == 0 ? Z3Verdict::allowed : Z3Verdict::suppressed;
}

/// Every output composition whose boson probability is below `threshold`, in
/// colex order. Hits on the Fourier tritter at balanced outputs are tagged
/// when the Z3 rule predicts them.
template <typename Scalar>
std::vector<SuppressionRecord<Scalar>> scan_suppressed(const InterferometerMatrix<Scalar>& u, const Composition& input,
                                                       double threshold = kSuppressionThreshold) {
    const bool tritter = u.ports() == 3 && input.total() % 3 == 0 && is_fourier(u);
    const bool rule_fires = tritter && z3_balanced_rule(input) == Z3Verdict::suppressed;
    std::vector<SuppressionRecord<Scalar>> out;
    for (const auto& entry : output_distribution(u, input, Statistics::boson).entries) {
        if (!(static_cast<double>(entry.probability) < threshold)) continue;
        SuppressionRecord<Scalar> rec{input, entry.output, entry.probability, std::nullopt};
        const int d = input.total() / 3;
        if (rule_fires && entry.output == Composition{d, d, d}) rec.predicted_by_rule = SuppressionRule::z3_balanced;
        out.push_back(std::move(rec));
    }
    return out;
}

} // namespace qmn
