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

#include "qmn/combinat.hpp"

#include <charconv>
#include <numeric>
#include <sstream>

namespace qmn {

namespace {

using U128 = BigCount::magnitude_type;

constexpr U128 kMax = ~U128{0};

[[noreturn]] void overflow(const char* what) {
    throw CapacityError(std::string("exact count overflow in ") + what + ": result exceeds " +
                        std::string(BigCount::kLimit));
}

U128 gcd128(U128 a, U128 b) {
    while (b != 0) {
        U128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

} // namespace

BigCount BigCount::operator*(BigCount other) const {
    if (value_ != 0 && other.value_ > kMax / value_) overflow("multiplication");
    return from_magnitude(value_ * other.value_);
}

BigCount BigCount::operator+(BigCount other) const {
    if (other.value_ > kMax - value_) overflow("addition");
    return from_magnitude(value_ + other.value_);
}

BigCount BigCount::divide_exact(BigCount divisor) const {
    if (divisor.value_ == 0 || value_ % divisor.value_ != 0) {
        throw DomainError("BigCount::divide_exact: divisor does not divide evenly");
    }
    return from_magnitude(value_ / divisor.value_);
}

std::string BigCount::to_string() const {
    if (value_ == 0) return "0";
    std::string digits;
    U128 v = value_;
    while (v != 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    return {digits.rbegin(), digits.rend()};
}

Composition::Composition(std::vector<int> counts) : counts_(std::move(counts)) {
    for (int c : counts_) {
        if (c < 0) throw DomainError("composition entries must be non-negative");
        total_ += c;
    }
}

Composition Composition::parse(std::string_view text) {
    std::vector<int> counts;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view field = text.substr(start, end - start);
        while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
        while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
        int value = 0;
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
            throw SchemaError("cannot parse composition entry '" + std::string(field) + "' in '" +
                              std::string(text) + "'");
        }
        if (value < 0) throw SchemaError("negative composition entry in '" + std::string(text) + "'");
        counts.push_back(value);
        start = end + 1;
    }
    return Composition(std::move(counts));
}

bool Composition::collision_free() const {
    return std::all_of(counts_.begin(), counts_.end(), [](int c) { return c <= 1; });
}

std::string Composition::to_string() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        if (i) out << ',';
        out << counts_[i];
    }
    return out.str();
}

BigCount binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return BigCount{0};
    k = std::min(k, n - k);
    U128 result = 1;
    for (int i = 0; i < k; ++i) {
        // result * (n - i) / (i + 1) is an integer; cancel the gcd first so the
        // intermediate product only overflows when the result itself is close.
        U128 num = static_cast<U128>(n - i);
        U128 den = static_cast<U128>(i + 1);
        U128 g = gcd128(result, den);
        result /= g;
        den /= g;
        num /= den;
        if (num != 0 && result > kMax / num) overflow("binomial");
        result *= num;
    }
    return BigCount::from_magnitude(result);
}

BigCount multinomial(int m, std::span<const int> parts) {
    int running = 0;
    BigCount result{1};
    for (int p : parts) {
        if (p < 0) throw DomainError("multinomial: negative part");
        running += p;
        result = result * binomial(running, p);
    }
    if (running != m) {
        throw DomainError("multinomial: parts sum to " + std::to_string(running) + ", expected " +
                          std::to_string(m));
    }
    return result;
}

BigCount multinomial(int m, const Composition& parts) { return multinomial(m, parts.counts()); }

BigCount multiplicity(const RoutingMatrix& routing) {
    BigCount result{1};
    std::vector<int> row(static_cast<std::size_t>(routing.cols()));
    for (Eigen::Index i = 0; i < routing.rows(); ++i) {
        for (Eigen::Index j = 0; j < routing.cols(); ++j) row[j] = routing(i, j);
        result = result * multinomial(routing.row(i).sum(), row);
    }
    return result;
}

bool satisfies_margins(const RoutingMatrix& routing, const Composition& rows, const Composition& cols) {
    if (routing.rows() != rows.ports() || routing.cols() != cols.ports()) return false;
    if ((routing.array() < 0).any()) return false;
    for (int i = 0; i < rows.ports(); ++i) {
        if (routing.row(i).sum() != rows[i]) return false;
    }
    for (int j = 0; j < cols.ports(); ++j) {
        if (routing.col(j).sum() != cols[j]) return false;
    }
    return true;
}

void require_compatible(const Composition& input, const Composition& output) {
    if (input.ports() != output.ports()) {
        throw DomainError("input has " + std::to_string(input.ports()) + " ports but output has " +
                          std::to_string(output.ports()));
    }
    if (input.total() != output.total()) {
        throw DomainError("input carries " + std::to_string(input.total()) + " photons but output carries " +
                          std::to_string(output.total()));
    }
}

std::vector<RoutingMatrix> enumerate_routing_matrices(const Composition& input, const Composition& output) {
    std::vector<RoutingMatrix> out;
    for_each_routing_matrix(input, output, [&](const RoutingMatrix& J) { out.push_back(J); });
    return out;
}

std::vector<WeightedRouting> hypergeometric_weights(const Composition& input, const Composition& output) {
    require_compatible(input, output);
    const long double total = multinomial(output.total(), output).to_long_double();
    std::vector<WeightedRouting> out;
    for_each_routing_matrix(input, output, [&](const RoutingMatrix& J) {
        BigCount mu = multiplicity(J);
        out.push_back({J, mu, static_cast<double>(mu.to_long_double() / total)});
    });
    return out;
}

std::vector<Composition> enumerate_compositions(int m, int k) {
    if (m < 0 || k < 1) throw DomainError("enumerate_compositions requires m >= 0 and k >= 1");
    std::vector<Composition> out;
    std::vector<int> current(static_cast<std::size_t>(k), 0);
    // Fill from the last port downwards; the last entry varies slowest.
    auto rec = [&](auto&& self, int port, int left) -> void {
        if (port == 0) {
            current[0] = left;
            out.emplace_back(current);
            return;
        }
        for (int v = 0; v <= left; ++v) {
            current[static_cast<std::size_t>(port)] = v;
            self(self, port - 1, left - v);
        }
        current[static_cast<std::size_t>(port)] = 0;
    };
    rec(rec, k - 1, m);
    return out;
}

} // namespace qmn
