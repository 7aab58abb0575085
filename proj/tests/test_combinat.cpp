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

#include <doctest.h>

#include <map>
#include <set>

#include "qmn/combinat.hpp"

using namespace qmn;

namespace {

using U128 = unsigned __int128;

std::uint64_t factorial(int n) {
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

std::vector<int> flatten(const RoutingMatrix& J) {
    std::vector<int> out;
    for (Eigen::Index i = 0; i < J.rows(); ++i)
        for (Eigen::Index j = 0; j < J.cols(); ++j) out.push_back(J(i, j));
    return out;
}

} // namespace

TEST_CASE("multinomial coefficients") {
    CHECK(multinomial(3, Composition{1, 1, 1}) == BigCount{6});
    CHECK(multinomial(4, Composition{2, 2, 0}) == BigCount{6});
    // 10! / (5! 5!) evaluated directly.
    CHECK(multinomial(10, Composition{5, 5}) == BigCount{factorial(10) / (factorial(5) * factorial(5))});
    CHECK(multinomial(10, Composition{5, 5}) == BigCount{252});
    CHECK(multinomial(0, Composition{0, 0}) == BigCount{1});
    CHECK_THROWS_AS(multinomial(5, Composition{2, 2}), DomainError);
}

TEST_CASE("multinomial overflow is an explicit capacity error") {
    std::vector<int> ones(40, 1);
    try {
        multinomial(40, ones);  // 40! > 2^128
        FAIL("expected CapacityError");
    } catch (const CapacityError& e) {
        CHECK(std::string(e.what()).find("2^128") != std::string::npos);
    }
    // 34! < 2^128 < 35!
    std::vector<int> ones34(34, 1);
    CHECK_NOTHROW(multinomial(34, ones34));
    std::vector<int> ones35(35, 1);
    CHECK_THROWS_AS(multinomial(35, ones35), CapacityError);
}

TEST_CASE("binomial matches Pascal's triangle up to the 128-bit edge") {
    const int rows = 130;
    std::vector<std::vector<U128>> pascal(rows + 1);
    for (int n = 0; n <= rows; ++n) {
        pascal[n].assign(static_cast<std::size_t>(n) + 1, 1);
        for (int k = 1; k < n; ++k) pascal[n][k] = pascal[n - 1][k - 1] + pascal[n - 1][k];
    }
    for (int n = 0; n <= rows; ++n) {
        for (int k = 0; k <= n; ++k) REQUIRE(binomial(n, k).magnitude() == pascal[n][k]);
    }
    CHECK(binomial(5, 7) == BigCount{0});
    CHECK_THROWS_AS(binomial(140, 70), CapacityError);
}

TEST_CASE("BigCount arithmetic and formatting") {
    CHECK(BigCount{252}.to_string() == "252");
    CHECK(BigCount{0}.to_string() == "0");
    CHECK(binomial(100, 50).to_string() == "100891344545564193334812497256");
    const BigCount big = BigCount::from_magnitude(~U128{0});
    CHECK_THROWS_AS(big + BigCount{1}, CapacityError);
    CHECK_THROWS_AS(big * BigCount{2}, CapacityError);
    CHECK(BigCount{12}.divide_exact(BigCount{4}) == BigCount{3});
    CHECK_THROWS_AS(BigCount{12}.divide_exact(BigCount{5}), DomainError);
}

TEST_CASE("Composition parsing and validation") {
    const Composition c = Composition::parse("1, 2,0");
    CHECK(c.ports() == 3);
    CHECK(c.total() == 3);
    CHECK(c.to_string() == "1,2,0");
    CHECK_FALSE(c.collision_free());
    CHECK(Composition{1, 0, 1}.collision_free());
    CHECK_THROWS_AS(Composition::parse("1,x"), SchemaError);
    CHECK_THROWS_AS(Composition::parse("1,,2"), SchemaError);
    CHECK_THROWS_AS(Composition::parse("1,-2"), SchemaError);
    CHECK_THROWS_AS(Composition({1, -1}), DomainError);
}

TEST_CASE("routing matrix enumeration examples") {
    SUBCASE("two single photons") {
        const auto all = enumerate_routing_matrices({1, 1}, {1, 1});
        REQUIRE(all.size() == 2);
        CHECK(all[0] == (RoutingMatrix(2, 2) << 0, 1, 1, 0).finished());
        CHECK(all[1] == RoutingMatrix::Identity(2, 2));
    }
    SUBCASE("ten photons split evenly") {
        CHECK(enumerate_routing_matrices({5, 5}, {5, 5}).size() == 6);
    }
    SUBCASE("three singly occupied ports give the permutation matrices") {
        const auto all = enumerate_routing_matrices({1, 1, 1}, {1, 1, 1});
        REQUIRE(all.size() == 6);
        for (const auto& J : all) {
            CHECK(((J.array() == 0) || (J.array() == 1)).all());
            CHECK(J.rowwise().sum().isOnes());
            CHECK(J.colwise().sum().isOnes());
        }
    }
    CHECK_THROWS_AS(enumerate_routing_matrices({1, 1}, {1, 1, 0}), DomainError);
    CHECK_THROWS_AS(enumerate_routing_matrices({2, 1}, {1, 1}), DomainError);
}

TEST_CASE("enumeration order is lexicographic row-major and duplicate free") {
    for (int k = 2; k <= 4; ++k) {
        for (int m = 0; m <= 5; ++m) {
            const auto comps = enumerate_compositions(m, k);
            for (std::size_t a = 0; a < comps.size(); a += 3) {
                for (std::size_t b = 0; b < comps.size(); b += 2) {
                    const auto all = enumerate_routing_matrices(comps[a], comps[b]);
                    for (std::size_t t = 0; t < all.size(); ++t) {
                        REQUIRE(satisfies_margins(all[t], comps[a], comps[b]));
                        if (t) REQUIRE(flatten(all[t - 1]) < flatten(all[t]));
                    }
                }
            }
        }
    }
}

TEST_CASE("enumeration agrees with brute force over all small matrices") {
    // Every k x k matrix with entries in 0..m, bucketed by margins.
    for (auto [k, m] : {std::pair{2, 6}, std::pair{3, 3}}) {
        std::map<std::pair<std::vector<int>, std::vector<int>>, std::size_t> buckets;
        const int cells = k * k;
        std::vector<int> v(static_cast<std::size_t>(cells), 0);
        while (true) {
            std::vector<int> rows(k, 0), cols(k, 0);
            int total = 0;
            for (int t = 0; t < cells; ++t) {
                rows[t / k] += v[t];
                cols[t % k] += v[t];
                total += v[t];
            }
            if (total == m) ++buckets[{rows, cols}];
            int t = 0;
            while (t < cells && v[t] == m) v[t++] = 0;
            if (t == cells) break;
            ++v[t];
        }
        const auto comps = enumerate_compositions(m, k);
        for (const auto& n : comps) {
            for (const auto& c : comps) {
                std::vector<int> rn(n.counts().begin(), n.counts().end()), cc(c.counts().begin(), c.counts().end());
                REQUIRE(enumerate_routing_matrices(n, c).size() == buckets[{rn, cc}]);
            }
        }
    }
}

TEST_CASE("multiplicity") {
    CHECK(multiplicity(RoutingMatrix::Identity(2, 2)) == BigCount{1});
    // binom(2; 1, 1)^2
    CHECK(multiplicity((RoutingMatrix(2, 2) << 1, 1, 1, 1).finished()) == BigCount{4});
    BigCount sum{0};
    for (const auto& J : enumerate_routing_matrices({2, 1, 0}, {1, 1, 1})) sum = sum + multiplicity(J);
    CHECK(sum == BigCount{6});
}

TEST_CASE("Chu-Vandermonde: multiplicities sum to multinomial(m, c)") {
    for (int k = 1; k <= 4; ++k) {
        for (int m = 0; m <= 8; ++m) {
            const auto comps = enumerate_compositions(m, k);
            for (const auto& n : comps) {
                for (const auto& c : comps) {
                    BigCount sum{0};
                    for_each_routing_matrix(n, c, [&](const RoutingMatrix& J) { sum = sum + multiplicity(J); });
                    REQUIRE(sum == multinomial(m, c));
                }
            }
        }
    }
}

TEST_CASE("transposition bijects (n, c) onto (c, n)") {
    for (int k = 2; k <= 3; ++k) {
        for (int m = 0; m <= 5; ++m) {
            const auto comps = enumerate_compositions(m, k);
            for (const auto& n : comps) {
                for (const auto& c : comps) {
                    std::set<std::vector<int>> forward, backward;
                    for (const auto& J : enumerate_routing_matrices(n, c)) forward.insert(flatten(J.transpose()));
                    for (const auto& J : enumerate_routing_matrices(c, n)) backward.insert(flatten(J));
                    REQUIRE(forward == backward);
                }
            }
        }
    }
}

TEST_CASE("hypergeometric weights") {
    SUBCASE("HOM pair") {
        const auto w = hypergeometric_weights({1, 1}, {1, 1});
        REQUIRE(w.size() == 2);
        CHECK(w[0].weight == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(w[1].weight == doctest::Approx(0.5).epsilon(1e-15));
    }
    SUBCASE("n = c = (2, 2) by routing number j = J_11") {
        const auto w = hypergeometric_weights({2, 2}, {2, 2});
        REQUIRE(w.size() == 3);
        for (const auto& entry : w) {
            const int j = entry.routing(0, 0);
            CHECK(entry.weight == doctest::Approx(j == 1 ? 2.0 / 3.0 : 1.0 / 6.0).epsilon(1e-15));
        }
    }
    SUBCASE("point mass at the classical limit") {
        const auto w = hypergeometric_weights({3, 0}, {2, 1});
        REQUIRE(w.size() == 1);
        CHECK(w[0].weight == 1.0);
    }
    SUBCASE("weights sum to one") {
        for (int k = 2; k <= 4; ++k) {
            for (int m = 0; m <= 6; ++m) {
                const auto comps = enumerate_compositions(m, k);
                for (const auto& n : comps) {
                    for (const auto& c : comps) {
                        double s = 0;
                        for (const auto& e : hypergeometric_weights(n, c)) {
                            REQUIRE(e.weight >= 0.0);
                            REQUIRE(e.weight <= 1.0);
                            s += e.weight;
                        }
                        REQUIRE(std::abs(s - 1.0) <= 1e-12);
                    }
                }
            }
        }
    }
}

TEST_CASE("compositions") {
    const auto two = enumerate_compositions(2, 2);
    REQUIRE(two.size() == 3);
    CHECK(two[0] == Composition{2, 0});
    CHECK(two[1] == Composition{1, 1});
    CHECK(two[2] == Composition{0, 2});
    CHECK(enumerate_compositions(3, 2).size() == 4);
    CHECK(enumerate_compositions(4, 3).size() == binomial(6, 2).magnitude());
    CHECK(enumerate_compositions(0, 3).size() == 1);
    CHECK_THROWS_AS(enumerate_compositions(-1, 2), DomainError);
    CHECK_THROWS_AS(enumerate_compositions(2, 0), DomainError);

    for (int k = 1; k <= 5; ++k) {
        for (int m = 0; m <= 6; ++m) {
            const auto all = enumerate_compositions(m, k);
            REQUIRE(all.size() == binomial(m + k - 1, k - 1).magnitude());
            std::set<Composition> unique(all.begin(), all.end());
            REQUIRE(unique.size() == all.size());
            for (std::size_t t = 1; t < all.size(); ++t) {
                // colex: compare reversed tuples lexicographically
                std::vector<int> a(all[t - 1].counts().rbegin(), all[t - 1].counts().rend());
                std::vector<int> b(all[t].counts().rbegin(), all[t].counts().rend());
                REQUIRE(a < b);
            }
            for (const auto& c : all) REQUIRE(c.total() == m);
        }
    }
}
