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

#include <filesystem>
#include <fstream>

#include "qmn/matrix_io.hpp"
#include "qmn/optics.hpp"

using namespace qmn;
using C = std::complex<double>;

TEST_CASE("beam splitter convention") {
    const auto id = beam_splitter(1.0);
    CHECK(id.matrix().isApprox(ComplexMatrix<double>::Identity(2, 2)));

    const auto bs = beam_splitter(0.5);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(std::abs(bs(i, j)) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(bs(0, 1).real() == 0.0);
    CHECK(bs(1, 0).real() == 0.0);
    CHECK(bs(0, 1).imag() > 0.0);

    const auto third = beam_splitter(1.0 / 3.0);
    CHECK(std::norm(third(0, 0)) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(std::norm(third(0, 1)) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

    CHECK_THROWS_AS(beam_splitter(-0.1), DomainError);
    CHECK_THROWS_AS(beam_splitter(1.5), DomainError);
    CHECK_THROWS_AS(beam_splitter(std::nan("")), DomainError);

    for (double T : {0.0, 0.1, 0.3, 0.5, 0.77, 1.0}) {
        const auto u = beam_splitter(T);
        CHECK(u(0, 0) == u(1, 1));
        CHECK(u(0, 1) == u(1, 0));
        CHECK(validate_unitary(u, 1e-10).pass);
    }
}

TEST_CASE("fourier interferometer") {
    const double pi = std::numbers::pi;
    for (int k = 2; k <= 8; ++k) {
        const auto f = fourier(k);
        const auto check = validate_unitary(f, 1e-10);
        CHECK(check.pass);
        CHECK(check.max_deviation < 1e-14);
        CHECK((f.probabilities().array() - 1.0 / k).abs().maxCoeff() < 1e-15);
        // rows pairwise orthogonal
        for (int a = 0; a < k; ++a)
            for (int b = a + 1; b < k; ++b) CHECK(std::abs(f.matrix().row(a).dot(f.matrix().row(b))) < 1e-14);
    }
    // Ports are labelled 1..k: storage (0, 0) holds w^(1*1).
    const auto f3 = fourier(3);
    const C w = std::polar(1.0, 2 * pi / 3);
    CHECK(std::abs(f3(0, 0) - w / std::sqrt(3.0)) < 1e-15);
    CHECK(std::abs(f3(1, 2) - std::pow(w, 6) / std::sqrt(3.0)) < 1e-15);
    CHECK(std::abs(f3(1, 1) - std::pow(w, 4) / std::sqrt(3.0)) < 1e-15);
    CHECK(is_fourier(f3));
    CHECK_FALSE(is_fourier(random_unitary(3, 1)));
    CHECK_THROWS_AS(fourier(1), DomainError);
}

TEST_CASE("validate_unitary reports the max deviation") {
    CHECK(validate_unitary(fourier(3), 1e-10).pass);
    CHECK(validate_unitary(beam_splitter(0.3), 1e-10).pass);

    ComplexMatrix<double> m = fourier(3).matrix();
    m(1, 2) += 1e-3;
    const auto check = validate_unitary(m, 1e-10);
    CHECK_FALSE(check.pass);
    // Perturbing one entry by e changes (U^dagger U) entries in column 2 and
    // row 2 by |U| e ~ e / sqrt(3), and the diagonal by 2 Re(conj(U) e) + e^2.
    CHECK(check.max_deviation > 1e-4);
    CHECK(check.max_deviation < 3e-3);
    CHECK_THROWS_AS(InterferometerMatrix<double>{m}, UnitarityError);
    CHECK_NOTHROW(InterferometerMatrix<double>::unchecked(m));

    CHECK_FALSE(validate_unitary(ComplexMatrix<double>::Zero(2, 3)).pass);
    CHECK_THROWS_AS(InterferometerMatrix<double>::unchecked(ComplexMatrix<double>::Identity(1, 1)), DomainError);
}

TEST_CASE("random unitaries") {
    const auto a = random_unitary(3, 42);
    const auto b = random_unitary(3, 42);
    CHECK(a.matrix() == b.matrix());
    CHECK(a.matrix() != random_unitary(3, 43).matrix());
    CHECK(validate_unitary(random_unitary(4, 7), 1e-10).pass);
    const auto u2 = random_unitary(2, 1);
    CHECK(validate_unitary(u2, 1e-10).pass);
    CHECK(std::abs(std::abs(u2(0, 1)) - std::abs(u2(1, 0))) < 1e-14);
    for (int k = 2; k <= 8; ++k)
        for (std::uint64_t seed = 0; seed < 10; ++seed) REQUIRE(validate_unitary(random_unitary(k, seed), 1e-10).pass);
}

TEST_CASE("tritter parametrization") {
    for (double phase : {0.0, 0.4, 1.3, std::numbers::pi}) {
        const auto t = tritter(0.6, 0.7, 0.8, phase);
        CHECK(validate_unitary(t, 1e-12).pass);
    }
    const auto real = tritter(0.6, 0.7, 0.8, 0.0);
    CHECK(real.matrix().imag().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("scalar type is a template parameter") {
    const auto f = fourier<long double>(3);
    CHECK(validate_unitary(f, 1e-17).pass);
    const auto bs = beam_splitter<float>(0.5f);
    CHECK(validate_unitary(bs, 1e-6).pass);
}

TEST_CASE("matrix JSON round trip") {
    const auto f = fourier(3);
    const auto back = matrix_from_json(matrix_to_json(f));
    CHECK(back.matrix() == f.matrix());

    const auto u = random_unitary(4, 99);
    const auto path = std::filesystem::temp_directory_path() / "qmn_test_matrix.json";
    write_matrix(path, u);
    CHECK(read_matrix(path).matrix() == u.matrix());
    std::filesystem::remove(path);

    CHECK(matrix_to_json(beam_splitter(0.3)).find("0.54772255750516607") != std::string::npos);
}

TEST_CASE("matrix JSON errors") {
    const std::string three_rows = R"({"k": 2, "re": [[1,0],[0,1],[0,0]], "im": [[0,0],[0,0]]})";
    CHECK_THROWS_AS(matrix_from_json(three_rows), SchemaError);
    CHECK_THROWS_AS(matrix_from_json(R"({"k": 2, "re": [[1,0],[0]], "im": [[0,0],[0,0]]})"), SchemaError);
    CHECK_THROWS_AS(matrix_from_json(R"({"re": [[1]], "im": [[0]]})"), SchemaError);
    CHECK_THROWS_AS(matrix_from_json(R"({"k": 2, "re": [[1,"a"],[0,1]], "im": [[0,0],[0,0]]})"), SchemaError);
    CHECK_THROWS_AS(matrix_from_json("not json"), SchemaError);
    CHECK_THROWS_AS(read_matrix("/nonexistent/qmn.json"), SchemaError);

    // Off by 0.05 in one entry: fails at 1e-2, loads with the override.
    const std::string skewed = R"({"k": 2, "re": [[1.05,0],[0,1]], "im": [[0,0],[0,0]]})";
    CHECK_THROWS_AS(matrix_from_json(skewed, {1e-2, false}), UnitarityError);
    const auto loaded = matrix_from_json(skewed, {1e-2, true});
    CHECK(loaded(0, 0).real() == 1.05);
}
