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

#include "qmn/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qmn {

namespace {

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::vector<double>> read_block(const nlohmann::json& doc, const char* key, int k) {
    if (!doc.contains(key) || !doc[key].is_array()) {
        throw SchemaError(std::string("matrix file: missing array '") + key + "'");
    }
    const auto& rows = doc[key];
    if (static_cast<int>(rows.size()) != k) {
        throw SchemaError(std::string("matrix file: '") + key + "' has " + std::to_string(rows.size()) +
                          " rows, expected k = " + std::to_string(k));
    }
    std::vector<std::vector<double>> out;
    for (const auto& row : rows) {
        if (!row.is_array() || static_cast<int>(row.size()) != k) {
            throw SchemaError(std::string("matrix file: row of '") + key + "' does not have k = " +
                              std::to_string(k) + " entries");
        }
        std::vector<double> values;
        for (const auto& v : row) {
            if (!v.is_number()) throw SchemaError(std::string("matrix file: non-numeric entry in '") + key + "'");
            values.push_back(v.get<double>());
        }
        out.push_back(std::move(values));
    }
    return out;
}

} // namespace

std::string matrix_to_json(const InterferometerMatrix<double>& u) {
    const int k = u.ports();
    std::ostringstream out;
    auto block = [&](auto part) {
        out << '[';
        for (int i = 0; i < k; ++i) {
            out << (i ? ", [" : "[");
            for (int j = 0; j < k; ++j) {
                if (j) out << ", ";
                out << format17(part(u(i, j)));
            }
            out << ']';
        }
        out << ']';
    };
    out << "{\n  \"k\": " << k << ",\n  \"re\": ";
    block([](std::complex<double> z) { return z.real(); });
    out << ",\n  \"im\": ";
    block([](std::complex<double> z) { return z.imag(); });
    out << "\n}\n";
    return out.str();
}

InterferometerMatrix<double> matrix_from_json(const std::string& text, const MatrixReadOptions& options) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("matrix file: invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("k") || !doc["k"].is_number_integer()) {
        throw SchemaError("matrix file: missing integer field 'k'");
    }
    const int k = doc["k"].get<int>();
    if (k < 2) throw SchemaError("matrix file: k must be at least 2");
    const auto re = read_block(doc, "re", k);
    const auto im = read_block(doc, "im", k);
    ComplexMatrix<double> m(k, k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) m(i, j) = {re[i][j], im[i][j]};
    }
    if (options.allow_nonunitary) return InterferometerMatrix<double>::unchecked(std::move(m));
    return InterferometerMatrix<double>(std::move(m), options.tolerance);
}

void write_matrix(const std::filesystem::path& path, const InterferometerMatrix<double>& u) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << matrix_to_json(u);
}

InterferometerMatrix<double> read_matrix(const std::filesystem::path& path, const MatrixReadOptions& options) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open matrix file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return matrix_from_json(buf.str(), options);
}

} // namespace qmn
