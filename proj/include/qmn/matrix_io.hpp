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

#include <filesystem>
#include <string>

#include "qmn/optics.hpp"

namespace qmn {

// Matrix file schema:
//   { "k": int, "re": [[float, ...], ...], "im": [[float, ...], ...] }
// Numbers are written with 17 significant digits, so read(write(U)) == U bit for bit.

struct MatrixReadOptions {
    double tolerance = kUnitarityTolerance;
    /// Accept matrices that fail the unitarity check.
    bool allow_nonunitary = false;
};

std::string matrix_to_json(const InterferometerMatrix<double>& u);
InterferometerMatrix<double> matrix_from_json(const std::string& text, const MatrixReadOptions& options = {});

void write_matrix(const std::filesystem::path& path, const InterferometerMatrix<double>& u);
InterferometerMatrix<double> read_matrix(const std::filesystem::path& path, const MatrixReadOptions& options = {});

} // namespace qmn
