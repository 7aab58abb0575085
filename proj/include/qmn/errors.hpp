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

#include <stdexcept>
#include <string>

namespace qmn {

/// Exact integer arithmetic exceeded the 128-bit magnitude.
class CapacityError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// A parameter lies outside its mathematical domain, or inputs are inconsistent.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// More than one fermion in a port.
class CollisionError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Malformed matrix file or unparsable composition.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnitarityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qmn
