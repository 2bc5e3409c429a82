// Copyright 2026 The dqkd Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Exception types shared by every dqkd module.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dqkd {

/// Base of all errors raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// Which AttackParams invariant a ValidationError reports.
enum class ValidationKind {
    Normalization,
    UnitarityConstraint,
    GramNotPsd,
    OverlapMagnitude,
};

constexpr std::string_view to_string(ValidationKind kind) {
    switch (kind) {
    case ValidationKind::Normalization:
        return "normalization";
    case ValidationKind::UnitarityConstraint:
        return "unitarity-constraint";
    case ValidationKind::GramNotPsd:
        return "gram-not-psd";
    case ValidationKind::OverlapMagnitude:
        return "overlap-magnitude";
    }
    return "unknown";
}

class ValidationError : public InvalidArgument {
  public:
    ValidationError(ValidationKind kind, const std::string &detail)
        : InvalidArgument(std::string(to_string(kind)) + ": " + detail),
          kind_(kind) {}

    [[nodiscard]] ValidationKind kind() const noexcept { return kind_; }

  private:
    ValidationKind kind_;
};

/// A closed form was requested outside the domain it holds on.
class NotApplicable : public Error {
  public:
    using Error::Error;
};

/// Fidelities fail the xi >= 1/2 admissibility region.
class BoundaryViolation : public Error {
  public:
    using Error::Error;
};

class Infeasible : public Error {
  public:
    using Error::Error;
};

class InsufficientData : public Error {
  public:
    using Error::Error;
};

class InternalError : public Error {
  public:
    using Error::Error;
};

/// Malformed config or result document; the message names the field.
class ParseError : public Error {
  public:
    ParseError(std::string field, const std::string &detail)
        : Error("field '" + field + "': " + detail), field_(std::move(field)) {}

    [[nodiscard]] const std::string &field() const noexcept { return field_; }

  private:
    std::string field_;
};

} // namespace dqkd
