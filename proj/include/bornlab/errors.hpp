// Copyright 2026 The bornlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace bornlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Caller supplied something structurally wrong (bad length, bad value, unparsable text).
class InvalidArgument : public Error {
   public:
    using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
   public:
    using InvalidArgument::InvalidArgument;
};

/// A value violated a mathematical invariant (normalization, unitarity, spectrum gaps).
class InvariantViolation : public Error {
   public:
    using Error::Error;
};

/// Exact enumeration would exceed the configured budget.
class BudgetExceeded : public Error {
   public:
    using Error::Error;
};

/// A pointer profile does not fit, or would be shifted off, its grid.
class GridOverflow : public Error {
   public:
    using Error::Error;
};

class OverlapBelowFloor : public Error {
   public:
    using Error::Error;
};

/// The supplied spectra cannot certify uniqueness of the consistent weights.
class SpanConditionFailed : public Error {
   public:
    using Error::Error;
};

/// A power-law fit was asked to take the log of a non-positive value.
class NumericalFloor : public Error {
   public:
    using Error::Error;
};

/// Coupling is zero, so no macroscopic reading exists.
class DegenerateCoupling : public Error {
   public:
    using Error::Error;
};

}  // namespace bornlab
