// Copyright 2026 The nanomech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace nanomech {

// Basis lookup of a state that is not a member of the space.
class LookupError : public std::out_of_range {
   public:
    using std::out_of_range::out_of_range;
};

// Invalid physical or numerical parameter.
class ParameterError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

// Input object violates a structural precondition (non-Hermitian H, mixed
// state where a pure one is required, mismatched dimensions...).
class ValidationError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

// Requested excitation number does not fit in the truncated space.
class CapacityError : public std::length_error {
   public:
    using std::length_error::length_error;
};

// Closed-form helper called outside the configuration it covers.
class UnsupportedError : public std::logic_error {
   public:
    using std::logic_error::logic_error;
};

// ODE integration failed (step underflow, step budget, invariant drift).
class IntegrationError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace nanomech
