// Copyright 2026 The qcal authors
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

namespace qcal {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define QCAL_DEFINE_ERROR(Name)                                \
  class Name : public Error {                                  \
   public:                                                     \
    explicit Name(const std::string& msg)                      \
        : Error(std::string(#Name) + ": " + msg) {}            \
  }

// Runcard parsing and plan validation.
QCAL_DEFINE_ERROR(SyntaxError);
QCAL_DEFINE_ERROR(SchemaError);
QCAL_DEFINE_ERROR(UnknownProtocol);
QCAL_DEFINE_ERROR(UnknownQubit);
QCAL_DEFINE_ERROR(ParameterError);

// Platform.
QCAL_DEFINE_ERROR(UnknownPlatform);
QCAL_DEFINE_ERROR(ParameterFileError);
QCAL_DEFINE_ERROR(InvalidSpec);
QCAL_DEFINE_ERROR(InvariantViolation);

// Fitting and analysis.
QCAL_DEFINE_ERROR(DimensionMismatch);
QCAL_DEFINE_ERROR(NoFeature);
QCAL_DEFINE_ERROR(NoOscillation);
QCAL_DEFINE_ERROR(NoDecay);
QCAL_DEFINE_ERROR(FitDiverged);
QCAL_DEFINE_ERROR(DegenerateClouds);

// Persistence, reporting and networking.
QCAL_DEFINE_ERROR(IoError);
QCAL_DEFINE_ERROR(FormatError);
QCAL_DEFINE_ERROR(LayoutError);
QCAL_DEFINE_ERROR(NetworkError);
QCAL_DEFINE_ERROR(ServerRejected);

#undef QCAL_DEFINE_ERROR

}  // namespace qcal
