// Copyright 2026 The siegert Authors.
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

namespace siegert {

// Every failure the core can report. The C API maps these onto status codes.
enum class ErrorCode {
  CutPoint,
  BranchPoint,
  DomainError,
  SlowConvergence,
  TailDivergence,
  OutOfRange,
  DimensionMismatch,
  NearSingular,
  NoneInDisk,
  MultipleInDisk,
  ContourHitsEigenvalue,
  DegenerateProjection,
  NoConvergence,
  CutCollision,
  NotNearBic,
  PoorFit,
  BranchLost,
  LeftCutPlane,
  NoMinimum,
  InsufficientSamples,
  NegativeRealPart,
  QuadratureBudget,
  PoleNotEnclosed,
  SchemaError,
  IoError,
  InvalidArgument,
};

const char* error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Schema violations carry the JSON-pointer style path of the offending key.
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& what)
      : Error(ErrorCode::SchemaError, path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace siegert
