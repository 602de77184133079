// Copyright (c) 2026 The parex authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace parex {

// Base of every error thrown by the library; name() is stable and is what the
// CLI prints on stderr before exiting nonzero.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what) : std::runtime_error(what), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

#define PAREX_DEFINE_ERROR(ClassName)                                             \
  class ClassName : public Error {                                               \
   public:                                                                       \
    explicit ClassName(const std::string& what) : Error(#ClassName, what) {}     \
  }

PAREX_DEFINE_ERROR(DegenerateExponent);
PAREX_DEFINE_ERROR(UnsupportedDimension);
PAREX_DEFINE_ERROR(RootFindFailure);
PAREX_DEFINE_ERROR(ExponentOrderViolation);
PAREX_DEFINE_ERROR(MeshError);
PAREX_DEFINE_ERROR(LevelMismatch);
PAREX_DEFINE_ERROR(SingularFlux);
PAREX_DEFINE_ERROR(FluxEvalError);
PAREX_DEFINE_ERROR(NewtonFailure);
PAREX_DEFINE_ERROR(ConfigError);
PAREX_DEFINE_ERROR(BadSpec);

#undef PAREX_DEFINE_ERROR

}  // namespace parex
