// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace adascale {

/// Base of every error the library throws. The CLI maps subclasses onto
/// process exit codes (see exit_code()).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 4; }
};

/// Malformed or unreadable input data (files, scenes, maps).
class InputError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

/// Zero-area, collinear or otherwise unusable geometry.
class GeometryError : public InputError {
 public:
  using InputError::InputError;
};

/// Grids of mismatching dimensions.
class ShapeError : public InputError {
 public:
  using InputError::InputError;
};

/// Argument outside the domain of a function (e.g. log of a non-positive scale).
class DomainError : public InputError {
 public:
  using InputError::InputError;
};

/// A single pack item that cannot fit in the largest allowed bin.
class OversizeError : public InputError {
 public:
  using InputError::InputError;
};

/// Invalid configuration values or config files.
class ConfigError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

/// An internal invariant did not hold. Always a bug.
class InvariantError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

}  // namespace adascale
