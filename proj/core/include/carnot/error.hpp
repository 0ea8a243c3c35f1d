// Copyright 2026 The carnot-beta Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace carnot {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point or vector does not match the layer structure of its group model.
class ConformanceError : public Error {
 public:
  using Error::Error;
};

/// The group model is valid but outside what exact arithmetic supports (step > 2).
class UnsupportedModelError : public Error {
 public:
  using Error::Error;
};

/// Malformed group model description (bad layer dims, non-antisymmetric bracket).
class ModelDefinitionError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// A gauge cannot be built or evaluated consistently (e.g. a star body whose
/// membership does not flip exactly once along a dilation ray).
class GaugeDefinitionError : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

/// Horizontal gradient vanishes where a G-regular surface is required.
class RegularityError : public Error {
 public:
  using Error::Error;
};

/// The graph height equation has no sign change in the requested bracket.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// The parameter region of a perimeter integral could not be resolved.
class RegionError : public Error {
 public:
  using Error::Error;
};

/// A computation was refused because its preconditions were not certified.
class RefusalError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace carnot
