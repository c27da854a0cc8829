// Copyright (c) 2026 fgmots contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace fgmots {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Operation on a mask with no foreground pixels.
class EmptyMaskError : public Error {
public:
  explicit EmptyMaskError(const std::string& msg) : Error(msg) {}
};

/// Mismatched tensor / mask / flow dimensions.
class ShapeError : public Error {
public:
  explicit ShapeError(const std::string& msg) : Error(msg) {}
};

/// Zero-area box where a positive-area region is required.
class DegenerateBoxError : public Error {
public:
  explicit DegenerateBoxError(const std::string& msg) : Error(msg) {}
};

/// Frame delivered out of order or processed twice.
class FrameOrderError : public Error {
public:
  explicit FrameOrderError(const std::string& msg) : Error(msg) {}
};

/// Loss requested on a batch where it is not defined.
class UndefinedLossError : public Error {
public:
  explicit UndefinedLossError(const std::string& msg) : Error(msg) {}
};

/// Annotations violating the per-frame non-overlap contract.
class InvalidAnnotationsError : public Error {
public:
  explicit InvalidAnnotationsError(const std::string& msg) : Error(msg) {}
};

/// Scores requested for an evaluation with no ground-truth masks.
class UndefinedScoresError : public Error {
public:
  explicit UndefinedScoresError(const std::string& msg) : Error(msg) {}
};

/// Malformed text input; carries a 1-based line number when known.
class ParseError : public Error {
public:
  explicit ParseError(const std::string& msg, long line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}
  long line() const { return line_; }

private:
  long line_;
};

/// Scene specification that cannot be realized.
class SceneSpecError : public Error {
public:
  explicit SceneSpecError(const std::string& msg) : Error(msg) {}
};

}  // namespace fgmots
