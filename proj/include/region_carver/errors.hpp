#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace region_carver {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at offset " + std::to_string(position) + ")"), message_(what), position_(position) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  std::size_t position_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A point is numerically on one of the hypersurfaces f_i = 0.
class OnHypersurfaceError : public Error {
 public:
  OnHypersurfaceError(const std::string& what, std::size_t poly_index)
      : Error(what), poly_index_(poly_index) {}

  std::size_t poly_index() const noexcept { return poly_index_; }

 private:
  std::size_t poly_index_;
};

class AmbiguousSignError : public OnHypersurfaceError {
 public:
  using OnHypersurfaceError::OnHypersurfaceError;
};

/// The random quadric produced a degenerate Morse function (repeated critical
/// values or a singular Hessian). Callers retry with a fresh seed.
class RegenerateQError : public Error {
 public:
  using Error::Error;
};

class PathFailureError : public Error {
 public:
  PathFailureError(const std::string& what, std::size_t failed, std::size_t total)
      : Error(what), failed_(failed), total_(total) {}

  std::size_t failed() const noexcept { return failed_; }
  std::size_t total() const noexcept { return total_; }

 private:
  std::size_t failed_;
  std::size_t total_;
};

class FlowBreakdownError : public Error {
 public:
  using Error::Error;
};

class RootFindingError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace region_carver
