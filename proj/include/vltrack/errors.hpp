#pragma once

#include <stdexcept>
#include <string>

namespace vltrack {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

/// Non-finite or negative-extent box input.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Ground-truth box with zero width or height where a positive extent is required.
class DegenerateGtError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// Malformed arguments: out-of-range values, mismatched lengths, bad enum text.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Reward group with fewer than two samples.
class GroupTooSmallError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// KL divergence requested where p has mass outside q's support.
class SupportMismatchError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Exact-KL objective evaluation on steps without full distributions.
class MissingDistributionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Pair sampling request exceeding the eligible pool; message reports the shortfall.
class NotEnoughSamplesError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// File-system problems: missing files, malformed lines, unwritable destinations.
class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error(message) {}
  IoError(const std::string& file, int line_number, const std::string& message)
      : Error(file + ":" + std::to_string(line_number) + ": " + message) {}
};

/// Remote endpoint replied with a non-success status.
class EndpointError : public Error {
 public:
  using Error::Error;
};

/// Refiner endpoint still failing after the retry budget.
class RefinerUnavailableError : public EndpointError {
 public:
  using EndpointError::EndpointError;
};

/// Tracker endpoint failure; aborts a tracking run.
class TrackerError : public Error {
 public:
  using Error::Error;
};

}  // namespace vltrack
