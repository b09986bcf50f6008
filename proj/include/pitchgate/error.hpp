/// @file error.hpp
/// @brief Exception types shared by every pitchgate module.

#pragma once

#include <stdexcept>
#include <string>

namespace pitchgate {

/// Argument outside the mathematical domain of a conversion (e.g. log of a non-positive frequency).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Operation precondition violated by the caller (frame too short, zero iterations, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Configuration value violates a documented invariant.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Synthesized frequency at or above the Nyquist limit.
class NyquistError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or unsupported file contents; the message names the offending field.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem failure; the message carries the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Persisted record failed verification on read.
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pitchgate
