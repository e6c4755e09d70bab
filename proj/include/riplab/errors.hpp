#pragma once

#include <stdexcept>
#include <string>

namespace riplab {

/// Base class for all library errors.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// A DistributionSpec is malformed (unknown kind, bad nesting, bad weights).
class spec_error : public error {
 public:
  using error::error;
};

/// An argument is outside its contract (index out of range, too few trials,
/// missing named parameter).
class argument_error : public error {
 public:
  using error::error;
};

/// A bound was queried outside its stated domain.  The message names the
/// violated premise.
class domain_violation : public error {
 public:
  using error::error;
};

/// An exact enumeration would exceed the configured cap.  The message points
/// at the sampled / heuristic fallback.
class enumeration_cap_error : public error {
 public:
  using error::error;
};

/// Constraints of an optimization problem admit no solution.
class infeasible_error : public error {
 public:
  using error::error;
};

/// A config file could not be parsed; the message names the offending field.
class config_error : public error {
 public:
  using error::error;
};

/// File I/O failure (missing file, malformed CSV row, ...).
class io_error : public error {
 public:
  using error::error;
};

}  // namespace riplab
