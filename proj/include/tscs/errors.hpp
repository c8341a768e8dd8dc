#pragma once

#include <stdexcept>
#include <string>

namespace tscs {

/// Operand shapes do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An argument is outside its documented domain (sizes, grid indices, sparsity).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A generated quantity violates a structural invariant of the channel model.
/// Seeing one of these means a model bug, not a data condition.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A metric is undefined for the given input (e.g. NMSE against an all-zero channel).
class MetricUndefined : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tscs
