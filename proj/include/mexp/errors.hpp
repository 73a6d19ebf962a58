#pragma once

#include <stdexcept>
#include <string>

namespace mexp {

// Bad user input: malformed alpha spec, x-range, rational, flag value.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Request exceeds the memory budget or a hard representation limit.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fixed-point phase or CF generator cannot deliver the requested precision.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the sieve table or otherwise out of the operation's domain.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A checked mathematical invariant failed at runtime.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace mexp
