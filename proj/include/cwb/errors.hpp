#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cwb {

// Malformed textual input. `position` is a byte offset into the source text.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

// A hard budget (rank, size, node count) was hit. Oracles and evaluators
// throw this instead of returning a truncated answer.
class ResourceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Input violates the documented precondition of an operation.
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace cwb
