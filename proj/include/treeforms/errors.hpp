#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace treeforms {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad arguments, dimension mismatches, out-of-range ids.
class InvalidInput : public Error {
  public:
    using Error::Error;
};

/// Tree grammar violation. `position` is the 0-based byte offset.
class ParseError : public InvalidInput {
  public:
    ParseError(const std::string& what, std::size_t position)
        : InvalidInput(what + " at position " + std::to_string(position)), position_(position) {}

    std::size_t position() const noexcept { return position_; }

  private:
    std::size_t position_;
};

/// A configured generator/relation/dimension cap was exceeded.
class ResourceLimit : public Error {
  public:
    using Error::Error;
};

/// A proposed homomorphism does not kill some source relation.
class NotWellDefined : public Error {
  public:
    NotWellDefined(const std::string& what, std::size_t relation_index)
        : Error(what), relation_index_(relation_index) {}

    std::size_t relation_index() const noexcept { return relation_index_; }

  private:
    std::size_t relation_index_;
};

/// An algebraic axiom or identity failed on a concrete witness.
class AxiomViolation : public Error {
  public:
    using Error::Error;
};

}  // namespace treeforms
