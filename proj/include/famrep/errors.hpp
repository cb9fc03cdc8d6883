#pragma once

#include <stdexcept>
#include <string>

namespace famrep {

/// Operands live on different ground sets.
class GroundMismatch : public std::invalid_argument {
public:
    GroundMismatch() : std::invalid_argument("operands are defined on different ground sets") {}
};

/// An operation was called outside its domain (non-measurable input, negative
/// density, non-convex function, ...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A structure violates its own invariants (ring not closed, set function not
/// additive, ...).
class InvariantError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace famrep
