#ifndef LANDSCAPE_ERRORS_HPP
#define LANDSCAPE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace landscape {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite entries, bad shapes at an I/O boundary, malformed files.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Incompatible matrix dimensions in an operation.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A critical-point spec violates its structural invariants
/// (non-orthonormal blocks, singular C, pattern out of range).
class InvalidSpec : public Error {
public:
    using Error::Error;
};

/// The (L1, V, C) triple fails the side condition, so it does not
/// generate a critical point.
class SideConditionViolated : public Error {
public:
    using Error::Error;
};

/// A witness was requested for a point of the wrong classification.
class WrongClass : public Error {
public:
    using Error::Error;
};

/// A witness could not be produced within its retry budget.
class WitnessFailed : public Error {
public:
    using Error::Error;
};

/// The point has zero network output, so no ascent row exists.
class NotInX : public Error {
public:
    using Error::Error;
};

/// The requested cone is infeasible for the given spec.
class ConeViolation : public Error {
public:
    using Error::Error;
};

/// A strictly-interior cone point was required but the point sits on
/// the activation boundary.
class PointOnBoundary : public Error {
public:
    using Error::Error;
};

/// Exhaustive cone enumeration refused: instance too large.
class SearchBudgetExceeded : public Error {
public:
    using Error::Error;
};

/// Closed-form and finite-difference gradients disagree; indicates an
/// implementation bug, never swallowed.
class GradientMismatch : public Error {
public:
    using Error::Error;
};

/// An operation with a criticality precondition was handed a point
/// whose gradients do not vanish.
class NotCriticalPoint : public Error {
public:
    using Error::Error;
};

} // namespace landscape

#endif
