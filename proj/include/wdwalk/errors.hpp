#pragma once

#include <stdexcept>
#include <string>

namespace wdwalk {

/** Base class for every domain error thrown by this library. */
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/* --- scalar / field layer ------------------------------------------------ */

struct ParseError : Error {
    using Error::Error;
};
struct DivisionByZero : Error {
    using Error::Error;
};
struct FieldMismatch : Error {
    using Error::Error;
};
struct ReduciblePolynomial : Error {
    using Error::Error;
};
struct PrimitiveElementSearchFailed : Error {
    using Error::Error;
};
struct InsufficientField : Error {
    using Error::Error;
};

/* --- linear algebra / matrix groups -------------------------------------- */

struct SingularMatrix : Error {
    using Error::Error;
};
struct NotNilpotent : Error {
    using Error::Error;
};
struct NotUnipotent : Error {
    using Error::Error;
};
struct NotSemisimple : Error {
    using Error::Error;
};
struct NotAnEigenvalue : Error {
    using Error::Error;
};
struct NotInvariant : Error {
    using Error::Error;
};
struct MembershipViolation : Error {
    using Error::Error;
};
struct UnsupportedGroupKind : Error {
    using Error::Error;
};

/* --- sl2 machinery -------------------------------------------------------- */

struct ZeroNilpotent : Error {
    using Error::Error;
};
struct LinearSolveFailed : Error {
    using Error::Error;
};
struct EigenvalueRelationBroken : Error {
    using Error::Error;
};
struct NonIntegralWeights : Error {
    using Error::Error;
};
struct NotAdapted : Error {
    using Error::Error;
};

/* --- deformation / walk layer --------------------------------------------- */

struct InvalidTriple : Error {
    using Error::Error;
};
struct NotACocycle : Error {
    using Error::Error;
};
struct TrialExhausted : Error {
    using Error::Error;
};
struct GenerationInfeasible : Error {
    using Error::Error;
};
struct VerificationFailed : Error {
    using Error::Error;
};

/**
 * Raised when a quantity that the supporting theory guarantees (an exact
 * identity, a centralizer membership, an unobstructedness assertion) fails to
 * hold on concrete data.  Seeing this error means either the input violated a
 * documented precondition or there is a bug; it is never a routine outcome.
 */
struct InvariantViolation : Error {
    using Error::Error;
};

}  // namespace wdwalk
