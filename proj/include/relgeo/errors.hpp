#pragma once

#include <stdexcept>
#include <string>

namespace relgeo {

// Base class for everything this library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- jet arithmetic ---
struct DivisionByZeroValue : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};
struct OrderExceeded : Error {
    using Error::Error;
};

// --- expression parsing / evaluation ---
struct SyntaxError : Error {
    SyntaxError(const std::string& what, std::size_t position)
        : Error(what + " (at position " + std::to_string(position) + ")"), pos(position) {}
    std::size_t pos;
};
struct UnknownIdentifier : Error {
    using Error::Error;
};
struct ArityError : Error {
    using Error::Error;
};

// --- surface catalog ---
struct UnknownSurface : Error {
    using Error::Error;
};
struct BadParams : Error {
    using Error::Error;
};

// --- geometry ---
struct DegenerateImmersion : Error {
    using Error::Error;
};
struct FlatPoint : Error {
    using Error::Error;
};
struct ZeroSupport : Error {
    using Error::Error;
};
struct RankViolation : Error {
    using Error::Error;
};
struct SingularForm : Error {
    using Error::Error;
};
struct NonSymmetricB : Error {
    using Error::Error;
};
struct ComplexEigenvalues : Error {
    using Error::Error;
};
struct SingularFamily : Error {
    using Error::Error;
};
struct NotApplicable : Error {
    using Error::Error;
};

}  // namespace relgeo
