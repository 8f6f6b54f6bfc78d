#pragma once

#include <stdexcept>
#include <string>

namespace pqc {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Algebra: |norm2(p)| below threshold, p is a zero divisor.
struct ZeroNorm : Error {
    using Error::Error;
};

struct SingularMetric : Error {
    using Error::Error;
};

struct UnknownField : Error {
    using Error::Error;
};

// Conformal factor must satisfy h > 0 at every evaluation point.
struct NonpositiveFactor : Error {
    using Error::Error;
};

struct StencilOutOfDomain : Error {
    using Error::Error;
};

struct InconsistentTorsion : Error {
    using Error::Error;
};

struct MissingJets : Error {
    using Error::Error;
};

struct OnSingularLocus : Error {
    using Error::Error;
};

struct NotTangent : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

struct DomainExhausted : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace pqc
