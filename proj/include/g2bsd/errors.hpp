#pragma once

#include <stdexcept>
#include <string>

namespace g2bsd {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define G2BSD_ERROR(name)                                               \
    class name : public Error {                                         \
    public:                                                             \
        explicit name(const std::string& what) : Error(#name ": " + what) {} \
    }

G2BSD_ERROR(BadReduction);
G2BSD_ERROR(IntegralityViolation);
G2BSD_ERROR(NonMaximalIdeal);
G2BSD_ERROR(PrecisionLoss);
G2BSD_ERROR(DependentGenerators);
G2BSD_ERROR(MissingBadFactor);
G2BSD_ERROR(InsufficientCoefficients);
G2BSD_ERROR(NonConvergent);
G2BSD_ERROR(PathDegeneracy);
G2BSD_ERROR(UnstableGcd);
G2BSD_ERROR(PreconditionViolation);
G2BSD_ERROR(SearchExhausted);
G2BSD_ERROR(UnrecognizedRational);
G2BSD_ERROR(MissingIngestedDatum);
G2BSD_ERROR(SchemaError);
G2BSD_ERROR(ChecksumMismatch);

#undef G2BSD_ERROR

}  // namespace g2bsd
