#pragma once

#include <stdexcept>
#include <string>

namespace gram {

/// Base class for all domain errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- genome parsing ---
class MalformedHeader : public Error { using Error::Error; };
class MalformedRule : public Error { using Error::Error; };
class UnknownSymbol : public Error { using Error::Error; };
class DanglingReference : public Error { using Error::Error; };
class MalformedGlobals : public Error { using Error::Error; };
class ArityError : public Error { using Error::Error; };
class HierarchyViolation : public Error { using Error::Error; };

// --- development / interpretation ---
class DevelopmentOverflow : public Error { using Error::Error; };
class UnderflowError : public Error { using Error::Error; };
class MissingArgument : public Error { using Error::Error; };
class UnknownChord : public Error { using Error::Error; };
class RoleNotFound : public Error { using Error::Error; };
class Unsatisfiable : public Error { using Error::Error; };

// --- notation ---
class PitchOutOfRange : public Error { using Error::Error; };
class UnrepresentableDuration : public Error { using Error::Error; };
class ParseError : public Error { using Error::Error; };

// --- style / generation ---
class SchemaError : public Error { using Error::Error; };
class ConsistencyError : public Error { using Error::Error; };
class InfeasibleStyle : public Error { using Error::Error; };
class ParameterMismatch : public Error { using Error::Error; };

// --- hypersong / adaptive ---
class NoStructure : public Error { using Error::Error; };
class TimingViolation : public Error { using Error::Error; };
class UndefinedInput : public Error { using Error::Error; };
class Halted : public Error { using Error::Error; };
class InsufficientBasal : public Error { using Error::Error; };

}  // namespace gram
