#pragma once

#include <stdexcept>
#include <string>

namespace tmcalc {

enum class ErrorKind {
    ZeroDenominator,
    PoleAtPoint,
    InconsistentBinding,
    UnboundGenerator,
    NotBaseOnly,
    DimensionMismatch,
    ArityMismatch,
    UnsupportedDegree,
    NotSemiBasic,
    NotClosed,
    NonPolynomialFiberDependence,
    NotAboveMu,
    NotInverse,
    UnknownLift,
    InexactDivision,
    InvalidArgument,
    TypeMismatch,
    SyntaxError,
    UndeclaredName,
    IndexOutOfRange,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what)
      , kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace tmcalc
