#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace aiknn {

/// Exact rational coordinate. gmpxx keeps values canonical (reduced, positive
/// denominator) after every arithmetic operation.
using Scalar = mpq_class;

/// Parses a finite decimal literal ("-12", "0.125", "3.5e-2") or a fraction
/// ("7/3") into the exact rational it denotes. Throws InvalidInput otherwise.
Scalar parse_scalar(std::string_view text);

/// Exact value of a finite double (every double is a dyadic rational).
Scalar scalar_from_double(double value);

/// Closest double, rounded toward zero.
double to_double(const Scalar& value);

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Scalar& value);

int sign_of(const Scalar& value);

}  // namespace aiknn
