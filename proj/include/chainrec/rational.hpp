#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace chainrec {

using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rat& r) { return static_cast<double>(r); }

// Parses "p/q", plain integers and decimal strings ("0.25", "-1.5e-2").
Rat parse_rat(const std::string& s);

// Canonical "p/q" form ("p" when q == 1).
std::string format_rat(const Rat& r);

// Smallest representable rational upper bound of a double (next double up,
// converted exactly). Used when a float estimate must err on the safe side.
Rat rat_upper_bound(double x);

// Rounds x to a rational with denominator 10^9.
Rat rat_from_double(double x);

}  // namespace chainrec
