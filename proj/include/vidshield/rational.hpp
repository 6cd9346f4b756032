#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <string>

namespace vidshield {

// Exact rational seconds. All timeline arithmetic (sampling instants, attack
// instants, shot boundaries) is done in this type so that two runs can never
// disagree on a floor() at an interval edge.
using Seconds = boost::rational<std::int64_t>;

inline double to_double(const Seconds& s) {
  return boost::rational_cast<double>(s);
}

// Parses a plain decimal ("2", "0.5", "30.25") into an exact rational.
// Rejects exponents, signs other than an optional leading '-', and empty
// strings. Throws Error{InvalidSpec} on malformed input.
Seconds parse_decimal_seconds(const std::string& text);

// floor(value) for a non-negative rational.
std::int64_t floor_rational(const Seconds& value);

}  // namespace vidshield
