#include "vidshield/rational.hpp"

#include <cctype>

#include "vidshield/error.hpp"

namespace vidshield {

Seconds parse_decimal_seconds(const std::string& text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
    negative = text[pos] == '-';
    ++pos;
  }

  std::int64_t integral = 0;
  std::size_t int_digits = 0;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    integral = integral * 10 + (text[pos] - '0');
    ++int_digits;
    ++pos;
  }

  std::int64_t numerator = integral;
  std::int64_t denominator = 1;
  std::size_t frac_digits = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      if (frac_digits >= 12) {
        throw Error(ErrorKind::InvalidSpec, "too many decimal places: " + text);
      }
      numerator = numerator * 10 + (text[pos] - '0');
      denominator *= 10;
      ++frac_digits;
      ++pos;
    }
  }

  if (pos != text.size() || (int_digits == 0 && frac_digits == 0)) {
    throw Error(ErrorKind::InvalidSpec, "not a decimal number: " + text);
  }
  if (negative) numerator = -numerator;
  return Seconds(numerator, denominator);
}

std::int64_t floor_rational(const Seconds& value) {
  std::int64_t q = value.numerator() / value.denominator();
  if (value.numerator() < 0 && value.numerator() % value.denominator() != 0) --q;
  return q;
}

}  // namespace vidshield
