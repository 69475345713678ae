#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace bergerkit {

// Arbitrary precision rational. gmpxx keeps results canonical (reduced,
// positive denominator) after every arithmetic operation.
using Rational = mpq_class;
using RatVector = std::vector<Rational>;

// num/den in lowest terms. Prefer this over Rational(num, den), which does not
// canonicalize.
Rational make_rational(long num, long den);

// Parses "num/den", "num" or a plain integer string. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

// "num/den" or "num" when the denominator is 1.
std::string to_string(const Rational& q);

RatVector zero_vector(std::size_t n);
bool is_zero(const RatVector& v);
Rational dot(const RatVector& a, const RatVector& b);

}  // namespace bergerkit
