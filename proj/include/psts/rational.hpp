#ifndef PSTS_RATIONAL_HPP
#define PSTS_RATIONAL_HPP

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace psts {

// Exact quantity used for processing powers and their normalized forms.
using Rational = boost::rational<std::int64_t>;

// Parses a plain decimal ("5", "2.25", "-1", ".5") exactly.
// Throws std::invalid_argument on anything else.
Rational parse_decimal(std::string_view text);

double to_double(const Rational& r);

std::string to_string(const Rational& r);

// floor(n * r) and ceil(n * r) without intermediate overflow for r >= 0.
std::int64_t floor_mul(std::int64_t n, const Rational& r);
std::int64_t ceil_mul(std::int64_t n, const Rational& r);

// true iff r <= num / den, den > 0.
bool le_fraction(const Rational& r, std::int64_t num, std::int64_t den);

} // namespace psts

#endif
