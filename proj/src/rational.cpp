#include "psts/rational.hpp"

#include <cctype>
#include <limits>
#include <stdexcept>

namespace psts {

namespace {

using i128 = __int128;

std::int64_t checked_narrow(i128 v)
{
    if (v > std::numeric_limits<std::int64_t>::max() ||
        v < std::numeric_limits<std::int64_t>::min())
        throw std::overflow_error("rational arithmetic overflow");
    return static_cast<std::int64_t>(v);
}

i128 floor_div(i128 a, i128 b)
{
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

} // namespace

Rational parse_decimal(std::string_view text)
{
    if (text.empty())
        throw std::invalid_argument("empty number");
    std::size_t pos = 0;
    bool negative = false;
    if (text[0] == '-' || text[0] == '+') {
        negative = text[0] == '-';
        ++pos;
    }
    std::int64_t num = 0;
    std::int64_t den = 1;
    bool seen_digit = false;
    bool seen_point = false;
    for (; pos < text.size(); ++pos) {
        char c = text[pos];
        if (c == '.') {
            if (seen_point)
                throw std::invalid_argument("malformed number '" + std::string(text) + "'");
            seen_point = true;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw std::invalid_argument("malformed number '" + std::string(text) + "'");
        seen_digit = true;
        if (num > (std::numeric_limits<std::int64_t>::max() - 9) / 10 ||
            (seen_point && den > std::numeric_limits<std::int64_t>::max() / 10))
            throw std::invalid_argument("number out of range '" + std::string(text) + "'");
        num = num * 10 + (c - '0');
        if (seen_point)
            den *= 10;
    }
    if (!seen_digit)
        throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    return Rational(negative ? -num : num, den);
}

double to_double(const Rational& r)
{
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::string to_string(const Rational& r)
{
    if (r.denominator() == 1)
        return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::int64_t floor_mul(std::int64_t n, const Rational& r)
{
    return checked_narrow(floor_div(static_cast<i128>(n) * r.numerator(), r.denominator()));
}

std::int64_t ceil_mul(std::int64_t n, const Rational& r)
{
    return checked_narrow(-floor_div(-static_cast<i128>(n) * r.numerator(), r.denominator()));
}

bool le_fraction(const Rational& r, std::int64_t num, std::int64_t den)
{
    return static_cast<i128>(r.numerator()) * den <= static_cast<i128>(num) * r.denominator();
}

} // namespace psts
