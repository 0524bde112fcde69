#pragma once

#include <gmpxx.h>

#include <string>

namespace tropskel {

using Integer = mpz_class;
using Rational = mpq_class;

Rational make_rational(long num, long den = 1);
Rational parse_rational(const std::string& s);
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

Integer floor_div(const Integer& a, const Integer& b);
Integer floor(const Rational& q);
Integer ceil(const Rational& q);
Integer lcm(const Integer& a, const Integer& b);
Integer gcd(const Integer& a, const Integer& b);

}  // namespace tropskel
