#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace toposqt {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Parses "p/q", "p" or "-p/q". Exact; rejects floats and empty strings.
Rational parse_rational(const std::string& text);

// Canonical "p/q" rendering; integers print without the "/1".
std::string to_string(const Rational& q);

inline int sign(const Rational& q) { return q.sign(); }

}  // namespace toposqt
