#include "toposqt/rational.hpp"

#include "toposqt/error.hpp"

namespace toposqt {

Rational parse_rational(const std::string& text) {
  if (text.empty()) fail("ParseError", "empty rational literal");
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      if (text.find('.') != std::string::npos)
        fail("ParseError", "decimal literals are not exact, write '" + text + "' as p/q");
      return Rational(Integer(text));
    }
    Integer num(text.substr(0, slash));
    Integer den(text.substr(slash + 1));
    if (den == 0) fail("ParseError", "zero denominator in '" + text + "'");
    return Rational(num, den);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail("ParseError", "malformed rational literal '" + text + "'");
  }
}

std::string to_string(const Rational& q) {
  const Integer num = numerator(q);
  const Integer den = denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace toposqt
