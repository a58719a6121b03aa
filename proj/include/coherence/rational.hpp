#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace coherence {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(const Integer& num, const Integer& den) {
  return Rational(num, den);
}

inline std::string to_string(const Rational& q) {
  if (boost::multiprecision::denominator(q) == 1) {
    return boost::multiprecision::numerator(q).str();
  }
  return boost::multiprecision::numerator(q).str() + "/" +
         boost::multiprecision::denominator(q).str();
}

inline bool is_integer(const Rational& q) {
  return boost::multiprecision::denominator(q) == 1;
}

}  // namespace coherence
