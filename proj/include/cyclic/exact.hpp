#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace cyclic {

using BigInt = boost::multiprecision::cpp_int;
/// Always stored in lowest terms with a positive denominator.
using ExactRational = boost::multiprecision::cpp_rational;

inline BigInt numerator_of(const ExactRational& x) { return boost::multiprecision::numerator(x); }
inline BigInt denominator_of(const ExactRational& x) { return boost::multiprecision::denominator(x); }

/// "num/den", or just "num" when den == 1.
std::string to_string(const ExactRational& x);
std::string to_string(const BigInt& x);

/// 2^k as an exact rational.
ExactRational pow2(int k);

}  // namespace cyclic
