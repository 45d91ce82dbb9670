#ifndef FAIRLOAD_RATIONAL_HPP
#define FAIRLOAD_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace fairload {

using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Parses "21", "-3", "21/2", "-7/3". Throws std::invalid_argument on
// malformed input or zero denominator.
Rat parse_rational(const std::string& s);

// Canonical lowest-terms form, denominator 1 omitted: "21", "-7/3".
std::string format_rational(const Rat& r);

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

inline Rat rat_pow(const Rat& base, int exp) {
    Rat out = 1;
    for (int i = 0; i < exp; ++i) out *= base;
    return out;
}

}  // namespace fairload

#endif
