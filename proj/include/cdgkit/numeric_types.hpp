#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

namespace cdg {

/// 50 decimal digits; used for annihilation certificates and the
/// finite-difference oracle.
using HighReal = boost::multiprecision::cpp_bin_float_50;
using HighComplex = boost::multiprecision::cpp_complex_50;

}  // namespace cdg
