#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace ostrowski::reference {

// 50-decimal-digit scalar used to re-evaluate the bound formulas and
// cross-check the binary64 kernels. The bound evaluators are templates, so
// instantiating them with BigFloat reuses the exact same code paths.
using BigFloat = boost::multiprecision::cpp_bin_float_50;

inline double to_double(const BigFloat& v) { return v.convert_to<double>(); }

}  // namespace ostrowski::reference
