#pragma once

// Extended-precision scalar used internally by the phase engines and the
// proper-time comparisons. Several of the toolkit's consistency checks assert
// cancellations at the 1e-9 rad level between terms of magnitude ~1e10 rad,
// which is finer than double (and on x86, finer than long double) can resolve
// when the terms are computed through independent expression trees.

namespace ugf::detail {

#if defined(__SIZEOF_FLOAT128__)
using real = __float128;
#else
using real = long double;
#endif

inline double to_double(real v) { return static_cast<double>(v); }

inline real rabs(real v) { return v < 0 ? -v : v; }

/// sqrt in extended precision via Newton refinement of the double estimate.
inline real rsqrt(real v) {
    if (v <= 0) return 0;
    real x = static_cast<real>(__builtin_sqrt(static_cast<double>(v)));
    for (int i = 0; i < 3; ++i) x = x - (x * x - v) / (2 * x);
    return x;
}

}  // namespace ugf::detail
