#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <limits>

namespace caustic {

// Extended-precision scalar (50 decimal digits) for cancellation-sensitive work.
using xreal = boost::multiprecision::cpp_bin_float_50;

// pi for any real type, computed once per type.
template <class Real>
const Real& pi_v() {
    static const Real value = [] {
        using std::atan;
        Real one(1);
        return Real(4 * atan(one));
    }();
    return value;
}

template <class Real>
bool is_finite(const Real& x) {
    using std::isfinite;
    return isfinite(x);
}

inline double to_double(double x) { return x; }
inline double to_double(const xreal& x) { return x.convert_to<double>(); }

// Machine epsilon of the instantiated type.
template <class Real>
Real eps_v() {
    return std::numeric_limits<Real>::epsilon();
}

}  // namespace caustic
