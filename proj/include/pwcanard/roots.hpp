#pragma once

#include <cstdint>
#include <utility>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "pwcanard/errors.hpp"

namespace pwc {

// Bracketed root of f on [a, b] (f(a), f(b) of opposite sign) to full double precision.
template <class F>
double bracketed_root(F&& f, double a, double b, double fa, double fb, int max_iter = 200) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0)) throw NumericalError("root not bracketed");
    std::uintmax_t it = static_cast<std::uintmax_t>(max_iter);
    boost::math::tools::eps_tolerance<double> tol(52);
    const std::pair<double, double> r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, it);
    return 0.5 * (r.first + r.second);
}

template <class F>
double bracketed_root(F&& f, double a, double b, int max_iter = 200) {
    return bracketed_root(f, a, b, f(a), f(b), max_iter);
}

} // namespace pwc
