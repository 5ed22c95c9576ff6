#pragma once

#include <functional>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace equispec::detail {

/// Adaptive Gauss-Kronrod integration. Handles the square-root vanishing of
/// the density at band edges and the kinks of |histogram - density|.
template <typename F>
double integrate(const F& f, double a, double b, double tol = 1e-10) {
    if (!(b > a)) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, 14, tol);
}

}  // namespace equispec::detail
