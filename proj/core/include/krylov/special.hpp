#pragma once

namespace krylov::special {

// sinh(x) - x without cancellation near 0.
double sinh_minus_x(double x);

// sinh(y)/y - 1 without cancellation near 0.
double sinhc_minus_one(double y);

// 4 cosh(x) sinh^2(x/2) / x^2 - 1, which is >= 0 for all real x.
double interaction_shape(double x);

} // namespace krylov::special
