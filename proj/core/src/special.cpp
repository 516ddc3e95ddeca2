#include "krylov/special.hpp"
#include "krylov/params.hpp"

#include <cmath>

namespace krylov::special {

double sinh_minus_x(double x) {
	if (std::abs(x) < 0.5) {
		// x^3/3! + x^5/5! + ... ; truncation error below 1e-17 relative
		const double x2 = x * x;
		double term = x * x2 / 6.0;
		double sum = term;
		for (int k = 5; k <= 17; k += 2) {
			term *= x2 / static_cast<double>((k - 1) * k);
			sum += term;
		}
		return sum;
	}
	return std::sinh(x) - x;
}

double sinhc_minus_one(double y) {
	if (std::abs(y) < 0.5) {
		const double y2 = y * y;
		double term = y2 / 6.0;
		double sum = term;
		for (int k = 4; k <= 16; k += 2) {
			term *= y2 / static_cast<double>(k * (k + 1));
			sum += term;
		}
		return sum;
	}
	return std::sinh(y) / y - 1.0;
}

double interaction_shape(double x) {
	const double y = 0.5 * x;
	const double sm1 = sinhc_minus_one(y);
	const double s = 1.0 + sm1;
	const double sh = std::sinh(y);
	// cosh(x) S^2 - 1 = 2 sinh^2(y) S^2 + (S - 1)(S + 1)
	return 2.0 * sh * sh * s * s + sm1 * (s + 1.0);
}

} // namespace krylov::special

namespace krylov {

DisplacementParams DisplacementParams::make(cplx v, cplx w, cplx theta) {
	DisplacementParams p{v, w, theta, hermite_argument(v, w)};
	p.validate();
	return p;
}

cplx DisplacementParams::squeeze_phase() const {
	const double r = std::abs(w);
	return r > 0.0 ? std::conj(w) / r : cplx(1.0);
}

void DisplacementParams::validate() const {
	if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || !std::isfinite(w.real()) ||
	    !std::isfinite(w.imag()))
		throw InvalidArgument("displacement parameters must be finite");
	if (std::abs(std::abs(theta) - 1.0) > 1e-12)
		throw InvalidArgument("theta must have unit modulus");
}

std::optional<cplx> hermite_argument(cplx v, cplx w) {
	const double r = std::abs(w);
	if (r == 0.0)
		return std::nullopt;
	const cplx e = std::conj(w) / r;
	const cplx root = std::sqrt(e);
	const double tau = std::sqrt(std::tanh(r));
	return -(v * root * tau + std::conj(v) * std::conj(root) / tau) / std::sqrt(2.0);
}

} // namespace krylov
