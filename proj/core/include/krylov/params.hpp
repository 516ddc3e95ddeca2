#pragma once

#include "krylov/fock.hpp"

#include <optional>

namespace krylov {

// Coherent-state parameters of theta * exp(v a - conj(v) a^dag) *
// exp((w/2) a^2 - (conj(w)/2) (a^dag)^2).
//
// `s` is the Hermite argument of the amplitude closed form. It only exists for
// w != 0; on the w = 0 branch the state is a plain coherent state and s is left
// empty.
struct DisplacementParams {
	cplx v{};
	cplx w{};
	cplx theta{1.0};
	std::optional<cplx> s;

	static DisplacementParams make(cplx v, cplx w, cplx theta = cplx(1.0));

	double squeeze() const { return std::abs(w); }
	// conj(w)/|w|; 1 on the w = 0 branch, where it always multiplies sinh(0).
	cplx squeeze_phase() const;
	void validate() const;
};

// s = -(v e^{1/2} sqrt(tanh|w|) + conj(v) conj(e^{1/2}) / sqrt(tanh|w|)) / sqrt(2),
// e = conj(w)/|w|, principal branch. Undefined (nullopt) at w = 0.
std::optional<cplx> hermite_argument(cplx v, cplx w);

} // namespace krylov
