#include "krylov/algebra.hpp"

#include <cmath>

namespace krylov {

void LiouvillianSpec::validate() const {
	if (!std::isfinite(alpha) || !std::isfinite(beta))
		throw InvalidArgument("Liouvillian coefficients must be finite");
}

GeneratorSet::GeneratorSet(TruncationConfig cfg) : cfg_(cfg) {
	cfg_.validate();
	if (cfg_.dim < 8)
		throw InvalidArgument("generator set needs dim >= 8");

	const auto [a, ad] = build_ladders(cfg_);
	const double rt2 = std::sqrt(2.0);
	const OperatorMatrix a2 = a * a;
	const OperatorMatrix ad2 = ad * ad;
	const OperatorMatrix plus = a + ad;
	const OperatorMatrix minus = a - ad;

	gens_.emplace(label::a, a);
	gens_.emplace(label::a_dagger, ad);
	gens_.emplace(label::P, (1.0 / rt2) * (ad - a));
	gens_.emplace(label::G, (1.0 / rt2) * (ad + a));
	gens_.emplace(label::M, a * ad - ad * a);
	gens_.emplace(label::H, -0.25 * (plus * plus));
	gens_.emplace(label::K, -0.25 * (minus * minus));
	gens_.emplace(label::D, 0.5 * (a2 + ad2));
	gens_.emplace(label::L0, 0.25 * (ad * a + a * ad));
	gens_.emplace(label::L_plus1, 0.5 * a2);
	gens_.emplace(label::L_minus1, 0.5 * ad2);
	gens_.emplace(label::number, ad * a);
}

const OperatorMatrix& GeneratorSet::at(std::string_view name) const {
	const auto it = gens_.find(name);
	if (it == gens_.end())
		throw InvalidArgument("unknown generator label '" + std::string(name) + "'");
	return it->second;
}

GeneratorSet build_generators(const TruncationConfig& cfg) { return GeneratorSet(cfg); }

OperatorMatrix commutator(const OperatorMatrix& X, const OperatorMatrix& Y) { return X * Y - Y * X; }

OperatorMatrix build_liouvillian(const LiouvillianSpec& spec, const TruncationConfig& cfg) {
	spec.validate();
	cfg.validate();
	if (cfg.dim < 4)
		throw InvalidArgument("Liouvillian needs dim >= 4");
	return hamiltonian_to_matrix(as_hamiltonian(spec), cfg);
}

bool QuadraticHamiltonian::is_hermitian(double tol) const {
	return std::abs(eta.imag()) <= tol && std::abs(delta.imag()) <= tol &&
	       std::abs(L_coef - std::conj(R_coef)) <= tol && std::abs(l_coef - std::conj(r_coef)) <= tol;
}

QuadraticHamiltonian operator+(const QuadraticHamiltonian& x, const QuadraticHamiltonian& y) {
	return {x.eta + y.eta,       x.delta + y.delta,   x.R_coef + y.R_coef,
	        x.L_coef + y.L_coef, x.r_coef + y.r_coef, x.l_coef + y.l_coef};
}

QuadraticHamiltonian operator*(cplx s, const QuadraticHamiltonian& x) {
	return {s * x.eta, s * x.delta, s * x.R_coef, s * x.L_coef, s * x.r_coef, s * x.l_coef};
}

QuadraticHamiltonian bracket(const QuadraticHamiltonian& x, const QuadraticHamiltonian& y) {
	// With N = a^dag a + 1/2:
	//   [N, a^dag^2] = 2 a^dag^2   [N, a^2] = -2 a^2   [a^2, a^dag^2] = 4 N
	//   [N, a^dag] = a^dag         [N, a] = -a         [a, a^dag] = 1
	//   [a^2, a^dag] = 2 a         [a, a^dag^2] = 2 a^dag
	QuadraticHamiltonian z;
	z.R_coef = 2.0 * (x.eta * y.R_coef - y.eta * x.R_coef);
	z.L_coef = -2.0 * (x.eta * y.L_coef - y.eta * x.L_coef);
	z.eta = 4.0 * (x.L_coef * y.R_coef - y.L_coef * x.R_coef);
	z.r_coef = (x.eta * y.r_coef - y.eta * x.r_coef) + 2.0 * (x.l_coef * y.R_coef - y.l_coef * x.R_coef);
	z.l_coef = -(x.eta * y.l_coef - y.eta * x.l_coef) + 2.0 * (x.L_coef * y.r_coef - y.L_coef * x.r_coef);
	z.delta = x.l_coef * y.r_coef - y.l_coef * x.r_coef;
	return z;
}

QuadraticHamiltonian as_hamiltonian(const LiouvillianSpec& spec) {
	QuadraticHamiltonian h;
	h.R_coef = h.L_coef = spec.beta / 2.0;
	h.r_coef = h.l_coef = spec.alpha;
	return h;
}

OperatorMatrix hamiltonian_to_matrix(const QuadraticHamiltonian& h, const TruncationConfig& cfg) {
	cfg.validate();
	if (cfg.dim < 4)
		throw InvalidArgument("quadratic Hamiltonian needs dim >= 4");
	// Filled entry by entry so that symmetric coefficients give bitwise
	// symmetric matrices.
	const auto n = static_cast<Eigen::Index>(cfg.dim);
	Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
	for (Eigen::Index k = 0; k < n; ++k) {
		const double kd = static_cast<double>(k);
		m(k, k) = h.eta * (kd + 0.5) + h.delta;
		if (k + 1 < n) {
			const double s1 = std::sqrt(kd + 1.0);
			m(k + 1, k) += h.r_coef * s1; // <k+1| a^dag |k>
			m(k, k + 1) += h.l_coef * s1; // <k| a |k+1>
		}
		if (k + 2 < n) {
			const double s2 = std::sqrt((kd + 1.0) * (kd + 2.0));
			m(k + 2, k) += h.R_coef * s2;
			m(k, k + 2) += h.L_coef * s2;
		}
	}
	return OperatorMatrix(std::move(m));
}

// ---------------------------------------------------------------------------

LiouvillianOracle::LiouvillianOracle(LiouvillianSpec spec, TruncationConfig cfg, std::size_t max_dim)
    : spec_(spec), cfg_(cfg), max_dim_(max_dim) {
	spec_.validate();
	cfg_.validate();
	if (max_dim_ < cfg_.dim)
		throw InvalidArgument("oracle max_dim is below the starting dimension");
}

std::shared_ptr<const HermitianPropagator> LiouvillianOracle::propagator(std::size_t dim) const {
	{
		std::lock_guard lock(mutex_);
		if (auto it = cache_.find(dim); it != cache_.end())
			return it->second;
	}
	auto prop = std::make_shared<const HermitianPropagator>(build_liouvillian(spec_, cfg_.with_dim(dim)));
	std::lock_guard lock(mutex_);
	return cache_.emplace(dim, std::move(prop)).first->second;
}

std::pair<FockVector, std::size_t> LiouvillianOracle::vacuum_state(double t) const {
	std::size_t dim = cfg_.dim;
	for (;;) {
		const TruncationConfig c = cfg_.with_dim(dim);
		try {
			return {evolve_state(*propagator(dim), t, FockVector::basis(dim, 0), c), dim};
		} catch (const TruncationOverflow&) {
			if (dim >= max_dim_)
				throw;
			dim = std::min(2 * dim, max_dim_);
		}
	}
}

} // namespace krylov
