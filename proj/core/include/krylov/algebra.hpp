#pragma once

#include "krylov/fock.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

namespace krylov {

// L = alpha (a^dag + a) + (beta/2) ((a^dag)^2 + a^2)
struct LiouvillianSpec {
	double alpha = 0.0;
	double beta = 0.0;

	void validate() const;
};

namespace label {
inline constexpr std::string_view a = "a";
inline constexpr std::string_view a_dagger = "a_dagger";
inline constexpr std::string_view P = "P";
inline constexpr std::string_view G = "G";
inline constexpr std::string_view M = "M";
inline constexpr std::string_view H = "H";
inline constexpr std::string_view K = "K";
inline constexpr std::string_view D = "D";
inline constexpr std::string_view L0 = "L0";
inline constexpr std::string_view L_plus1 = "L_plus1";
inline constexpr std::string_view L_minus1 = "L_minus1";
inline constexpr std::string_view number = "number";
} // namespace label

// Oscillator realization of the Schrodinger and SL(2,R) generators at a
// common truncation.
class GeneratorSet {
public:
	explicit GeneratorSet(TruncationConfig cfg);

	const OperatorMatrix& at(std::string_view name) const;
	const TruncationConfig& config() const noexcept { return cfg_; }
	std::size_t dim() const noexcept { return cfg_.dim; }
	const std::map<std::string, OperatorMatrix, std::less<>>& all() const noexcept { return gens_; }

private:
	TruncationConfig cfg_;
	std::map<std::string, OperatorMatrix, std::less<>> gens_;
};

GeneratorSet build_generators(const TruncationConfig& cfg);

OperatorMatrix commutator(const OperatorMatrix& X, const OperatorMatrix& Y);

OperatorMatrix build_liouvillian(const LiouvillianSpec& spec, const TruncationConfig& cfg);

// eta (a^dag a + 1/2) + delta + R (a^dag)^2 + L a^2 + r a^dag + l a
struct QuadraticHamiltonian {
	cplx eta{};
	cplx delta{};
	cplx R_coef{};
	cplx L_coef{};
	cplx r_coef{};
	cplx l_coef{};

	bool is_hermitian(double tol = 1e-14) const;

	friend QuadraticHamiltonian operator+(const QuadraticHamiltonian& x, const QuadraticHamiltonian& y);
	friend QuadraticHamiltonian operator*(cplx s, const QuadraticHamiltonian& x);
};

// Lie bracket on the quadratic span, computed from the canonical relations.
QuadraticHamiltonian bracket(const QuadraticHamiltonian& x, const QuadraticHamiltonian& y);

QuadraticHamiltonian as_hamiltonian(const LiouvillianSpec& spec);

OperatorMatrix hamiltonian_to_matrix(const QuadraticHamiltonian& h, const TruncationConfig& cfg);

// Dense-evolution oracle for e^{iLt}|0>. Starts at cfg.dim and doubles the
// truncation until the guard band holds less than cfg.tail_tolerance, up to
// max_dim. Eigendecompositions are cached per dimension; the object is safe to
// use from several threads.
class LiouvillianOracle {
public:
	LiouvillianOracle(LiouvillianSpec spec, TruncationConfig cfg, std::size_t max_dim = 4096);

	const LiouvillianSpec& spec() const noexcept { return spec_; }

	// Evolved vacuum and the dimension that resolved it.
	std::pair<FockVector, std::size_t> vacuum_state(double t) const;

private:
	std::shared_ptr<const HermitianPropagator> propagator(std::size_t dim) const;

	LiouvillianSpec spec_;
	TruncationConfig cfg_;
	std::size_t max_dim_;
	mutable std::mutex mutex_;
	mutable std::map<std::size_t, std::shared_ptr<const HermitianPropagator>> cache_;
};

} // namespace krylov
