#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace krylov {

// Base of every error the library throws. Catch this to handle any numerical
// or contract failure in one place.
class Error : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
	using Error::Error;
};

class DimensionMismatch : public Error {
public:
	DimensionMismatch(std::size_t lhs, std::size_t rhs);
	std::size_t lhs() const noexcept { return lhs_; }
	std::size_t rhs() const noexcept { return rhs_; }

private:
	std::size_t lhs_;
	std::size_t rhs_;
};

class NonHermitianInput : public Error {
public:
	explicit NonHermitianInput(double deviation);
	double deviation() const noexcept { return deviation_; }

private:
	double deviation_;
};

// Probability reached the guard band of the truncated Fock space: the
// truncation is too small for the requested time.
class TruncationOverflow : public Error {
public:
	TruncationOverflow(double t, double guard_mass, std::size_t dim);
	double time() const noexcept { return t_; }
	double guard_mass() const noexcept { return guard_mass_; }
	std::size_t dim() const noexcept { return dim_; }

private:
	double t_;
	double guard_mass_;
	std::size_t dim_;
};

// Lanczos found an invariant subspace (b_n below tolerance).
class Breakdown : public Error {
public:
	explicit Breakdown(std::size_t n);
	std::size_t index() const noexcept { return n_; }

private:
	std::size_t n_;
};

// Chain wavefunction reached the last retained site.
class EdgeLeak : public Error {
public:
	EdgeLeak(double t, double edge_mass);
	double time() const noexcept { return t_; }
	double edge_mass() const noexcept { return edge_mass_; }

private:
	double t_;
	double edge_mass_;
};

class NonConvergent : public Error {
public:
	NonConvergent(std::size_t cap, double tail);
	std::size_t cap() const noexcept { return cap_; }
	double tail() const noexcept { return tail_; }

private:
	std::size_t cap_;
	double tail_;
};

class DecompositionFailure : public Error {
public:
	explicit DecompositionFailure(double residual);
	double residual() const noexcept { return residual_; }

private:
	double residual_;
};

} // namespace krylov
