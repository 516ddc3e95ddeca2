#pragma once

#include "krylov/errors.hpp"

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include <complex>
#include <cstddef>
#include <utility>

namespace krylov {

using cplx = std::complex<double>;

// Size of the truncated Fock space plus the leakage policy applied to it.
// The top `guard_size()` indices form the guard band; any state with more
// than `tail_tolerance` probability there is rejected as under-resolved.
struct TruncationConfig {
	std::size_t dim = 256;
	double tail_tolerance = 1e-10;
	double guard_fraction = 0.125;

	void validate() const;
	std::size_t guard_size() const;
	// First index of the guard band; indices below it form the trusted block.
	std::size_t guard_start() const { return dim - guard_size(); }
	TruncationConfig with_dim(std::size_t d) const;
};

class FockVector {
public:
	FockVector() = default;
	explicit FockVector(std::size_t dim);
	explicit FockVector(Eigen::VectorXcd amplitudes);

	// |k> in a space of the given dimension.
	static FockVector basis(std::size_t dim, std::size_t k);

	std::size_t dim() const noexcept { return static_cast<std::size_t>(amps_.size()); }
	const Eigen::VectorXcd& amplitudes() const noexcept { return amps_; }
	cplx operator[](std::size_t k) const { return amps_(static_cast<Eigen::Index>(k)); }

	double norm2() const { return amps_.squaredNorm(); }
	// Probability mass on indices >= first.
	double mass_from(std::size_t first) const;
	double guard_mass(const TruncationConfig& cfg) const { return mass_from(cfg.guard_start()); }

private:
	Eigen::VectorXcd amps_;
};

cplx inner(const FockVector& u, const FockVector& v);

void to_json(nlohmann::json& j, const FockVector& v);
void from_json(const nlohmann::json& j, FockVector& v);

// Dense operator on the truncated space. The bandwidth is recomputed from the
// actual sparsity pattern whenever a matrix is built.
class OperatorMatrix {
public:
	explicit OperatorMatrix(Eigen::MatrixXcd entries);

	static OperatorMatrix identity(std::size_t dim);
	static OperatorMatrix zero(std::size_t dim);

	std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
	std::size_t bandwidth() const noexcept { return bandwidth_; }
	const Eigen::MatrixXcd& entries() const noexcept { return m_; }
	cplx operator()(std::size_t i, std::size_t j) const {
		return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
	}

	OperatorMatrix adjoint() const;
	// max |M_ij - conj(M_ji)| over the leading `block` rows and columns.
	double hermiticity_defect(std::size_t block) const;
	double hermiticity_defect() const { return hermiticity_defect(dim()); }
	bool is_hermitian(double tol = 1e-12) const { return hermiticity_defect() <= tol; }
	bool is_real() const;

	// max |M_ij - N_ij| over the leading block.
	double max_deviation(const OperatorMatrix& other, std::size_t block) const;

	OperatorMatrix& operator+=(const OperatorMatrix& rhs);
	OperatorMatrix& operator-=(const OperatorMatrix& rhs);
	OperatorMatrix& operator*=(cplx s);

	friend OperatorMatrix operator+(OperatorMatrix lhs, const OperatorMatrix& rhs) { return lhs += rhs; }
	friend OperatorMatrix operator-(OperatorMatrix lhs, const OperatorMatrix& rhs) { return lhs -= rhs; }
	friend OperatorMatrix operator*(cplx s, OperatorMatrix m) { return m *= s; }
	friend OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs);
	friend FockVector operator*(const OperatorMatrix& m, const FockVector& v);

private:
	void update_bandwidth();

	Eigen::MatrixXcd m_;
	std::size_t bandwidth_ = 0;
};

struct Ladders {
	OperatorMatrix a;
	OperatorMatrix a_dagger;
};

// a|k> = sqrt(k)|k-1>, truncated to cfg.dim.
Ladders build_ladders(const TruncationConfig& cfg);

// Number operator diag(0, 1, ..., dim-1).
OperatorMatrix number_operator(std::size_t dim);

// Cached eigendecomposition L = U diag(lambda) U^dag of a Hermitian matrix,
// giving exact unitary evolution e^{itL} for any t. Immutable after
// construction, so a single instance may be shared across threads.
class HermitianPropagator {
public:
	explicit HermitianPropagator(const OperatorMatrix& L, double hermitian_tol = 1e-12);

	std::size_t dim() const noexcept { return static_cast<std::size_t>(eigenvalues_.size()); }
	const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }

	// e^{itL} v without any truncation checks.
	FockVector apply(double t, const FockVector& v) const;
	// Dense e^{itL}.
	Eigen::MatrixXcd unitary(double t) const;

private:
	Eigen::VectorXd eigenvalues_;
	// Exactly one of these is populated: real-symmetric input keeps real
	// eigenvectors, which halves the cost of every apply().
	Eigen::MatrixXd real_vectors_;
	Eigen::MatrixXcd complex_vectors_;
};

// e^{itL} v0 with the unitarity and guard-band contracts enforced.
FockVector evolve_state(const HermitianPropagator& prop, double t, const FockVector& v0,
                        const TruncationConfig& cfg);
FockVector evolve_state(const OperatorMatrix& L, double t, const FockVector& v0,
                        const TruncationConfig& cfg);

} // namespace krylov
