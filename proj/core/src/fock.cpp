#include "krylov/fock.hpp"

#include <lapacke.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace krylov {

namespace {

std::string format_error(const char* what, double x) {
	std::ostringstream os;
	os << what << x;
	return os.str();
}

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

} // namespace

DimensionMismatch::DimensionMismatch(std::size_t lhs, std::size_t rhs)
    : Error("dimension mismatch: " + std::to_string(lhs) + " vs " + std::to_string(rhs)), lhs_(lhs),
      rhs_(rhs) {}

NonHermitianInput::NonHermitianInput(double deviation)
    : Error(format_error("matrix is not Hermitian, max |M - M^dag| = ", deviation)),
      deviation_(deviation) {}

TruncationOverflow::TruncationOverflow(double t, double guard_mass, std::size_t dim)
    : Error([&] {
	      std::ostringstream os;
	      os << "truncation overflow at t=" << t << ": guard-band mass " << guard_mass
	         << " at dim=" << dim;
	      return os.str();
      }()),
      t_(t), guard_mass_(guard_mass), dim_(dim) {}

Breakdown::Breakdown(std::size_t n)
    : Error("Lanczos breakdown at b_" + std::to_string(n)), n_(n) {}

EdgeLeak::EdgeLeak(double t, double edge_mass)
    : Error([&] {
	      std::ostringstream os;
	      os << "chain edge leak at t=" << t << ": |phi_{m-1}|^2 = " << edge_mass;
	      return os.str();
      }()),
      t_(t), edge_mass_(edge_mass) {}

NonConvergent::NonConvergent(std::size_t cap, double tail)
    : Error([&] {
	      std::ostringstream os;
	      os << "amplitude series did not converge within k_max cap " << cap << " (tail " << tail
	         << ")";
	      return os.str();
      }()),
      cap_(cap), tail_(tail) {}

DecompositionFailure::DecompositionFailure(double residual)
    : Error(format_error("displacement-squeeze decomposition residual ", residual)),
      residual_(residual) {}

// ---------------------------------------------------------------------------

void TruncationConfig::validate() const {
	if (dim < 1)
		throw InvalidArgument("truncation dim must be positive");
	if (!(tail_tolerance > 0.0))
		throw InvalidArgument("tail_tolerance must be > 0");
	if (!(guard_fraction > 0.0 && guard_fraction < 1.0))
		throw InvalidArgument("guard_fraction must lie in (0,1)");
}

std::size_t TruncationConfig::guard_size() const {
	auto g = static_cast<std::size_t>(std::llround(guard_fraction * static_cast<double>(dim)));
	return std::clamp<std::size_t>(g, 1, dim > 1 ? dim - 1 : 1);
}

TruncationConfig TruncationConfig::with_dim(std::size_t d) const {
	TruncationConfig c = *this;
	c.dim = d;
	return c;
}

// ---------------------------------------------------------------------------

FockVector::FockVector(std::size_t dim) : amps_(Eigen::VectorXcd::Zero(idx(dim))) {
	if (dim == 0)
		throw InvalidArgument("FockVector needs a positive dimension");
}

FockVector::FockVector(Eigen::VectorXcd amplitudes) : amps_(std::move(amplitudes)) {
	if (amps_.size() == 0)
		throw InvalidArgument("FockVector needs a positive dimension");
}

FockVector FockVector::basis(std::size_t dim, std::size_t k) {
	if (k >= dim)
		throw InvalidArgument("basis index outside the truncated space");
	FockVector v(dim);
	v.amps_(idx(k)) = 1.0;
	return v;
}

double FockVector::mass_from(std::size_t first) const {
	if (first >= dim())
		return 0.0;
	return amps_.tail(idx(dim() - first)).squaredNorm();
}

cplx inner(const FockVector& u, const FockVector& v) {
	if (u.dim() != v.dim())
		throw DimensionMismatch(u.dim(), v.dim());
	return u.amplitudes().dot(v.amplitudes()); // Eigen conjugates the left operand
}

void to_json(nlohmann::json& j, const FockVector& v) {
	j = nlohmann::json::array();
	for (std::size_t k = 0; k < v.dim(); ++k)
		j.push_back({v[k].real(), v[k].imag()});
}

void from_json(const nlohmann::json& j, FockVector& v) {
	if (!j.is_array() || j.empty())
		throw InvalidArgument("FockVector JSON must be a non-empty array of [re, im] pairs");
	Eigen::VectorXcd amps(idx(j.size()));
	for (std::size_t k = 0; k < j.size(); ++k) {
		const auto& pair = j[k];
		if (!pair.is_array() || pair.size() != 2)
			throw InvalidArgument("FockVector JSON entry is not an [re, im] pair");
		amps(idx(k)) = cplx(pair[0].get<double>(), pair[1].get<double>());
	}
	v = FockVector(std::move(amps));
}

// ---------------------------------------------------------------------------

OperatorMatrix::OperatorMatrix(Eigen::MatrixXcd entries) : m_(std::move(entries)) {
	if (m_.rows() != m_.cols())
		throw DimensionMismatch(static_cast<std::size_t>(m_.rows()), static_cast<std::size_t>(m_.cols()));
	if (m_.rows() == 0)
		throw InvalidArgument("OperatorMatrix needs a positive dimension");
	update_bandwidth();
}

OperatorMatrix OperatorMatrix::identity(std::size_t dim) {
	return OperatorMatrix(Eigen::MatrixXcd::Identity(idx(dim), idx(dim)));
}

OperatorMatrix OperatorMatrix::zero(std::size_t dim) {
	return OperatorMatrix(Eigen::MatrixXcd::Zero(idx(dim), idx(dim)));
}

void OperatorMatrix::update_bandwidth() {
	bandwidth_ = 0;
	const Eigen::Index n = m_.rows();
	for (Eigen::Index j = 0; j < n; ++j)
		for (Eigen::Index i = 0; i < n; ++i)
			if (m_(i, j) != cplx(0.0))
				bandwidth_ = std::max<std::size_t>(bandwidth_, static_cast<std::size_t>(std::abs(i - j)));
}

OperatorMatrix OperatorMatrix::adjoint() const { return OperatorMatrix(m_.adjoint()); }

double OperatorMatrix::hermiticity_defect(std::size_t block) const {
	const Eigen::Index b = idx(std::min(block, dim()));
	const auto blk = m_.topLeftCorner(b, b);
	return (blk - blk.adjoint()).cwiseAbs().maxCoeff();
}

bool OperatorMatrix::is_real() const { return m_.imag().cwiseAbs().maxCoeff() == 0.0; }

double OperatorMatrix::max_deviation(const OperatorMatrix& other, std::size_t block) const {
	if (other.dim() != dim())
		throw DimensionMismatch(dim(), other.dim());
	const Eigen::Index b = idx(std::min(block, dim()));
	return (m_.topLeftCorner(b, b) - other.m_.topLeftCorner(b, b)).cwiseAbs().maxCoeff();
}

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& rhs) {
	if (rhs.dim() != dim())
		throw DimensionMismatch(dim(), rhs.dim());
	m_ += rhs.m_;
	update_bandwidth();
	return *this;
}

OperatorMatrix& OperatorMatrix::operator-=(const OperatorMatrix& rhs) {
	if (rhs.dim() != dim())
		throw DimensionMismatch(dim(), rhs.dim());
	m_ -= rhs.m_;
	update_bandwidth();
	return *this;
}

OperatorMatrix& OperatorMatrix::operator*=(cplx s) {
	m_ *= s;
	update_bandwidth();
	return *this;
}

OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
	if (lhs.dim() != rhs.dim())
		throw DimensionMismatch(lhs.dim(), rhs.dim());
	return OperatorMatrix(lhs.m_ * rhs.m_);
}

FockVector operator*(const OperatorMatrix& m, const FockVector& v) {
	if (m.dim() != v.dim())
		throw DimensionMismatch(m.dim(), v.dim());
	return FockVector(Eigen::VectorXcd(m.m_ * v.amplitudes()));
}

// ---------------------------------------------------------------------------

Ladders build_ladders(const TruncationConfig& cfg) {
	cfg.validate();
	if (cfg.dim < 2)
		throw InvalidArgument("ladder operators need dim >= 2");
	Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(idx(cfg.dim), idx(cfg.dim));
	for (std::size_t k = 1; k < cfg.dim; ++k)
		a(idx(k - 1), idx(k)) = std::sqrt(static_cast<double>(k));
	OperatorMatrix am(std::move(a));
	OperatorMatrix ad = am.adjoint();
	return {std::move(am), std::move(ad)};
}

OperatorMatrix number_operator(std::size_t dim) {
	Eigen::VectorXcd d(idx(dim));
	for (std::size_t k = 0; k < dim; ++k)
		d(idx(k)) = static_cast<double>(k);
	return OperatorMatrix(Eigen::MatrixXcd(d.asDiagonal()));
}

// ---------------------------------------------------------------------------

HermitianPropagator::HermitianPropagator(const OperatorMatrix& L, double hermitian_tol) {
	const double defect = L.hermiticity_defect();
	if (!(defect <= hermitian_tol))
		throw NonHermitianInput(defect);

	const auto n = static_cast<lapack_int>(L.dim());
	eigenvalues_.resize(n);
	if (L.is_real()) {
		real_vectors_ = L.entries().real();
		const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, real_vectors_.data(), n,
		                                       eigenvalues_.data());
		if (info != 0)
			throw Error("dsyevd failed with info " + std::to_string(info));
	} else {
		complex_vectors_ = L.entries();
		const lapack_int info =
		    LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'U', n,
		                   reinterpret_cast<lapack_complex_double*>(complex_vectors_.data()), n,
		                   eigenvalues_.data());
		if (info != 0)
			throw Error("zheevd failed with info " + std::to_string(info));
	}
}

FockVector HermitianPropagator::apply(double t, const FockVector& v) const {
	if (v.dim() != dim())
		throw DimensionMismatch(dim(), v.dim());
	const Eigen::VectorXcd phases =
	    (cplx(0.0, t) * eigenvalues_.cast<cplx>()).array().exp().matrix();
	if (real_vectors_.size() > 0) {
		const auto& U = real_vectors_;
		// U^T v, done on the real and imaginary parts separately to stay real.
		Eigen::VectorXcd coeff(U.cols());
		coeff.real() = U.transpose() * v.amplitudes().real();
		coeff.imag() = U.transpose() * v.amplitudes().imag();
		coeff.array() *= phases.array();
		Eigen::VectorXcd out(U.rows());
		out.real() = U * coeff.real();
		out.imag() = U * coeff.imag();
		return FockVector(std::move(out));
	}
	const auto& U = complex_vectors_;
	Eigen::VectorXcd coeff = U.adjoint() * v.amplitudes();
	coeff.array() *= phases.array();
	return FockVector(Eigen::VectorXcd(U * coeff));
}

Eigen::MatrixXcd HermitianPropagator::unitary(double t) const {
	const Eigen::VectorXcd phases =
	    (cplx(0.0, t) * eigenvalues_.cast<cplx>()).array().exp().matrix();
	if (real_vectors_.size() > 0) {
		const Eigen::MatrixXcd U = real_vectors_.cast<cplx>();
		return U * phases.asDiagonal() * U.transpose();
	}
	return complex_vectors_ * phases.asDiagonal() * complex_vectors_.adjoint();
}

FockVector evolve_state(const HermitianPropagator& prop, double t, const FockVector& v0,
                        const TruncationConfig& cfg) {
	cfg.validate();
	if (cfg.dim != prop.dim())
		throw DimensionMismatch(cfg.dim, prop.dim());
	if (v0.dim() != prop.dim())
		throw DimensionMismatch(prop.dim(), v0.dim());
	if (std::abs(v0.norm2() - 1.0) > 1e-10)
		throw InvalidArgument("evolve_state expects a normalized initial vector");
	if (t == 0.0)
		return v0;

	FockVector out = prop.apply(t, v0);
	const double guard = out.guard_mass(cfg);
	if (guard > cfg.tail_tolerance)
		throw TruncationOverflow(t, guard, cfg.dim);
	if (std::abs(out.norm2() - 1.0) > 1e-10)
		throw Error(format_error("unitarity lost in evolve_state, |norm^2 - 1| = ",
		                         std::abs(out.norm2() - 1.0)));
	return out;
}

FockVector evolve_state(const OperatorMatrix& L, double t, const FockVector& v0,
                        const TruncationConfig& cfg) {
	if (L.dim() != cfg.dim)
		throw DimensionMismatch(cfg.dim, L.dim());
	return evolve_state(HermitianPropagator(L), t, v0, cfg);
}

} // namespace krylov
