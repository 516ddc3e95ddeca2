#include "krylov/bch.hpp"
#include "krylov/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace krylov {

namespace {

constexpr double kResolvedMass = 1e-16;

using Mat4 = Eigen::Matrix4cd;

Mat4 phase_rep4(cplx log_theta) {
	Mat4 m = Mat4::Identity();
	m(3, 0) = -2.0 * log_theta;
	return m;
}

Mat4 displacement_rep4(cplx v) {
	// exp of the nilpotent image of v a - conj(v) a^dag
	QuadraticHamiltonian h;
	h.l_coef = v;
	h.r_coef = -std::conj(v);
	return Mat4::Identity() + to_rep4(h);
}

Mat4 squeeze_rep4(cplx w) {
	const double r = std::abs(w);
	Mat4 m = Mat4::Identity();
	if (r == 0.0)
		return m;
	const cplx e = std::conj(w) / r;
	m(1, 1) = m(2, 2) = std::cosh(r);
	m(1, 2) = -e * std::sinh(r);
	m(2, 1) = -std::conj(e) * std::sinh(r);
	return m;
}

// diag(e^{i chi k}) applied in place
void rotate(Eigen::VectorXcd& x, double chi) {
	for (Eigen::Index k = 0; k < x.size(); ++k)
		x(k) *= std::polar(1.0, chi * static_cast<double>(k));
}

} // namespace

Rep4Matrix to_rep4(const QuadraticHamiltonian& h) {
	Rep4Matrix m = Rep4Matrix::Zero();
	m(1, 0) = h.r_coef;
	m(1, 1) = h.eta;
	m(1, 2) = 2.0 * h.R_coef;
	m(2, 0) = -h.l_coef;
	m(2, 1) = -2.0 * h.L_coef;
	m(2, 2) = -h.eta;
	m(3, 0) = -2.0 * h.delta;
	m(3, 1) = -h.l_coef;
	m(3, 2) = -h.r_coef;
	return m;
}

Eigen::Matrix4cd expm4(const Eigen::Matrix4cd& m) {
	static constexpr std::array<double, 14> b = {
	    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
	    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
	    1323241920.0,        40840800.0,          960960.0,           16380.0,
	    182.0,               1.0};
	constexpr double theta13 = 5.371920351148152;

	const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
	if (!(norm1 <= 50.0))
		throw InvalidArgument("expm4 input norm exceeds 50");

	int squarings = 0;
	if (norm1 > theta13)
		squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
	const Mat4 A = m / std::ldexp(1.0, squarings);
	const Mat4 I = Mat4::Identity();
	const Mat4 A2 = A * A;
	const Mat4 A4 = A2 * A2;
	const Mat4 A6 = A4 * A2;
	const Mat4 U = A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 + b[3] * A2 +
	                    b[1] * I);
	const Mat4 V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
	Mat4 R = (V - U).partialPivLu().solve(V + U);
	for (int k = 0; k < squarings; ++k)
		R = R * R;
	return R;
}

Rep4Matrix group_element_rep4(const DisplacementParams& p) {
	return phase_rep4(std::log(p.theta)) * displacement_rep4(p.v) * squeeze_rep4(p.w);
}

DisplacementParams closed_form_params(const LiouvillianSpec& spec, double t) {
	spec.validate();
	if (!std::isfinite(t))
		throw InvalidArgument("time must be finite");
	if (spec.beta == 0.0 || t == 0.0)
		return DisplacementParams::make(cplx(0.0, spec.alpha * t), 0.0, 1.0);

	const double x = spec.beta * t;
	const double ratio = spec.alpha / spec.beta;
	const double sh = std::sinh(0.5 * x);
	// 1 - cosh x = -2 sinh^2(x/2)
	const cplx v(-2.0 * ratio * sh * sh, ratio * std::sinh(x));
	const cplx w(0.0, x);
	const cplx theta = std::polar(1.0, ratio * ratio * special::sinh_minus_x(x));
	return DisplacementParams::make(v, w, theta);
}

DisplacementParams decompose_exponential(const LiouvillianSpec& spec, double t) {
	spec.validate();
	if (t == 0.0)
		return DisplacementParams::make(0.0, 0.0, 1.0);

	const Mat4 M = expm4(cplx(0.0, t) * to_rep4(as_hamiltonian(spec)));

	// Squeeze block: M(1,1) = cosh|w|, M(2,1) = -(w/|w|) sinh|w|.
	const double sinh_r = std::abs(M(2, 1));
	const double r = std::asinh(sinh_r);
	const cplx w = sinh_r > 0.0 ? r * (-M(2, 1) / sinh_r) : cplx(0.0);
	// Displacement column and the accumulated scalar.
	const cplx v = -M(2, 0);
	cplx theta = std::exp(-0.5 * M(3, 0));
	const double mod = std::abs(theta);
	if (std::abs(mod - 1.0) > 1e-8)
		throw DecompositionFailure(std::abs(mod - 1.0));
	theta /= mod;

	DisplacementParams p = DisplacementParams::make(v, w, theta);
	// M(3,0) carries -2 log theta, which is only fixed modulo 4 pi i; the
	// modulus check above is all it can tell us.
	Mat4 rebuilt = group_element_rep4(p);
	rebuilt(3, 0) = M(3, 0);
	const double residual = (rebuilt - M).cwiseAbs().maxCoeff();
	if (residual > 1e-8)
		throw DecompositionFailure(residual);
	return p;
}

// ---------------------------------------------------------------------------

GroupElementApplier::GroupElementApplier(const TruncationConfig& cfg) : cfg_(cfg) {
	cfg_.validate();
	QuadraticHamiltonian lin;
	lin.r_coef = lin.l_coef = 1.0;
	QuadraticHamiltonian quad;
	quad.R_coef = quad.L_coef = 1.0;
	linear_ = std::make_shared<const HermitianPropagator>(hamiltonian_to_matrix(lin, cfg_));
	quadratic_ = std::make_shared<const HermitianPropagator>(hamiltonian_to_matrix(quad, cfg_));
}

// exp(v a - conj(v) a^dag) = R(-chi) exp(i|v|(a + a^dag)) R(chi),
// R(chi) = e^{i chi n}, chi = arg v - pi/2.
FockVector GroupElementApplier::displace(cplx v, const FockVector& psi) const {
	if (psi.dim() != dim())
		throw DimensionMismatch(dim(), psi.dim());
	if (v == cplx(0.0))
		return psi;
	const double chi = std::arg(v) - 0.5 * std::numbers::pi;
	Eigen::VectorXcd x = psi.amplitudes();
	rotate(x, chi);
	Eigen::VectorXcd y = linear_->apply(std::abs(v), FockVector(std::move(x))).amplitudes();
	rotate(y, -chi);
	return FockVector(std::move(y));
}

// exp((w/2) a^2 - (conj(w)/2) a^dag^2) = R(-chi) exp(i(|w|/2)(a^2 + a^dag^2)) R(chi),
// chi = (arg w - pi/2)/2.
FockVector GroupElementApplier::squeeze(cplx w, const FockVector& psi) const {
	if (psi.dim() != dim())
		throw DimensionMismatch(dim(), psi.dim());
	if (w == cplx(0.0))
		return psi;
	const double chi = 0.5 * (std::arg(w) - 0.5 * std::numbers::pi);
	Eigen::VectorXcd x = psi.amplitudes();
	rotate(x, chi);
	Eigen::VectorXcd y = quadratic_->apply(0.5 * std::abs(w), FockVector(std::move(x))).amplitudes();
	rotate(y, -chi);
	return FockVector(std::move(y));
}

FockVector GroupElementApplier::apply(const DisplacementParams& p, const FockVector& psi) const {
	FockVector out = displace(p.v, squeeze(p.w, psi));
	return FockVector(Eigen::VectorXcd(p.theta * out.amplitudes()));
}

Eigen::MatrixXcd GroupElementApplier::displacement_matrix(cplx v) const {
	const auto n = static_cast<Eigen::Index>(dim());
	if (v == cplx(0.0))
		return Eigen::MatrixXcd::Identity(n, n);
	const double chi = std::arg(v) - 0.5 * std::numbers::pi;
	Eigen::VectorXcd ph(n);
	for (Eigen::Index k = 0; k < n; ++k)
		ph(k) = std::polar(1.0, chi * static_cast<double>(k));
	return ph.conjugate().asDiagonal() * linear_->unitary(std::abs(v)) * ph.asDiagonal();
}

Eigen::MatrixXcd GroupElementApplier::squeeze_matrix(cplx w) const {
	const auto n = static_cast<Eigen::Index>(dim());
	if (w == cplx(0.0))
		return Eigen::MatrixXcd::Identity(n, n);
	const double chi = 0.5 * (std::arg(w) - 0.5 * std::numbers::pi);
	Eigen::VectorXcd ph(n);
	for (Eigen::Index k = 0; k < n; ++k)
		ph(k) = std::polar(1.0, chi * static_cast<double>(k));
	return ph.conjugate().asDiagonal() * quadratic_->unitary(0.5 * std::abs(w)) * ph.asDiagonal();
}

// ---------------------------------------------------------------------------

namespace {

OperatorMatrix bogoliubov_formula(const DisplacementParams& p, const TruncationConfig& cfg) {
	const double r = p.squeeze();
	const cplx es = p.squeeze_phase() * std::sinh(r);
	const double ch = std::cosh(r);
	const auto [a, ad] = build_ladders(cfg);
	return ch * a + es * ad + (std::conj(p.v) * ch + p.v * es) * OperatorMatrix::identity(cfg.dim);
}

} // namespace

OperatorMatrix bogoliubov(const DisplacementParams& p, const TruncationConfig& cfg) {
	cfg.validate();
	if (cfg.dim < 8)
		throw InvalidArgument("bogoliubov needs dim >= 8");
	p.validate();
	const GroupElementApplier applier(cfg);
	const FockVector state = applier.apply(p, FockVector::basis(cfg.dim, 0));
	const double guard = state.guard_mass(cfg);
	if (guard > cfg.tail_tolerance)
		throw TruncationOverflow(0.0, guard, cfg.dim);
	return bogoliubov_formula(p, cfg);
}

ConjugationCheck conjugate_ladder(const DisplacementParams& p, const TruncationConfig& cfg) {
	OperatorMatrix formula = bogoliubov(p, cfg);

	const GroupElementApplier applier(cfg);
	const Eigen::MatrixXcd S = applier.displacement_matrix(p.v) * applier.squeeze_matrix(p.w);
	const Eigen::MatrixXcd Sinv = S.adjoint();
	const auto [a, ad] = build_ladders(cfg);
	OperatorMatrix explicit_conj(S * a.entries() * Sinv);

	const auto g = static_cast<Eigen::Index>(cfg.guard_start());
	const auto n = static_cast<Eigen::Index>(cfg.dim);
	std::size_t resolved = 0;
	double leak = 0.0;
	for (Eigen::Index j = 0; j < n; ++j) {
		leak = std::max(S.col(j).tail(n - g).squaredNorm(), Sinv.col(j).tail(n - g).squaredNorm());
		if (leak > kResolvedMass)
			break;
		resolved = static_cast<std::size_t>(j) + 1;
	}
	if (resolved == 0)
		throw TruncationOverflow(0.0, leak, cfg.dim);

	ConjugationCheck out{std::move(explicit_conj), std::move(formula), resolved, 0.0};
	out.max_deviation = out.explicit_conjugate.max_deviation(out.formula, resolved);
	return out;
}

} // namespace krylov
