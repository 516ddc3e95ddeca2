#pragma once

#include "krylov/algebra.hpp"
#include "krylov/params.hpp"

#include <Eigen/Dense>

#include <memory>

namespace krylov {

// Faithful 4x4 image of the quadratic span {a^dag a + 1/2, 1, a^dag^2, a^2, a^dag, a}:
//
//   (  0     0     0    0 )
//   (  r    eta   2R    0 )
//   ( -l   -2L   -eta   0 )
//   (-2delta -l   -r    0 )
//
// Commutators map to matrix commutators, so group products can be computed by
// ordinary 4x4 matrix exponentials.
using Rep4Matrix = Eigen::Matrix4cd;

Rep4Matrix to_rep4(const QuadraticHamiltonian& h);

// Scaling-and-squaring with a [13/13] Pade approximant. Rejects inputs with
// 1-norm above 50.
Eigen::Matrix4cd expm4(const Eigen::Matrix4cd& m);

// 4x4 image of theta * D(v) * S(w), built from the closed forms of each factor.
Rep4Matrix group_element_rep4(const DisplacementParams& p);

// Closed-form parameters of e^{iLt} = theta D(v) S(w):
//   v = (alpha/beta)(1 - cosh beta t) + i (alpha/beta) sinh beta t
//   w = i beta t
//   theta = exp[i (alpha/beta)^2 (sinh beta t - beta t)]
// with the beta = 0 limit v = i alpha t, w = 0, theta = 1.
DisplacementParams closed_form_params(const LiouvillianSpec& spec, double t);

// Same parameters, read off from exp(i t rep4(L)). Throws DecompositionFailure
// if the rebuilt product misses the exponential by more than 1e-8.
DisplacementParams decompose_exponential(const LiouvillianSpec& spec, double t);

// cosh|w| a + e sinh|w| a^dag + conj(v) cosh|w| + v e sinh|w|,  e = conj(w)/|w|.
// Throws TruncationOverflow when S(v,w)|0> already leaks into the guard band.
OperatorMatrix bogoliubov(const DisplacementParams& p, const TruncationConfig& cfg);

// Applies displacement and squeeze exponentials in a truncated space. Both
// generators are gauge-rotated onto the real symmetric matrices a + a^dag and
// a^2 + a^dag^2, whose eigendecompositions are computed once per instance.
class GroupElementApplier {
public:
	explicit GroupElementApplier(const TruncationConfig& cfg);

	std::size_t dim() const noexcept { return cfg_.dim; }

	FockVector displace(cplx v, const FockVector& psi) const;
	FockVector squeeze(cplx w, const FockVector& psi) const;
	// theta D(v) S(w) psi
	FockVector apply(const DisplacementParams& p, const FockVector& psi) const;

	Eigen::MatrixXcd displacement_matrix(cplx v) const;
	Eigen::MatrixXcd squeeze_matrix(cplx w) const;

private:
	TruncationConfig cfg_;
	std::shared_ptr<const HermitianPropagator> linear_;
	std::shared_ptr<const HermitianPropagator> quadratic_;
};

// S a S^dag computed with explicit truncated exponentials, compared with the
// Bogoliubov formula on the leading block of columns whose images under S and
// S^dag stay out of the guard band.
struct ConjugationCheck {
	OperatorMatrix explicit_conjugate;
	OperatorMatrix formula;
	std::size_t resolved_block = 0;
	double max_deviation = 0.0;
};

ConjugationCheck conjugate_ladder(const DisplacementParams& p, const TruncationConfig& cfg);

} // namespace krylov
