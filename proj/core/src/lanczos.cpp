#include "krylov/lanczos.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace krylov {

double KrylovChain::max_abs_diagonal() const {
	double out = 0.0;
	for (double a : diagonal)
		out = std::max(out, std::abs(a));
	return out;
}

KrylovChain lanczos_tridiagonalize(const OperatorMatrix& L, const FockVector& seed, std::size_t m,
                                   const LanczosOptions& opts) {
	if (seed.dim() != L.dim())
		throw DimensionMismatch(L.dim(), seed.dim());
	if (m < 1 || m > L.dim())
		throw InvalidArgument("Lanczos chain length must lie in [1, dim]");
	if (std::abs(seed.norm2() - 1.0) > 1e-10)
		throw InvalidArgument("Lanczos seed must be normalized");
	const double defect = L.hermiticity_defect();
	if (defect > 1e-12)
		throw NonHermitianInput(defect);

	const auto dim = static_cast<Eigen::Index>(L.dim());
	const Eigen::MatrixXcd& A = L.entries();
	Eigen::MatrixXcd Q(dim, static_cast<Eigen::Index>(m));
	Q.col(0) = seed.amplitudes();

	KrylovChain chain;
	chain.diagonal.reserve(m);
	chain.hopping.reserve(m);

	Eigen::VectorXcd r(dim);
	for (std::size_t n = 0;; ++n) {
		const auto nn = static_cast<Eigen::Index>(n);
		r.noalias() = A * Q.col(nn);
		chain.diagonal.push_back(Q.col(nn).dot(r).real());
		if (opts.reorthogonalize) {
			// Classical Gram-Schmidt, twice.
			for (int pass = 0; pass < 2; ++pass) {
				const Eigen::VectorXcd c = Q.leftCols(nn + 1).adjoint() * r;
				r.noalias() -= Q.leftCols(nn + 1) * c;
			}
		} else {
			r -= chain.diagonal.back() * Q.col(nn);
			if (n > 0)
				r -= chain.hopping.back() * Q.col(nn - 1);
		}
		const double b = r.norm();
		if (n + 1 == m) {
			chain.residual = b;
			break;
		}
		if (b <= opts.breakdown_tol) {
			if (opts.strict_breakdown)
				throw Breakdown(n + 1);
			chain.breakdown_at = n + 1;
			chain.residual = b;
			break;
		}
		chain.hopping.push_back(b);
		Q.col(nn + 1) = r / b;
	}
	chain.m = chain.diagonal.size();
	if (opts.keep_basis)
		chain.basis = Q.leftCols(static_cast<Eigen::Index>(chain.m));
	return chain;
}

KrylovChain chain_from_coefficients(std::vector<double> hopping, std::vector<double> diagonal) {
	KrylovChain chain;
	chain.m = hopping.size() + 1;
	if (diagonal.empty())
		diagonal.assign(chain.m, 0.0);
	if (diagonal.size() != chain.m)
		throw DimensionMismatch(chain.m, diagonal.size());
	chain.hopping = std::move(hopping);
	chain.diagonal = std::move(diagonal);
	return chain;
}

std::vector<ChainWavefunction> propagate_chain(const KrylovChain& chain, std::span<const double> t_grid,
                                               double edge_tol) {
	if (chain.m < 2)
		throw InvalidArgument("chain propagation needs at least two sites");
	if (!std::is_sorted(t_grid.begin(), t_grid.end()))
		throw InvalidArgument("time grid must be sorted ascending");

	const auto m = static_cast<Eigen::Index>(chain.m);
	const Eigen::Map<const Eigen::VectorXd> diag(chain.diagonal.data(), m);
	const Eigen::Map<const Eigen::VectorXd> off(chain.hopping.data(), m - 1);
	Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
	es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
	const Eigen::MatrixXd& U = es.eigenvectors();
	const Eigen::VectorXd first = U.row(0).transpose();

	std::vector<ChainWavefunction> out;
	out.reserve(t_grid.size());
	for (double t : t_grid) {
		Eigen::VectorXcd coeff = first.cast<cplx>();
		coeff.array() *= (cplx(0.0, t) * es.eigenvalues().cast<cplx>()).array().exp();
		ChainWavefunction wf{t, U.cast<cplx>() * coeff};
		const double edge = std::norm(wf.phi(m - 1));
		if (edge > edge_tol)
			throw EdgeLeak(t, edge);
		if (std::abs(wf.norm2() - 1.0) > 1e-8)
			throw Error("chain propagation lost normalization");
		out.push_back(std::move(wf));
	}
	return out;
}

double chain_complexity(const ChainWavefunction& wf) {
	double k = 0.0;
	for (Eigen::Index n = 1; n < wf.phi.size(); ++n)
		k += static_cast<double>(n) * std::norm(wf.phi(n));
	return k;
}

ChainWavefunction project_onto_chain(const KrylovChain& chain, const FockVector& psi, double t) {
	if (chain.basis.cols() == 0)
		throw InvalidArgument("chain was built without keeping its Krylov basis");
	if (static_cast<std::size_t>(chain.basis.rows()) != psi.dim())
		throw DimensionMismatch(static_cast<std::size_t>(chain.basis.rows()), psi.dim());
	return {t, chain.basis.adjoint() * psi.amplitudes()};
}

} // namespace krylov
