#pragma once

#include "krylov/fock.hpp"

#include <optional>
#include <span>
#include <vector>

namespace krylov {

struct LanczosOptions {
	bool reorthogonalize = true;
	double breakdown_tol = 1e-12;
	// Throw Breakdown instead of returning a shortened chain.
	bool strict_breakdown = false;
	// Keep the Krylov vectors; needed for project_onto_chain().
	bool keep_basis = true;
};

// Tridiagonal form of L in the Krylov basis of a seed vector.
//
// With m sites the chain Hamiltonian is
//   T = diag(diagonal[0..m-1]) + offdiag(hopping[0..m-2]),
// hopping[n-1] holding b_n. `residual` is the norm of the first discarded
// vector, i.e. the would-be b_m. The diagonal vanishes whenever the hopping
// graph of L seen from the seed is bipartite (pure alpha or pure beta).
struct KrylovChain {
	std::vector<double> diagonal;
	std::vector<double> hopping;
	std::size_t m = 0;
	double residual = 0.0;
	std::optional<std::size_t> breakdown_at;
	Eigen::MatrixXcd basis; // dim x m, columns |K_n>

	double max_abs_diagonal() const;
};

struct ChainWavefunction {
	double t = 0.0;
	Eigen::VectorXcd phi;

	double norm2() const { return phi.squaredNorm(); }
};

KrylovChain lanczos_tridiagonalize(const OperatorMatrix& L, const FockVector& seed, std::size_t m,
                                   const LanczosOptions& opts = {});

// Hermitian-form chain from given coefficients (e.g. analytic b_n).
KrylovChain chain_from_coefficients(std::vector<double> hopping, std::vector<double> diagonal = {});

// Exact evolution of the chain, phi_n(0) = delta_{n0}. Throws EdgeLeak when
// |phi_{m-1}(t)|^2 exceeds edge_tol.
std::vector<ChainWavefunction> propagate_chain(const KrylovChain& chain, std::span<const double> t_grid,
                                               double edge_tol = 1e-8);

double chain_complexity(const ChainWavefunction& wf);

// phi_n = <K_n|psi> using the stored Krylov vectors.
ChainWavefunction project_onto_chain(const KrylovChain& chain, const FockVector& psi, double t);

} // namespace krylov
