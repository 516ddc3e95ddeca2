#include <krylov/algebra.hpp>
#include <krylov/coherent.hpp>
#include <krylov/lanczos.hpp>

#include "expected_values.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace krylov;

TEST(Lanczos, HeisenbergWeylCoefficients) {
	const TruncationConfig cfg{64};
	const KrylovChain chain =
	    lanczos_tridiagonalize(build_liouvillian({1.0, 0.0}, cfg), FockVector::basis(64, 0), 30);
	ASSERT_EQ(chain.m, 30u);
	for (std::size_t n = 1; n <= 20; ++n)
		EXPECT_NEAR(chain.hopping[n - 1], std::sqrt(static_cast<double>(n)), 1e-12) << n;
	EXPECT_LT(chain.max_abs_diagonal(), 1e-12);
}

TEST(Lanczos, SqueezeChainFirstCoefficient) {
	const TruncationConfig cfg{64};
	const KrylovChain chain =
	    lanczos_tridiagonalize(build_liouvillian({0.0, 1.0}, cfg), FockVector::basis(64, 0), 10);
	EXPECT_NEAR(chain.hopping[0], 1.0 / std::sqrt(2.0), 1e-14);
	// even-photon chain: b_n = sqrt(n (n - 1 + 2h)) with h = 1/4
	for (std::size_t n = 1; n < 10; ++n) {
		const double nd = static_cast<double>(n);
		EXPECT_NEAR(chain.hopping[n - 1], std::sqrt(nd * (nd - 0.5)), 1e-12) << n;
	}
	EXPECT_LT(chain.max_abs_diagonal(), 1e-12);
}

TEST(Lanczos, MixedLiouvillianHasDiagonal) {
	const TruncationConfig cfg{128};
	const KrylovChain chain =
	    lanczos_tridiagonalize(build_liouvillian({1.0, 1.0}, cfg), FockVector::basis(128, 0), 6);
	for (std::size_t n = 0; n < 6; ++n) {
		EXPECT_NEAR(chain.diagonal[n], expected::lanczos_a_a1_b1[n], 1e-12) << n;
		EXPECT_NEAR(chain.hopping.size() > n ? chain.hopping[n] : chain.residual, expected::lanczos_b_a1_b1[n],
		            1e-12)
		    << n;
	}
	EXPECT_NEAR(chain.hopping[0], std::sqrt(1.5), 1e-14);
}

TEST(Lanczos, BasisIsOrthonormalAndTridiagonalizes) {
	const TruncationConfig cfg{200};
	const OperatorMatrix L = build_liouvillian({1.0, 1.0}, cfg);
	const KrylovChain chain = lanczos_tridiagonalize(L, FockVector::basis(200, 0), 80);
	const Eigen::MatrixXcd& Q = chain.basis;
	const auto m = static_cast<Eigen::Index>(chain.m);
	EXPECT_LT((Q.adjoint() * Q - Eigen::MatrixXcd::Identity(m, m)).cwiseAbs().maxCoeff(), 1e-10);
	const Eigen::MatrixXcd T = Q.adjoint() * L.entries() * Q;
	double off = 0.0;
	for (Eigen::Index i = 0; i < m; ++i)
		for (Eigen::Index j = 0; j < m; ++j)
			if (std::abs(i - j) >= 2)
				off = std::max(off, std::abs(T(i, j)));
	EXPECT_LT(off, 1e-10);
	for (Eigen::Index i = 0; i + 1 < m; ++i)
		EXPECT_NEAR(T(i + 1, i).real(), chain.hopping[static_cast<std::size_t>(i)], 1e-10);
}

TEST(Lanczos, BreakdownIsNormalTermination) {
	// Pure squeeze never leaves the even sector: 8 sites hold only 4 even states.
	const TruncationConfig cfg{8};
	const OperatorMatrix L = build_liouvillian({0.0, 1.0}, cfg);
	const KrylovChain chain = lanczos_tridiagonalize(L, FockVector::basis(8, 0), 8);
	ASSERT_TRUE(chain.breakdown_at.has_value());
	EXPECT_EQ(*chain.breakdown_at, 4u);
	EXPECT_EQ(chain.m, 4u);
	LanczosOptions strict;
	strict.strict_breakdown = true;
	EXPECT_THROW(lanczos_tridiagonalize(L, FockVector::basis(8, 0), 8, strict), Breakdown);
}

TEST(Lanczos, PreconditionErrors) {
	const TruncationConfig cfg{16};
	const OperatorMatrix L = build_liouvillian({1.0, 0.0}, cfg);
	EXPECT_THROW(lanczos_tridiagonalize(L, FockVector::basis(8, 0), 4), DimensionMismatch);
	EXPECT_THROW(lanczos_tridiagonalize(L, FockVector::basis(16, 0), 17), InvalidArgument);
	EXPECT_THROW(lanczos_tridiagonalize(L, FockVector::basis(16, 0), 0), InvalidArgument);
	Eigen::MatrixXcd m = L.entries();
	m(0, 1) += 0.1;
	EXPECT_THROW(lanczos_tridiagonalize(OperatorMatrix(m), FockVector::basis(16, 0), 4), NonHermitianInput);
}

TEST(PropagateChain, InitialConditionAndPoisson) {
	std::vector<double> b(60);
	for (std::size_t n = 0; n < b.size(); ++n)
		b[n] = std::sqrt(static_cast<double>(n + 1));
	const KrylovChain chain = chain_from_coefficients(b);
	const std::vector<double> grid = {0.0, 0.7};
	const auto wf = propagate_chain(chain, grid);
	EXPECT_NEAR(std::abs(wf[0].phi(0) - cplx(1.0)), 0.0, 1e-14);
	EXPECT_LT(wf[0].phi.tail(59).norm(), 1e-14);
	double fact = 1.0;
	for (Eigen::Index n = 0; n < 15; ++n) {
		if (n > 0)
			fact *= static_cast<double>(n);
		EXPECT_NEAR(std::norm(wf[1].phi(n)), std::exp(-0.49) * std::pow(0.49, static_cast<double>(n)) / fact, 1e-8);
	}
	EXPECT_NEAR(chain_complexity(wf[1]), 0.49, 1e-8);
	EXPECT_NEAR(chain_complexity(wf[0]), 0.0, 1e-20);
}

TEST(PropagateChain, SL2RChainComplexity) {
	// b_n = beta sqrt(n (n - 1 + 2h)), h = 1/4
	std::vector<double> b(300);
	for (std::size_t n = 0; n < b.size(); ++n) {
		const double nd = static_cast<double>(n + 1);
		b[n] = std::sqrt(nd * (nd - 0.5));
	}
	const std::vector<double> grid = {1.0};
	const auto wf = propagate_chain(chain_from_coefficients(b), grid);
	EXPECT_NEAR(chain_complexity(wf[0]), 0.5 * expected::sinh2_1, 1e-6);
}

TEST(PropagateChain, EdgeLeakAndGridErrors) {
	const KrylovChain chain = chain_from_coefficients({1.0, 1.0, 1.0});
	const std::vector<double> late = {0.0, 3.0};
	try {
		(void)propagate_chain(chain, late);
		FAIL() << "expected EdgeLeak";
	} catch (const EdgeLeak& e) {
		EXPECT_DOUBLE_EQ(e.time(), 3.0);
		EXPECT_GT(e.edge_mass(), 1e-8);
	}
	const std::vector<double> unsorted = {1.0, 0.0};
	EXPECT_THROW(propagate_chain(chain, unsorted), InvalidArgument);
	EXPECT_THROW(propagate_chain(chain_from_coefficients({}), late), InvalidArgument);
	EXPECT_THROW(chain_from_coefficients({1.0}, {0.0}), DimensionMismatch);
}

TEST(PropagateChain, MatchesProjectionOfDenseEvolution) {
	const TruncationConfig cfg{256, 1e-6};
	const OperatorMatrix L = build_liouvillian({1.0, 1.0}, cfg);
	const KrylovChain chain = lanczos_tridiagonalize(L, FockVector::basis(256, 0), 120);
	const HermitianPropagator prop(L);
	std::vector<double> grid;
	for (const auto& p : expected::chain_a1_b1)
		grid.push_back(p.t);
	const auto wf = propagate_chain(chain, grid);
	for (std::size_t i = 0; i < grid.size(); ++i) {
		const FockVector psi = evolve_state(prop, grid[i], FockVector::basis(256, 0), cfg);
		const ChainWavefunction proj = project_onto_chain(chain, psi, grid[i]);
		EXPECT_NEAR(chain_complexity(wf[i]), chain_complexity(proj), 1e-6);
		EXPECT_NEAR(chain_complexity(wf[i]), expected::chain_a1_b1[i].K, 1e-9 * expected::chain_a1_b1[i].K);
	}
	// the chain picture and the Fock picture measure different spreads
	EXPECT_LT(chain_complexity(wf[1]) + 0.5, expected::K_a1_b1_t1);
}

TEST(PropagateChain, EarlyTimeCurvature) {
	// K(t) ~ b_1^2 t^2 near t = 0
	const TruncationConfig cfg{64};
	const KrylovChain chain =
	    lanczos_tridiagonalize(build_liouvillian({0.6, 0.9}, cfg), FockVector::basis(64, 0), 40);
	std::vector<double> grid;
	for (int i = 0; i <= 10; ++i)
		grid.push_back(0.001 * i);
	const auto wf = propagate_chain(chain, grid);
	double sxy = 0.0, sxx = 0.0;
	for (const auto& w : wf) {
		const double x = w.t * w.t;
		sxy += x * chain_complexity(w);
		sxx += x * x;
	}
	const double b1 = chain.hopping[0];
	EXPECT_NEAR(sxy / sxx, b1 * b1, 1e-3 * b1 * b1);
}

TEST(ProjectOntoChain, RequiresBasis) {
	const TruncationConfig cfg{16};
	LanczosOptions opts;
	opts.keep_basis = false;
	const KrylovChain chain =
	    lanczos_tridiagonalize(build_liouvillian({1.0, 0.0}, cfg), FockVector::basis(16, 0), 4, opts);
	EXPECT_THROW(project_onto_chain(chain, FockVector::basis(16, 0), 0.0), InvalidArgument);
}

TEST(LanczosProperty, RandomHermitianMatricesReproduceMoments) {
	// <seed|L^2|seed> = a_0^2 + b_1^2 for any Hermitian L
	std::mt19937_64 rng(2024);
	std::normal_distribution<double> n(0.0, 1.0);
	for (int trial = 0; trial < 10; ++trial) {
		Eigen::MatrixXcd m(20, 20);
		for (Eigen::Index i = 0; i < 20; ++i)
			for (Eigen::Index j = 0; j < 20; ++j)
				m(i, j) = cplx(n(rng), n(rng));
		m = 0.5 * (m + m.adjoint()).eval();
		const OperatorMatrix L(m);
		const KrylovChain chain = lanczos_tridiagonalize(L, FockVector::basis(20, 3), 10);
		const double second = (m * m)(3, 3).real();
		EXPECT_NEAR(chain.diagonal[0] * chain.diagonal[0] + chain.hopping[0] * chain.hopping[0], second, 1e-10);
		EXPECT_NEAR(chain.diagonal[0], m(3, 3).real(), 1e-12);
	}
}
