#pragma once

#include "krylov/algebra.hpp"
#include "krylov/params.hpp"

#include <map>
#include <vector>

namespace krylov {

// theta e^{-|v|^2/2} cosh^{-1/2}|w| exp(-v^2 e tanh|w| / 2), e = conj(w)/|w|.
cplx phi_zero(const DisplacementParams& p);

struct SeriesOptions {
	double tol = 1e-10;
	std::size_t k_start = 64;
	std::size_t k_cap = 16384;

	void validate() const;
};

struct AmplitudeSeries {
	DisplacementParams params;
	std::size_t k_max = 0;
	std::vector<cplx> phi; // phi_0 .. phi_{k_max}
	double tail_bound = 0.0;    // 1 - sum |phi_k|^2
	double tail_estimate = 0.0; // extrapolated mass beyond k_max

	std::vector<double> probabilities() const;
};

// Forward three-term recurrence seeded with phi_zero, extended by doubling
// until both the extrapolated tail and |1 - sum| are below opts.tol.
// Throws NonConvergent once k_cap is reached.
AmplitudeSeries phi_series(const DisplacementParams& p, const SeriesOptions& opts = {});

// phi_0 .. phi_{k_max} from the Hermite closed form
//   phi_k = (e tanh|w| / 2)^{k/2} H_k(s) phi_0 / sqrt(k!),
// with H_k run in extended precision and rescaled logarithmically. Intended as
// an independent check of the recurrence, not as the production route.
std::vector<cplx> phi_hermite(const DisplacementParams& p, std::size_t k_max);

// |phi_0|^2 times the closed Mehler sum of |c^k H_k(s)|^2 / k!; equals
// sum_k |phi_k|^2 = 1 for every valid parameter set.
double mehler_normalization_check(const DisplacementParams& p);

// |v|^2 + sinh^2|w|
double complexity_closed(const DisplacementParams& p);

struct MomentReport {
	double K = 0.0;
	double sigma2 = 0.0;
	std::map<int, double> moments; // n -> sum k^n |phi_k|^2
};

// Moments 0..max_order by direct summation over the series.
MomentReport moments(const AmplitudeSeries& series, int max_order = 2);
MomentReport moments(const DisplacementParams& p, int max_order = 2, const SeriesOptions& opts = {});

// sum k^n |phi_k|^2
double moment_n(const DisplacementParams& p, int n, const SeriesOptions& opts = {});

// K_(n) = |phi_0|^2 (sinh(2|w|)/2 d/d|w|)^n |phi_0|^{-2} at fixed s, for n in
// {0, 1, 2}. The first form differentiates the Mehler exponent analytically;
// the second uses central differences in |w|. On the w = 0 branch the
// derivative degenerates and both return the Poisson moments.
double moment_identity(const DisplacementParams& p, int n);
double moment_identity_fd(const DisplacementParams& p, int n, double step = 1e-5);

struct VarianceReport {
	double direct = 0.0;  // sum (k - K)^2 |phi_k|^2
	double printed = 0.0; // |v| cosh 2|w| + sinh|w| cosh|w| (sinh 2|w| - (conj(v)^2 w + v^2 conj(w))/|w|)
	double deviation = 0.0;
};

VarianceReport variance_closed(const DisplacementParams& p, const SeriesOptions& opts = {});

// Chain-site distribution of a closed-form profile.
struct ChainProfile {
	std::vector<cplx> phi;
	double K = 0.0;     // closed form
	double K_sum = 0.0; // sum n |phi_n|^2
	double tail_bound = 0.0;
};

// phi_n = i^n (alpha t)^n e^{-alpha^2 t^2 / 2} / sqrt(n!), K = alpha^2 t^2.
ChainProfile hw_profile(double alpha, double t, double tol = 1e-14);

struct SL2RWeight {
	double h = 0.25;

	void validate() const;
};

// phi_n = sqrt(Gamma(2h+n) / (n! Gamma(2h))) tanh^n(beta t) / cosh^{2h}(beta t),
// K = 2h sinh^2(beta t).
ChainProfile sl2r_profile(SL2RWeight h, double beta, double t, double tol = 1e-14);

// alpha^2 t^2 + sinh^2(beta t) + alpha^2 [4 cosh(beta t) sinh^2(beta t/2)/beta^2 - t^2]
double schrodinger_complexity_t(const LiouvillianSpec& spec, double t);

// The bracketed interaction term alone; nonnegative for every t.
double interaction_term(const LiouvillianSpec& spec, double t);

// (1/beta) log[4 beta^2 / (beta^2 + 2 alpha^2)]. Requires beta > 0.
double scrambling_time(const LiouvillianSpec& spec);

// |<0|e^{iLt}|0>|^2 = |phi_zero(closed_form_params(spec, t))|^2
double autocorrelator_t(const LiouvillianSpec& spec, double t);

// exp(-alpha^2 (e^{2 beta t} - 1)^2 / (8 beta^2) + 2 beta t) / cosh(2 beta t),
// kept only for comparison against autocorrelator_t.
double autocorrelator_printed(const LiouvillianSpec& spec, double t);

// Least-squares slope of log K(t) on [t0, t1].
double late_time_exponent(const LiouvillianSpec& spec, double t0 = 4.0, double t1 = 6.0,
                          std::size_t samples = 41);

} // namespace krylov
